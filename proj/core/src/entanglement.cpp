#include "sce/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>
#include <utility>

#include "sce/error.hpp"

namespace sce {
namespace {

constexpr double kOccupationRangeTolerance = 1e-10;

// ln(1 + e^{-|x|}), never overflows.
double softplus_neg_abs(double x) { return std::log1p(std::exp(-std::abs(x))); }

// ln(1 + e^{-x}).
double softplus_neg(double x) { return x >= 0.0 ? softplus_neg_abs(x) : -x + softplus_neg_abs(x); }

}  // namespace

EntanglementSpectrum EntanglementSpectrum::from_occupations(std::span<const double> zetas) {
  EntanglementSpectrum out;
  out.epsilons_.reserve(zetas.size());
  for (double z : zetas) {
    if (!(z >= -kOccupationRangeTolerance && z <= 1.0 + kOccupationRangeTolerance)) {
      throw NumericalError("occupation " + std::to_string(z) + " outside [0, 1]");
    }
    const double clipped = std::clamp(z, kOccupationFloor, 1.0 - kOccupationFloor);
    out.epsilons_.push_back(std::log((1.0 - clipped) / clipped));
  }
  out.finish();
  return out;
}

EntanglementSpectrum EntanglementSpectrum::from_energies(std::span<const double> epsilons) {
  EntanglementSpectrum out;
  const double cap = std::log((1.0 - kOccupationFloor) / kOccupationFloor);
  out.epsilons_.reserve(epsilons.size());
  for (double e : epsilons) {
    require(!std::isnan(e), "entanglement energy is NaN");
    out.epsilons_.push_back(std::clamp(e, -cap, cap));
  }
  out.finish();
  return out;
}

void EntanglementSpectrum::finish() {
  zero_modes_ = 0;
  for (double& e : epsilons_) {
    if (std::abs(e) < kZeroModeTolerance) {
      e = 0.0;
      ++zero_modes_;
    }
  }
  std::sort(epsilons_.begin(), epsilons_.end());
  occupations_.resize(epsilons_.size());
  std::transform(epsilons_.begin(), epsilons_.end(), occupations_.begin(),
                 [](double e) { return 1.0 / (1.0 + std::exp(e)); });
}

double EntanglementSpectrum::pairing_mismatch() const {
  double worst = 0.0;
  const std::size_t n = epsilons_.size();
  for (std::size_t i = 0; i < n / 2 + n % 2; ++i) {
    worst = std::max(worst, std::abs(epsilons_[i] + epsilons_[n - 1 - i]));
  }
  return worst;
}

EntanglementSummary summary_from_single_particle(const EntanglementSpectrum& spectrum) {
  EntanglementSummary out;
  for (double e : spectrum.epsilons()) {
    const double a = std::abs(e);
    const double sp = softplus_neg_abs(e);
    out.S1 += sp;
    out.S += sp + a / (std::exp(a) + 1.0);
    out.lnZ += softplus_neg(e);
    out.E0 += std::min(e, 0.0);
    out.meanH += e / (1.0 + std::exp(e));
  }
  out.w1 = std::exp(-out.S1);
  return out;
}

EntanglementSummary summary_from_weights(const RdmSpectrum& rdm) {
  require(!rdm.weights.empty(), "weight list is empty");
  require(!rdm.truncated, "entropies need the untruncated spectrum");
  double sum = 0.0;
  for (double w : rdm.weights) {
    require(w >= -1e-12, "negative weight " + std::to_string(w));
    sum += std::max(w, 0.0);
  }
  require(std::abs(sum - 1.0) <= 1e-8, "weights sum to " + std::to_string(sum) + ", expected 1");

  EntanglementSummary out;
  double w1 = 0.0;
  for (double w : rdm.weights) {
    const double p = std::max(w, 0.0) / sum;
    if (p > 0.0) out.S -= p * std::log(p);
    w1 = std::max(w1, p);
  }
  out.w1 = w1;
  out.S1 = -std::log(w1);
  out.lnZ = 0.0;
  out.E0 = out.S1;
  out.meanH = out.S;
  return out;
}

double renyi_ln_trace(const EntanglementSpectrum& spectrum, double n) {
  require(n > 0.0, "Renyi index must be positive");
  double total = 0.0;
  for (double e : spectrum.epsilons()) {
    const double a = std::abs(e);
    const double ln_pmax = -softplus_neg_abs(a);
    total += n * ln_pmax + std::log1p(std::exp(-n * a));
  }
  return total;
}

RdmSpectrum many_body_spectrum(const EntanglementSpectrum& spectrum, std::size_t M) {
  require(M >= 1, "M must be positive");
  const auto& eps = spectrum.epsilons();
  const std::size_t K = eps.size();

  // Flipping mode k from its likelier to its less likely occupation costs |eps_k| in log-weight.
  std::vector<double> cost(K);
  std::transform(eps.begin(), eps.end(), cost.begin(), [](double e) { return std::abs(e); });
  std::vector<std::size_t> order(K);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cost[a] < cost[b]; });
  std::vector<double> d(K);
  for (std::size_t i = 0; i < K; ++i) d[i] = cost[order[i]];

  double base = 0.0;
  for (double e : eps) base -= softplus_neg_abs(e);

  RdmSpectrum out;
  out.truncated = K < 64 ? M < (std::size_t{1} << K) : true;
  out.weights.reserve(std::min<std::size_t>(M, K < 30 ? std::size_t{1} << K : M));
  out.weights.push_back(std::exp(base));

  // Subsets of sorted positions; each subset is reached from exactly one parent
  // by either appending last+1 or replacing last with last+1.
  struct Node {
    double cost;
    std::vector<std::size_t> flips;
  };
  auto worse = [](const Node& a, const Node& b) {
    if (a.cost != b.cost) return a.cost > b.cost;
    return b.flips < a.flips;
  };
  std::priority_queue<Node, std::vector<Node>, decltype(worse)> heap(worse);
  if (K > 0) heap.push(Node{d[0], {0}});

  while (out.weights.size() < M && !heap.empty()) {
    Node node = heap.top();
    heap.pop();
    out.weights.push_back(std::exp(base - node.cost));
    const std::size_t last = node.flips.back();
    if (last + 1 < K) {
      Node append = node;
      append.flips.push_back(last + 1);
      append.cost += d[last + 1];
      Node replace = std::move(node);
      replace.flips.back() = last + 1;
      replace.cost += d[last + 1] - d[last];
      heap.push(std::move(append));
      heap.push(std::move(replace));
    }
  }

  out.weight_sum = std::accumulate(out.weights.begin(), out.weights.end(), 0.0);
  return out;
}

DistillationBound distillation_bound(double w1) {
  require(w1 > 0.0 && w1 <= 1.0, "largest weight must lie in (0, 1]");
  constexpr double slack = 1e-12;
  auto achievable = [&](double M) { return w1 <= 1.0 / M + slack; };
  double M = std::floor(1.0 / w1);
  while (achievable(M + 1.0)) M += 1.0;
  while (M > 1.0 && !achievable(M)) M -= 1.0;
  return DistillationBound{static_cast<std::uint64_t>(M)};
}

}  // namespace sce
