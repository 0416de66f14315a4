#include "sce/exact_diag.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <random>
#include <string>

#include "sce/entanglement.hpp"
#include "sce/error.hpp"
#include "sce/tasks.hpp"

namespace sce {
namespace {

constexpr int kHardSiteLimit = 30;
constexpr double kAcceptResidual = 1e-10;
constexpr double kWeightTrim = 1e-14;

using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

SparseRowMatrix xxz_hamiltonian(const SectorBasis& basis, double delta) {
  const int L = basis.sites();
  const auto configs = basis.configs();
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(configs.size() * static_cast<std::size_t>(L));
  for (std::size_t row = 0; row < configs.size(); ++row) {
    const std::uint32_t s = configs[row];
    double diagonal = 0.0;
    for (int i = 0; i + 1 < L; ++i) {
      const bool a = (s >> i) & 1u;
      const bool b = (s >> (i + 1)) & 1u;
      if (a == b) {
        diagonal += 0.25 * delta;
      } else {
        diagonal -= 0.25 * delta;
        const std::uint32_t flipped = s ^ (3u << i);
        entries.emplace_back(static_cast<int>(row), static_cast<int>(basis.index_of(flipped)), 0.5);
      }
    }
    entries.emplace_back(static_cast<int>(row), static_cast<int>(row), diagonal);
  }
  const auto dim = static_cast<Eigen::Index>(configs.size());
  SparseRowMatrix H(dim, dim);
  H.setFromTriplets(entries.begin(), entries.end());
  return H;
}

Eigen::VectorXd dense_ground_state(const SparseRowMatrix& H) {
  const Eigen::MatrixXd dense = Eigen::MatrixXd(H);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
  if (solver.info() != Eigen::Success) throw NumericalError("dense eigensolver did not converge");
  return solver.eigenvectors().col(0);
}

// Explicitly restarted Lanczos with full reorthogonalization.
Eigen::VectorXd krylov_ground_state(const SparseRowMatrix& H, double target) {
  const Eigen::Index dim = H.rows();
  const Eigen::Index m = std::min<Eigen::Index>(dim, 80);

  std::mt19937_64 rng(0x5ce1u);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  Eigen::VectorXd start(dim);
  for (Eigen::Index i = 0; i < dim; ++i) start(i) = uniform(rng);
  start.normalize();

  Eigen::MatrixXd V(dim, m);
  double best_residual = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best = start;
  int stalled = 0;

  for (int restart = 0; restart < 400; ++restart) {
    std::vector<double> alpha;
    std::vector<double> beta;
    V.col(0) = start;
    Eigen::Index steps = 0;
    for (Eigen::Index j = 0; j < m; ++j) {
      Eigen::VectorXd w = H * V.col(j);
      alpha.push_back(V.col(j).dot(w));
      for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXd overlaps = V.leftCols(j + 1).transpose() * w;
        w.noalias() -= V.leftCols(j + 1) * overlaps;
      }
      steps = j + 1;
      const double norm = w.norm();
      if (j + 1 == m || norm < 1e-13) break;
      beta.push_back(norm);
      V.col(j + 1) = w / norm;
    }

    Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), steps);
    Eigen::VectorXd off = Eigen::VectorXd::Zero(std::max<Eigen::Index>(steps - 1, 0));
    for (Eigen::Index i = 0; i + 1 < steps; ++i) off(i) = beta[static_cast<std::size_t>(i)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    if (steps == 1) {
      tri.compute(Eigen::MatrixXd::Constant(1, 1, diag(0)));
    } else {
      tri.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
    }
    if (tri.info() != Eigen::Success) throw NumericalError("tridiagonal eigensolver failed");

    Eigen::VectorXd ritz = V.leftCols(steps) * tri.eigenvectors().col(0);
    ritz.normalize();
    const Eigen::VectorXd Hr = H * ritz;
    const double theta = ritz.dot(Hr);
    const double residual = (Hr - theta * ritz).norm();

    if (residual < best_residual * 0.999) {
      stalled = 0;
    } else {
      ++stalled;
    }
    if (residual < best_residual) {
      best_residual = residual;
      best = ritz;
    }
    if (residual <= target) return ritz;
    if (stalled >= 5 && best_residual <= kAcceptResidual) return best;
    start = ritz;
  }
  if (best_residual <= kAcceptResidual) return best;
  throw NumericalError("Lanczos did not converge: residual " + std::to_string(best_residual));
}

int default_twice_sz(int sites) { return sites % 2 == 0 ? 0 : 1; }

}  // namespace

int max_ed_sites() {
  const char* env = std::getenv("SCE_MAX_ED_SITES");
  if (env == nullptr || *env == '\0') return kDefaultMaxEdSites;
  char* end = nullptr;
  const long value = std::strtol(env, &end, 10);
  require(end != env && *end == '\0', std::string("SCE_MAX_ED_SITES is not an integer: ") + env);
  require(value >= 2 && value <= kHardSiteLimit,
          "SCE_MAX_ED_SITES must lie in [2, " + std::to_string(kHardSiteLimit) + "]");
  return static_cast<int>(value);
}

void XxzSpec::validate(int cap) const {
  require(sites >= 2, "XXZ chain needs at least 2 sites");
  require(cap <= kHardSiteLimit, "site cap exceeds the hard limit of " + std::to_string(kHardSiteLimit));
  require(sites <= cap, "XXZ chain of " + std::to_string(sites) + " sites exceeds the cap of " +
                            std::to_string(cap) + " (set SCE_MAX_ED_SITES)");
  require(std::isfinite(delta), "anisotropy must be finite");
}

SectorBasis::SectorBasis(int sites, int twice_sz) : sites_(sites), twice_sz_(twice_sz) {
  require(sites >= 1 && sites <= kHardSiteLimit, "basis size out of range");
  require((sites + twice_sz) % 2 == 0, "2 S^z must have the parity of the site count");
  ups_ = (sites + twice_sz) / 2;
  require(ups_ >= 0 && ups_ <= sites, "S^z outside the allowed range");

  lookup_.assign(std::size_t{1} << sites, -1);
  if (ups_ == 0) {
    configs_.push_back(0);
  } else {
    // Gosper's hack walks same-popcount integers in ascending order.
    const std::uint64_t limit = std::uint64_t{1} << sites;
    for (std::uint64_t s = (std::uint64_t{1} << ups_) - 1; s < limit;) {
      configs_.push_back(static_cast<std::uint32_t>(s));
      const std::uint64_t c = s & (~s + 1);
      const std::uint64_t r = s + c;
      s = (((r ^ s) >> 2) / c) | r;
    }
  }
  for (std::size_t i = 0; i < configs_.size(); ++i) lookup_[configs_[i]] = static_cast<std::int32_t>(i);
}

std::int64_t SectorBasis::index_of(std::uint32_t config) const {
  if (config >= lookup_.size()) return -1;
  return lookup_[config];
}

GroundStateVector xxz_ground_state(const XxzSpec& spec, const EdOptions& options) {
  spec.validate(options.site_cap.value_or(max_ed_sites()));
  auto basis = std::make_shared<const SectorBasis>(spec.sites, options.twice_sz.value_or(default_twice_sz(spec.sites)));
  const SparseRowMatrix H = xxz_hamiltonian(*basis, spec.delta);

  bool dense = options.solver == EdSolver::Dense;
  if (options.solver == EdSolver::Auto) dense = basis->dimension() <= options.dense_limit;
  Eigen::VectorXd v = dense ? dense_ground_state(H) : krylov_ground_state(H, options.residual_target);
  v.normalize();

  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-14) {
      if (v(i) < 0.0) v = -v;
      break;
    }
  }

  GroundStateVector state;
  state.basis = std::move(basis);
  state.energy = v.dot(H * v);
  state.amplitudes.assign(v.data(), v.data() + v.size());
  return state;
}

RdmSpectrum rdm_weights(const GroundStateVector& state, int L_left) {
  require(state.basis != nullptr, "state has no basis");
  require(state.amplitudes.size() == state.basis->dimension(), "amplitude count does not match the basis");
  const int L = state.sites();
  require(L_left >= 1 && L_left < L, "cut must leave at least one site on each side");
  const int L_right = L - L_left;
  const int ups = state.basis->up_count();

  // Rank of each half-configuration among those with the same popcount.
  auto ranks = [](int bits) {
    std::vector<std::int32_t> rank(std::size_t{1} << bits);
    std::vector<std::int32_t> seen(static_cast<std::size_t>(bits) + 1, 0);
    for (std::size_t x = 0; x < rank.size(); ++x) rank[x] = seen[std::popcount(x)]++;
    return std::pair{rank, seen};
  };
  const auto [left_rank, left_count] = ranks(L_left);
  const auto [right_rank, right_count] = ranks(L_right);

  const int lo = std::max(0, ups - L_right);
  const int hi = std::min(L_left, ups);
  std::vector<Eigen::MatrixXd> blocks;
  for (int n = lo; n <= hi; ++n) blocks.emplace_back(Eigen::MatrixXd::Zero(left_count[n], right_count[ups - n]));

  const std::uint32_t mask = (1u << L_left) - 1u;
  const auto configs = state.basis->configs();
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const std::uint32_t left = configs[i] & mask;
    const std::uint32_t right = configs[i] >> L_left;
    blocks[std::popcount(left) - lo](left_rank[left], right_rank[right]) = state.amplitudes[i];
  }

  RdmSpectrum out;
  for (const auto& block : blocks) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(block);
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
      const double w = svd.singularValues()(k) * svd.singularValues()(k);
      if (w >= kWeightTrim) out.weights.push_back(w);
    }
  }
  std::sort(out.weights.begin(), out.weights.end(), std::greater<>());
  for (double w : out.weights) out.weight_sum += w;
  return out;
}

std::vector<XxzScanRow> xxz_scan(std::span<const double> deltas, std::span<const int> sites, unsigned threads,
                                 const EdOptions& options) {
  require(!deltas.empty(), "anisotropy list is empty");
  require(!sites.empty(), "size list is empty");
  const int cap = options.site_cap.value_or(max_ed_sites());
  for (int L : sites) XxzSpec{L, 0.0}.validate(cap);

  std::vector<XxzScanRow> rows(deltas.size() * sites.size());
  parallel_for(rows.size(), threads, [&](std::size_t index) {
    const double delta = deltas[index / sites.size()];
    const int L = sites[index % sites.size()];
    const auto state = xxz_ground_state(XxzSpec{L, delta}, options);
    const int left = (L + 1) / 2;
    const auto summary = summary_from_weights(rdm_weights(state, left));
    rows[index] = XxzScanRow{delta, L, left, summary.S, summary.S1, summary.w1, summary.lnZ, summary.E0};
  });
  return rows;
}

}  // namespace sce
