#include "sce/analytic.hpp"

#include <cmath>
#include <numbers>

#include "sce/error.hpp"

namespace sce {

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
}  // namespace

void validate(const Geometry& geometry) {
  std::visit(overloaded{
                 [](const InfiniteLineInterval& g) { require(g.L > 0.0, "interval length must be positive"); },
                 [](const HalfInfiniteEnd& g) { require(g.L > 0.0, "block length must be positive"); },
                 [](const FiniteChainCut& g) {
                   require(g.L_chain > 0.0 && g.l > 0.0, "chain and cut lengths must be positive");
                   require(g.l < g.L_chain, "cut position must lie inside the chain");
                 },
             },
             geometry);
}

double effective_length(const Geometry& geometry, double a) {
  validate(geometry);
  require(a > 0.0, "cutoff a must be positive");
  return std::visit(overloaded{
                        [a](const InfiniteLineInterval& g) { return g.L / a; },
                        [a](const HalfInfiniteEnd& g) { return g.L / a; },
                        [a](const FiniteChainCut& g) {
                          return 2.0 * g.L_chain / (std::numbers::pi * a) *
                                 std::sin(std::numbers::pi * g.l / g.L_chain);
                        },
                    },
                    geometry);
}

double s1_log_prefactor(const Geometry& geometry) {
  return std::holds_alternative<InfiniteLineInterval>(geometry) ? 1.0 / 6.0 : 1.0 / 12.0;
}

double conformal_s1(const Geometry& geometry, const ConformalParams& p) {
  const double x = effective_length(geometry, p.a);
  require(x > 0.0, "argument of the logarithm must be positive");
  return p.c * s1_log_prefactor(geometry) * std::log(x) + p.k1;
}

double conformal_renyi_trace(double L, double n, const ConformalParams& p) {
  require(L > 0.0, "length must be positive");
  require(n > 0.0, "Renyi index must be positive");
  require(p.a > 0.0, "cutoff a must be positive");
  return p.b_n * std::pow(L / p.a, -(p.c / 6.0) * (n - 1.0 / n));
}

double xx_asymptotic_spectrum(double L, int k) {
  require(L >= 2.0, "length must be at least 2");
  require(k >= 0, "mode index must be nonnegative");
  return std::numbers::pi * std::numbers::pi * (2.0 * k + 1.0) / (2.0 * std::log(L));
}

double elliptic_K(double k) {
  require(k >= 0.0, "elliptic modulus must be nonnegative");
  require(k < 1.0, "K(k) diverges at k = 1");
  double a = 1.0;
  double b = std::sqrt((1.0 - k) * (1.0 + k));
  // Quadratic convergence; |a - b| <= 1e-15 a is reached within 8 steps on [0, 1).
  for (int it = 0; it < 64 && std::abs(a - b) > 1e-15 * a; ++it) {
    const double next = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = next;
  }
  return std::numbers::pi / (a + b);
}

double tfim_s1_half(double k) {
  require(k > 0.0 && k < 1.0, "modulus k must lie in (0, 1)");
  const double kp = std::sqrt((1.0 - k) * (1.0 + k));
  return (std::log(16.0 / (k * k * kp * kp)) - std::numbers::pi * elliptic_K(kp) / elliptic_K(k)) / 24.0;
}

double tfim_s1_near_critical(double k) {
  require(k > 0.0 && k < 1.0, "modulus k must lie in (0, 1)");
  const double lg = std::log(8.0 / (1.0 - k));
  return (lg - 0.5 * std::numbers::pi * std::numbers::pi / lg) / 24.0;
}

}  // namespace sce
