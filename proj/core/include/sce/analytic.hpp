#pragma once

#include <variant>

namespace sce {

/// Parameters of the conformal predictions. `a` is the short-distance cutoff
/// in lattice units, `k1` the non-universal additive constant of S1 and `b_n`
/// the amplitude of tr(rho^n) at the Renyi index being evaluated.
struct ConformalParams {
  double c = 1.0;
  double a = 1.0;
  double k1 = 0.0;
  double b_n = 1.0;
};

struct InfiniteLineInterval {
  double L = 0.0;
};

/// Block of L sites at the end of a half-infinite chain.
struct HalfInfiniteEnd {
  double L = 0.0;
};

/// Finite chain of L_chain sites cut into l and L_chain - l.
struct FiniteChainCut {
  double L_chain = 0.0;
  double l = 0.0;
};

using Geometry = std::variant<InfiniteLineInterval, HalfInfiniteEnd, FiniteChainCut>;

void validate(const Geometry& geometry);

/// Argument of the logarithm in the S1 law, in units of the cutoff a:
/// L/a, L/a, and (2 L_chain / (pi a)) sin(pi l / L_chain) respectively.
double effective_length(const Geometry& geometry, double a = 1.0);

/// Coefficient multiplying c ln(effective_length) in S1: 1/6, 1/12, 1/12.
double s1_log_prefactor(const Geometry& geometry);

double conformal_s1(const Geometry& geometry, const ConformalParams& p);

/// b_n (L/a)^(-(c/6)(n - 1/n)).
double conformal_renyi_trace(double L, double n, const ConformalParams& p);

/// pi^2 (2k + 1) / (2 ln L), the k-th positive level at large L.
double xx_asymptotic_spectrum(double L, int k);

/// Complete elliptic integral of the first kind K(k), modulus convention
/// (k, not m = k^2), evaluated as pi / (2 AGM(1, sqrt(1 - k^2))).
double elliptic_K(double k);

/// S1 of a transverse Ising chain cut into two half-infinite pieces, disordered
/// phase with modulus k:
/// (1/24) [ln(16 / (k^2 k'^2)) - pi K(k') / K(k)], k'^2 = 1 - k^2.
double tfim_s1_half(double k);

/// Leading behaviour of tfim_s1_half as k -> 1:
/// (1/24) [ln(8 / (1 - k)) - (pi^2 / 2) / ln(8 / (1 - k))].
double tfim_s1_near_critical(double k);

}  // namespace sce
