#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <vector>

#include "sce/spectrum.hpp"

namespace sce {

enum class FermionModel { XX, TFIM };

/// Boundary tag: the infinite chain, evaluated through closed-form correlations.
struct InfiniteClosedForm {};

/// Boundary tag: an open chain of `total_sites` sites.
struct OpenFinite {
  int total_sites = 0;
};

/// A free-fermion chain.
///
/// XX: H = (1/2) sum_i (c_i^dag c_{i+1} + h.c.), the Jordan-Wigner image of
///     sum_i (Sx Sx + Sy Sy). On open chains the lowest `particles()` levels are
///     filled, where particles() = floor(filling * L + 1/2) unless overridden.
///     For odd L at half filling this is the S^z = +1/2 sector.
///
/// TFIM: H = -sum_i sigma^z_i - lambda sum_i sigma^x_i sigma^x_{i+1}, with
///     sigma^z = 1 - 2 n. In the disordered phase lambda < 1 and the elliptic
///     modulus of the closed-form entanglement results is k = lambda.
///     This identification is the only place the convention is fixed.
struct FermionModelSpec {
  FermionModel kind = FermionModel::XX;
  double filling = 0.5;
  double modulus = 0.5;
  std::optional<OpenFinite> open;
  std::optional<int> particle_override;

  static FermionModelSpec xx_infinite(double filling = 0.5);
  static FermionModelSpec xx_open(int total_sites, double filling = 0.5);
  static FermionModelSpec tfim_open(int total_sites, double modulus);

  bool is_open() const { return open.has_value(); }
  int total_sites() const { return open ? open->total_sites : 0; }
  int particles() const;

  /// Throws InvalidArgument on any violated domain constraint.
  void validate() const;
};

/// Correlations of a Gaussian state on an ordered list of sites.
/// G(m, n) = <c_m^dag c_n>; F(m, n) = <c_m^dag c_n^dag>, absent when identically zero.
struct CorrelationData {
  std::vector<int> sites;
  Eigen::MatrixXd G;
  std::optional<Eigen::MatrixXd> F;

  std::size_t size() const { return sites.size(); }
  bool has_pairing() const { return F.has_value(); }
};

/// Half-open range [begin, begin + count) of positions in CorrelationData::sites.
struct IndexRange {
  std::size_t begin = 0;
  std::size_t count = 0;
};

/// Quadratic Hamiltonian H = (1/2) Psi^dag M Psi + tr(A)/2 with
/// Psi = (c_1..c_N, c_1^dag..c_N^dag), M = [[A, B], [-B, -A]].
struct BdgHamiltonian {
  FermionModelSpec model;
  Eigen::MatrixXd hopping;  ///< A, symmetric
  Eigen::MatrixXd pairing;  ///< B, antisymmetric
  Eigen::MatrixXd matrix;   ///< M, 2N x 2N

  int sites() const { return static_cast<int>(hopping.rows()); }
  bool conserves_particles() const { return model.kind == FermionModel::XX; }
};

/// G for an L_sub-site interval of the infinite chain at filling nu:
/// G(m, n) = sin(k_F (m - n)) / (pi (m - n)), G(m, m) = nu, k_F = pi nu.
CorrelationData xx_correlations_infinite(int L_sub, double filling = 0.5);

/// G for the first L_sub sites of a half-infinite chain (sites 1, 2, ...):
/// G(m, n) = [sin(k_F (m - n)) / (m - n) - sin(k_F (m + n)) / (m + n)] / pi.
CorrelationData xx_correlations_half_infinite(int L_sub, double filling = 0.5);

BdgHamiltonian build_bdg(const FermionModelSpec& model);

/// Single-particle excitation energies: the eigenvalues of M (TFIM) or of A (XX), ascending.
Eigen::VectorXd bdg_energies(const BdgHamiltonian& bdg);

/// Ground-state correlations over the whole chain. Exactly zero BdG energies
/// (|E| <= 1e-10 ||M||) are occupied with weight 1/2.
CorrelationData ground_state_correlations(const BdgHamiltonian& bdg);

/// <H> in the state returned by ground_state_correlations.
double ground_state_energy(const BdgHamiltonian& bdg);

/// Entanglement spectrum of the sites in `subsystem`.
///
/// With F absent: zeta are the eigenvalues of the restricted G. With pairing
/// present: the lower half of the spectrum of the Nambu matrix
/// [[1 - G, -F], [F, G]], so all eps >= 0.
EntanglementSpectrum single_particle_energies(const CorrelationData& corr, IndexRange subsystem);

inline EntanglementSpectrum single_particle_energies(const CorrelationData& corr) {
  return single_particle_energies(corr, IndexRange{0, corr.size()});
}

}  // namespace sce
