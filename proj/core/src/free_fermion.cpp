#include "sce/free_fermion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sce/error.hpp"

namespace sce {
namespace {

constexpr double kSymmetryTolerance = 1e-12;

void require_filling(double nu) { require(nu > 0.0 && nu < 1.0, "filling must lie in (0, 1)"); }

double max_asymmetry(const Eigen::MatrixXd& m, double sign) {
  return (m - sign * m.transpose()).cwiseAbs().maxCoeff();
}

// sin(pi x), exactly zero at integer x.
double sin_pi(double x) {
  const double r = x - 2.0 * std::round(0.5 * x);
  if (r == 0.0 || std::abs(r) == 1.0) return 0.0;
  return std::sin(std::numbers::pi * r);
}

// sin(k_F d) / (pi d) with the d = 0 limit nu.
Eigen::VectorXd sine_kernel(int max_distance, double nu) {
  Eigen::VectorXd kernel(max_distance + 1);
  kernel(0) = nu;
  for (int d = 1; d <= max_distance; ++d) kernel(d) = sin_pi(nu * d) / (std::numbers::pi * d);
  return kernel;
}

// Half filling on a bipartite chain: G = 1/2 + K with K connecting only sites
// an odd distance apart.
bool sublattice_symmetric(const Eigen::MatrixXd& G) {
  constexpr double tol = 1e-13;
  for (Eigen::Index i = 0; i < G.rows(); ++i) {
    if (std::abs(G(i, i) - 0.5) > tol) return false;
    for (Eigen::Index j = i + 2; j < G.cols(); j += 2) {
      if (std::abs(G(i, j)) > tol) return false;
    }
  }
  return true;
}

// The eigenvalues of K are +-s for the singular values s of its even-odd block,
// plus one zero for odd sizes. Working from s keeps the (eps, -eps) pairing exact.
EntanglementSpectrum paired_spectrum(const Eigen::MatrixXd& G) {
  const Eigen::Index n = G.rows();
  const Eigen::Index rows = (n + 1) / 2;
  const Eigen::Index cols = n / 2;
  std::vector<double> eps;
  eps.reserve(static_cast<std::size_t>(n));
  if (cols > 0) {
    Eigen::MatrixXd block(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) block(r, c) = G(2 * r, 2 * c + 1);
    }
    Eigen::BDCSVD<Eigen::MatrixXd> svd(block);
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
      const double t = 2.0 * svd.singularValues()(k);
      if (t > 1.0 + 2e-10) throw NumericalError("occupation outside [0, 1]");
      const double clipped = std::min(t, 1.0 - 2.0 * kOccupationFloor);
      const double e = std::log1p(clipped) - std::log1p(-clipped);
      eps.push_back(e);
      eps.push_back(-e);
    }
  }
  if (n % 2 == 1) eps.push_back(0.0);
  return EntanglementSpectrum::from_energies(eps);
}

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solve(const Eigen::MatrixXd& m, int options) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, options);
  if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigensolver did not converge");
  return solver;
}

}  // namespace

FermionModelSpec FermionModelSpec::xx_infinite(double filling) {
  FermionModelSpec spec;
  spec.kind = FermionModel::XX;
  spec.filling = filling;
  spec.validate();
  return spec;
}

FermionModelSpec FermionModelSpec::xx_open(int total_sites, double filling) {
  FermionModelSpec spec;
  spec.kind = FermionModel::XX;
  spec.filling = filling;
  spec.open = OpenFinite{total_sites};
  spec.validate();
  return spec;
}

FermionModelSpec FermionModelSpec::tfim_open(int total_sites, double modulus) {
  FermionModelSpec spec;
  spec.kind = FermionModel::TFIM;
  spec.modulus = modulus;
  spec.open = OpenFinite{total_sites};
  spec.validate();
  return spec;
}

int FermionModelSpec::particles() const {
  if (particle_override) return *particle_override;
  return static_cast<int>(std::floor(filling * total_sites() + 0.5));
}

void FermionModelSpec::validate() const {
  if (kind == FermionModel::XX) {
    require_filling(filling);
  } else {
    require(modulus > 0.0 && modulus < 1.0, "TFIM modulus k must lie in (0, 1)");
  }
  if (open) {
    require(open->total_sites >= 2, "open chain needs at least 2 sites");
    if (particle_override) {
      require(*particle_override >= 0 && *particle_override <= open->total_sites,
              "particle number must lie in [0, L_total]");
    }
  }
}

CorrelationData xx_correlations_infinite(int L_sub, double filling) {
  require(L_sub >= 1, "subsystem length must be positive");
  require_filling(filling);
  const Eigen::VectorXd kernel = sine_kernel(L_sub - 1, filling);
  CorrelationData out;
  out.sites.resize(L_sub);
  out.G.resize(L_sub, L_sub);
  for (int m = 0; m < L_sub; ++m) {
    out.sites[m] = m;
    for (int n = 0; n < L_sub; ++n) out.G(m, n) = kernel(std::abs(m - n));
  }
  return out;
}

CorrelationData xx_correlations_half_infinite(int L_sub, double filling) {
  require(L_sub >= 1, "subsystem length must be positive");
  require_filling(filling);
  const Eigen::VectorXd kernel = sine_kernel(2 * L_sub, filling);
  CorrelationData out;
  out.sites.resize(L_sub);
  out.G.resize(L_sub, L_sub);
  for (int m = 1; m <= L_sub; ++m) {
    out.sites[m - 1] = m;
    for (int n = 1; n <= L_sub; ++n) out.G(m - 1, n - 1) = kernel(std::abs(m - n)) - kernel(m + n);
  }
  return out;
}

BdgHamiltonian build_bdg(const FermionModelSpec& model) {
  model.validate();
  require(model.is_open(), "BdG construction needs an open finite chain");
  const int N = model.total_sites();

  BdgHamiltonian bdg;
  bdg.model = model;
  bdg.hopping = Eigen::MatrixXd::Zero(N, N);
  bdg.pairing = Eigen::MatrixXd::Zero(N, N);
  if (model.kind == FermionModel::XX) {
    for (int i = 0; i + 1 < N; ++i) bdg.hopping(i, i + 1) = bdg.hopping(i + 1, i) = 0.5;
  } else {
    const double lambda = model.modulus;
    for (int i = 0; i < N; ++i) bdg.hopping(i, i) = 2.0;
    for (int i = 0; i + 1 < N; ++i) {
      bdg.hopping(i, i + 1) = bdg.hopping(i + 1, i) = -lambda;
      bdg.pairing(i, i + 1) = -lambda;
      bdg.pairing(i + 1, i) = lambda;
    }
  }
  bdg.matrix.resize(2 * N, 2 * N);
  bdg.matrix << bdg.hopping, bdg.pairing, -bdg.pairing, -bdg.hopping;
  return bdg;
}

Eigen::VectorXd bdg_energies(const BdgHamiltonian& bdg) {
  const auto& m = bdg.conserves_particles() ? bdg.hopping : bdg.matrix;
  return solve(m, Eigen::EigenvaluesOnly).eigenvalues();
}

CorrelationData ground_state_correlations(const BdgHamiltonian& bdg) {
  const int N = bdg.sites();
  CorrelationData out;
  out.sites.resize(N);
  for (int i = 0; i < N; ++i) out.sites[i] = i;

  if (bdg.conserves_particles()) {
    const auto solver = solve(bdg.hopping, Eigen::ComputeEigenvectors);
    const int filled = bdg.model.particles();
    const auto occupied = solver.eigenvectors().leftCols(filled);
    out.G = occupied * occupied.transpose();
    return out;
  }

  const auto solver = solve(bdg.matrix, Eigen::ComputeEigenvectors);
  const Eigen::VectorXd& energies = solver.eigenvalues();
  const Eigen::MatrixXd& vectors = solver.eigenvectors();
  const double zero = 1e-10 * std::max(1.0, energies.cwiseAbs().maxCoeff());

  // <Psi Psi^dag> is the projector onto the positive-energy modes.
  Eigen::VectorXd weight(2 * N);
  for (int k = 0; k < 2 * N; ++k) {
    weight(k) = energies(k) > zero ? 1.0 : (energies(k) < -zero ? 0.0 : 0.5);
  }
  const Eigen::MatrixXd P = vectors * weight.asDiagonal() * vectors.transpose();
  out.G = Eigen::MatrixXd::Identity(N, N) - P.topLeftCorner(N, N).transpose();
  out.F = P.bottomLeftCorner(N, N);
  return out;
}

double ground_state_energy(const BdgHamiltonian& bdg) {
  if (bdg.conserves_particles()) {
    const Eigen::VectorXd e = bdg_energies(bdg);
    return e.head(bdg.model.particles()).sum();
  }
  const Eigen::VectorXd e = bdg_energies(bdg);
  double positive = 0.0;
  for (int k = 0; k < e.size(); ++k) positive += std::max(e(k), 0.0);
  // -sum_i sigma^z_i = sum_i (2 n_i - 1) contributes the constant -N.
  return 0.5 * bdg.hopping.trace() - 0.5 * positive - bdg.sites();
}

EntanglementSpectrum single_particle_energies(const CorrelationData& corr, IndexRange subsystem) {
  require(subsystem.begin + subsystem.count <= corr.size(), "subsystem range exceeds the correlation data");
  const auto n = static_cast<Eigen::Index>(subsystem.count);
  const auto b = static_cast<Eigen::Index>(subsystem.begin);
  if (n == 0) return {};

  const Eigen::MatrixXd G = corr.G.block(b, b, n, n);
  if (max_asymmetry(G, 1.0) > kSymmetryTolerance) throw InvalidArgument("correlation matrix G is not symmetric");

  if (!corr.has_pairing()) {
    if (sublattice_symmetric(G)) return paired_spectrum(G);
    const Eigen::VectorXd zetas = solve(G, Eigen::EigenvaluesOnly).eigenvalues();
    return EntanglementSpectrum::from_occupations(std::span(zetas.data(), zetas.size()));
  }

  const Eigen::MatrixXd F = corr.F->block(b, b, n, n);
  if (max_asymmetry(F, -1.0) > kSymmetryTolerance) {
    throw InvalidArgument("anomalous correlation matrix F is not antisymmetric");
  }
  Eigen::MatrixXd nambu(2 * n, 2 * n);
  nambu << Eigen::MatrixXd::Identity(n, n) - G, -F, F, G;
  const Eigen::VectorXd all = solve(nambu, Eigen::EigenvaluesOnly).eigenvalues();
  // Eigenvalues pair as (zeta, 1 - zeta); the lower half picks one of each pair.
  const Eigen::VectorXd lower = all.head(n);
  return EntanglementSpectrum::from_occupations(std::span(lower.data(), lower.size()));
}

}  // namespace sce
