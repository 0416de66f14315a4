#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sce {

inline constexpr double kOccupationFloor = 1e-12;
inline constexpr double kZeroModeTolerance = 1e-8;
inline constexpr double kPairTolerance = 1e-8;

/// Single-particle spectrum of a quadratic entanglement Hamiltonian
/// H = sum_k eps_k c_k^dagger c_k, with occupations zeta_k = 1 / (1 + e^eps_k).
///
/// Occupations are clipped to [kOccupationFloor, 1 - kOccupationFloor] before
/// the logarithm. Modes with |eps| < kZeroModeTolerance are snapped to
/// eps = 0, zeta = 1/2, so each one contributes exactly ln 2 downstream.
class EntanglementSpectrum {
 public:
  EntanglementSpectrum() = default;

  static EntanglementSpectrum from_occupations(std::span<const double> zetas);
  static EntanglementSpectrum from_energies(std::span<const double> epsilons);

  /// Sorted ascending.
  const std::vector<double>& epsilons() const { return epsilons_; }
  /// Aligned with epsilons().
  const std::vector<double>& occupations() const { return occupations_; }
  std::size_t zero_mode_count() const { return zero_modes_; }
  std::size_t size() const { return epsilons_.size(); }
  bool empty() const { return epsilons_.empty(); }
  double pair_tolerance() const { return pair_tolerance_; }

  /// Largest |eps_i + eps_j| over the ascending/descending pairing eps_i <-> eps_{n-1-i}.
  /// Zero for a spectrum symmetric under eps -> -eps.
  double pairing_mismatch() const;

 private:
  void finish();

  std::vector<double> epsilons_;
  std::vector<double> occupations_;
  std::size_t zero_modes_ = 0;
  double pair_tolerance_ = kPairTolerance;
};

/// Many-body eigenvalues of a reduced density matrix, descending.
struct RdmSpectrum {
  std::vector<double> weights;
  bool truncated = false;
  double weight_sum = 0.0;
};

}  // namespace sce
