#pragma once

#include <cstddef>
#include <cstdint>

#include "sce/spectrum.hpp"

namespace sce {

/// Entropies of rho = exp(-H) / Z, all in nats.
///
/// S1 = -ln w1 = lnZ + E0 and S = lnZ + meanH hold by construction.
struct EntanglementSummary {
  double S = 0.0;
  double S1 = 0.0;
  double w1 = 1.0;
  double lnZ = 0.0;
  double E0 = 0.0;
  double meanH = 0.0;
};

struct DistillationBound {
  std::uint64_t M_max = 0;
};

EntanglementSummary summary_from_single_particle(const EntanglementSpectrum& spectrum);

/// Weights within 1e-8 of unit sum are renormalized; larger deviations throw.
/// The entanglement Hamiltonian is taken with Z = 1, so E_i = -ln w_i.
EntanglementSummary summary_from_weights(const RdmSpectrum& rdm);

/// ln tr(rho^n) = sum_k ln(zeta_k^n + (1 - zeta_k)^n).
double renyi_ln_trace(const EntanglementSpectrum& spectrum, double n);

/// The M largest products prod_k p_k, p_k in {zeta_k, 1 - zeta_k}, descending.
RdmSpectrum many_body_spectrum(const EntanglementSpectrum& spectrum, std::size_t M);

/// Largest M with w1 <= 1/M + 1e-12.
DistillationBound distillation_bound(double w1);

}  // namespace sce
