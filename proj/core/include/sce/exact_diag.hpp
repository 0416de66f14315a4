#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "sce/spectrum.hpp"

namespace sce {

inline constexpr int kDefaultMaxEdSites = 20;

/// Site cap for exact diagonalization: SCE_MAX_ED_SITES if set, else 20.
int max_ed_sites();

/// Open XXZ chain H = sum_i [Sx_i Sx_{i+1} + Sy_i Sy_{i+1} + delta Sz_i Sz_{i+1}].
struct XxzSpec {
  int sites = 0;
  double delta = 0.0;

  /// |delta| <= 1. Other values are accepted but not critical.
  bool critical() const { return delta >= -1.0 && delta <= 1.0; }
  void validate(int cap) const;
};

/// Fixed-magnetization basis. Bit i of a configuration is site i, set = spin up.
/// Configurations are stored in ascending numeric order.
class SectorBasis {
 public:
  SectorBasis(int sites, int twice_sz);

  int sites() const { return sites_; }
  int twice_sz() const { return twice_sz_; }
  int up_count() const { return ups_; }
  std::size_t dimension() const { return configs_.size(); }
  std::span<const std::uint32_t> configs() const { return configs_; }
  /// Position of `config` in configs(), or -1.
  std::int64_t index_of(std::uint32_t config) const;

 private:
  int sites_;
  int twice_sz_;
  int ups_;
  std::vector<std::uint32_t> configs_;
  std::vector<std::int32_t> lookup_;
};

struct GroundStateVector {
  std::shared_ptr<const SectorBasis> basis;
  std::vector<double> amplitudes;
  double energy = 0.0;

  int sites() const { return basis->sites(); }
  int twice_sz() const { return basis->twice_sz(); }
};

enum class EdSolver { Auto, Dense, Krylov };

struct EdOptions {
  EdSolver solver = EdSolver::Auto;
  /// Sector dimension at or below which Auto picks the dense solver.
  std::size_t dense_limit = 256;
  /// Krylov stopping target ||H v - E v||; results above 1e-10 are rejected.
  double residual_target = 1e-12;
  /// Overrides the default sector (0 for even chains, +1/2 for odd).
  std::optional<int> twice_sz;
  /// Site cap; max_ed_sites() when unset.
  std::optional<int> site_cap;
};

/// Lowest state of the sector, normalized, first nonzero amplitude positive.
GroundStateVector xxz_ground_state(const XxzSpec& spec, const EdOptions& options = {});

/// Schmidt weights for the cut after the first L_left sites, descending,
/// entries below 1e-14 removed.
RdmSpectrum rdm_weights(const GroundStateVector& state, int L_left);

struct XxzScanRow {
  double delta = 0.0;
  int sites = 0;
  int left_sites = 0;
  double S = 0.0;
  double S1 = 0.0;
  double w1 = 1.0;
  double lnZ = 0.0;
  double E0 = 0.0;
};

/// One row per (delta, sites) pair, ordered by delta then sites as given.
/// The cut keeps ceil(sites / 2) sites on the left.
std::vector<XxzScanRow> xxz_scan(std::span<const double> deltas, std::span<const int> sites,
                                 unsigned threads = 1, const EdOptions& options = {});

}  // namespace sce
