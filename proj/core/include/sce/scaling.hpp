#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sce/analytic.hpp"

namespace sce {

enum class GeometryKind { Infinite, HalfInfinite, FiniteCut };

/// One point of an entropy scan. For FiniteCut, L is the chain length and the
/// subsystem holds ceil(L / 2) sites; otherwise L is the subsystem length.
struct ScanPoint {
  double L = 0.0;
  double S1 = 0.0;
  std::optional<double> S;
  double w1 = 1.0;
};

enum class ScalingQuantity { S1, S };

enum class SlopeEstimator {
  /// (y2 - y1) / (x2 - x1) for consecutive points, placed at sqrt(L1 L2).
  ConsecutivePairs,
  /// (y_{i+1} - y_{i-1}) / (x_{i+1} - x_{i-1}), placed at L_i.
  SymmetricThreePoint,
};

struct CEstimate {
  double L_mid = 0.0;
  double c_local = 0.0;
};

struct CEstimateSeries {
  std::vector<CEstimate> entries;
  std::optional<double> extrapolated_c;
  double geometry_factor = 6.0;
};

/// Geometry from the scan convention of ScanPoint.
Geometry geometry_at(GeometryKind kind, double L);

/// Multiplier turning a slope in ln(effective length) into c:
/// S1: 6, 12, 12; S: 3, 6, 6.
double geometry_factor(GeometryKind kind, ScalingQuantity quantity = ScalingQuantity::S1);

CEstimateSeries local_c_estimates(std::span<const ScanPoint> points, GeometryKind kind,
                                  ScalingQuantity quantity = ScalingQuantity::S1,
                                  SlopeEstimator estimator = SlopeEstimator::ConsecutivePairs);

/// Least-squares fit c_local = c + alpha / ln L + beta / ln^2 L over the
/// largest-L half of the entries (at least three). Returns c.
double extrapolate_c(const CEstimateSeries& series);

struct ConformalFit {
  double k1 = 0.0;
  double residual = 0.0;
};

/// Intercept k1 of S1 = (c * prefactor) ln(effective length) + k1 with c
/// fixed; residual is the largest absolute deviation.
ConformalFit fit_conformal_constants(std::span<const ScanPoint> points, GeometryKind kind, double c);

}  // namespace sce
