#include "sce/scaling.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>

#include "sce/error.hpp"

namespace sce {
namespace {

std::vector<double> log_lengths(std::span<const ScanPoint> points, GeometryKind kind) {
  std::vector<double> x;
  x.reserve(points.size());
  for (const auto& p : points) x.push_back(std::log(effective_length(geometry_at(kind, p.L))));
  return x;
}

double ordinate(const ScanPoint& p, ScalingQuantity quantity) {
  if (quantity == ScalingQuantity::S1) return p.S1;
  require(p.S.has_value(), "scan point has no entanglement entropy");
  return *p.S;
}

void require_increasing(std::span<const ScanPoint> points) {
  for (std::size_t i = 1; i < points.size(); ++i) {
    require(points[i].L != points[i - 1].L, "duplicate length in scan");
    require(points[i].L > points[i - 1].L, "scan lengths must be strictly increasing");
  }
}

}  // namespace

Geometry geometry_at(GeometryKind kind, double L) {
  switch (kind) {
    case GeometryKind::Infinite:
      return InfiniteLineInterval{L};
    case GeometryKind::HalfInfinite:
      return HalfInfiniteEnd{L};
    case GeometryKind::FiniteCut:
      return FiniteChainCut{L, std::ceil(L / 2.0)};
  }
  throw InvalidArgument("unknown geometry");
}

double geometry_factor(GeometryKind kind, ScalingQuantity quantity) {
  const double s1 = kind == GeometryKind::Infinite ? 6.0 : 12.0;
  return quantity == ScalingQuantity::S1 ? s1 : s1 / 2.0;
}

CEstimateSeries local_c_estimates(std::span<const ScanPoint> points, GeometryKind kind, ScalingQuantity quantity,
                                  SlopeEstimator estimator) {
  require(points.size() >= 2, "need at least two scan points");
  require_increasing(points);
  const std::vector<double> x = log_lengths(points, kind);
  CEstimateSeries series;
  series.geometry_factor = geometry_factor(kind, quantity);
  const double f = series.geometry_factor;

  auto slope = [&](std::size_t i, std::size_t j) {
    require(x[j] != x[i], "scan points share the same effective length");
    return f * (ordinate(points[j], quantity) - ordinate(points[i], quantity)) / (x[j] - x[i]);
  };

  if (estimator == SlopeEstimator::ConsecutivePairs) {
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
      series.entries.push_back({std::sqrt(points[i].L * points[i + 1].L), slope(i, i + 1)});
    }
  } else {
    require(points.size() >= 3, "the three-point slope needs at least three scan points");
    for (std::size_t i = 1; i + 1 < points.size(); ++i) {
      series.entries.push_back({points[i].L, slope(i - 1, i + 1)});
    }
  }
  return series;
}

double extrapolate_c(const CEstimateSeries& series) {
  const std::size_t n = series.entries.size();
  require(n >= 3, "extrapolation needs at least three local estimates");
  std::vector<CEstimate> sorted = series.entries;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const CEstimate& a, const CEstimate& b) { return a.L_mid < b.L_mid; });
  const std::size_t window = std::max<std::size_t>(3, (n + 1) / 2);
  const std::size_t first = n - window;

  Eigen::MatrixXd design(window, 3);
  Eigen::VectorXd rhs(window);
  std::set<double> abscissae;
  for (std::size_t r = 0; r < window; ++r) {
    const auto& e = sorted[first + r];
    require(e.L_mid > 1.0, "extrapolation needs L_mid > 1");
    const double u = 1.0 / std::log(e.L_mid);
    abscissae.insert(u);
    design.row(static_cast<Eigen::Index>(r)) << 1.0, u, u * u;
    rhs(static_cast<Eigen::Index>(r)) = e.c_local;
  }
  require(abscissae.size() >= 3, "degenerate extrapolation: fewer than three distinct abscissae");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < 3) throw InvalidArgument("degenerate extrapolation design matrix");
  const Eigen::VectorXd coeffs = qr.solve(rhs);
  return coeffs(0);
}

ConformalFit fit_conformal_constants(std::span<const ScanPoint> points, GeometryKind kind, double c) {
  require(points.size() >= 2, "need at least two scan points");
  require_increasing(points);
  const std::vector<double> x = log_lengths(points, kind);
  const double slope = c * s1_log_prefactor(geometry_at(kind, points.front().L));

  ConformalFit fit;
  for (std::size_t i = 0; i < points.size(); ++i) fit.k1 += points[i].S1 - slope * x[i];
  fit.k1 /= static_cast<double>(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    fit.residual = std::max(fit.residual, std::abs(points[i].S1 - slope * x[i] - fit.k1));
  }
  return fit;
}

}  // namespace sce
