#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "sce/entanglement.hpp"
#include "sce/error.hpp"
#include "sce/free_fermion.hpp"
#include "sce/scaling.hpp"

using namespace sce;
using doctest::Approx;

namespace {

std::vector<ScanPoint> line(GeometryKind kind, double c, double k1, std::vector<double> lengths,
                            double perturbation = 0.0) {
  std::vector<ScanPoint> points;
  for (double L : lengths) {
    const Geometry g = geometry_at(kind, L);
    const double x = std::log(effective_length(g));
    const double s1 = c * s1_log_prefactor(g) * x + k1 + perturbation / x;
    points.push_back(ScanPoint{L, s1, 2.0 * s1, std::exp(-s1)});
  }
  return points;
}

std::vector<ScanPoint> xx_interval_scan(std::vector<double> lengths) {
  std::vector<ScanPoint> points;
  for (double L : lengths) {
    const auto sum = summary_from_single_particle(single_particle_energies(xx_correlations_infinite(static_cast<int>(L))));
    points.push_back(ScanPoint{L, sum.S1, sum.S, sum.w1});
  }
  return points;
}

}  // namespace

TEST_CASE("local estimates on exact lines") {
  const auto pts = line(GeometryKind::HalfInfinite, 1.0, 0.3, {10, 20, 40, 80});
  const auto series = local_c_estimates(pts, GeometryKind::HalfInfinite);
  CHECK(series.geometry_factor == 12.0);
  REQUIRE(series.entries.size() == 3);
  for (const auto& e : series.entries) CHECK(e.c_local == Approx(1.0).epsilon(1e-12));
  CHECK(series.entries[0].L_mid == Approx(std::sqrt(200.0)));

  const auto inf = line(GeometryKind::Infinite, 1.0, 0.0, {8, 16, 32});
  for (const auto& e : local_c_estimates(inf, GeometryKind::Infinite).entries) CHECK(e.c_local == Approx(1.0));

  const auto cut = line(GeometryKind::FiniteCut, 0.8, -0.1, {9, 13, 17, 21});
  for (const auto& e : local_c_estimates(cut, GeometryKind::FiniteCut).entries) CHECK(e.c_local == Approx(0.8));

  const auto three = local_c_estimates(inf, GeometryKind::Infinite, ScalingQuantity::S1, SlopeEstimator::SymmetricThreePoint);
  REQUIRE(three.entries.size() == 1);
  CHECK(three.entries[0].L_mid == 16.0);
  CHECK(three.entries[0].c_local == Approx(1.0));

  // S = 2 S1 on these lines, and the S factor is half the S1 factor.
  const auto via_s = local_c_estimates(inf, GeometryKind::Infinite, ScalingQuantity::S);
  CHECK(via_s.geometry_factor == 3.0);
  for (const auto& e : via_s.entries) CHECK(e.c_local == Approx(1.0));
}

TEST_CASE("local estimate errors") {
  const auto pts = line(GeometryKind::Infinite, 1.0, 0.0, {8, 16});
  CHECK_THROWS_AS(local_c_estimates(std::span(pts).first(1), GeometryKind::Infinite), InvalidArgument);
  auto dup = pts;
  dup[1].L = 8;
  CHECK_THROWS_AS(local_c_estimates(dup, GeometryKind::Infinite), InvalidArgument);
  CHECK_THROWS_AS(local_c_estimates(pts, GeometryKind::Infinite, ScalingQuantity::S1, SlopeEstimator::SymmetricThreePoint),
                  InvalidArgument);
  auto no_s = pts;
  no_s[0].S.reset();
  CHECK_THROWS_AS(local_c_estimates(no_s, GeometryKind::Infinite, ScalingQuantity::S), InvalidArgument);
}

TEST_CASE("extrapolation") {
  SUBCASE("entries on a quadratic in 1/ln L") {
    CEstimateSeries series;
    for (double L : {10.0, 30.0, 100.0, 300.0, 1000.0, 3000.0}) {
      const double x = 1.0 / std::log(L);
      series.entries.push_back({L, 0.93 + 0.4 * x - 1.1 * x * x});
    }
    CHECK(std::abs(extrapolate_c(series) - 0.93) < 1e-10);
  }
  SUBCASE("constant entries") {
    CEstimateSeries series;
    for (double L : {10.0, 20.0, 40.0, 80.0}) series.entries.push_back({L, 0.97});
    CHECK(extrapolate_c(series) == Approx(0.97).epsilon(1e-12));
  }
  SUBCASE("too few or degenerate entries") {
    CEstimateSeries series;
    series.entries = {{10.0, 1.0}, {20.0, 1.0}};
    CHECK_THROWS_AS(extrapolate_c(series), InvalidArgument);
    series.entries = {{10.0, 1.0}, {20.0, 1.0}, {20.0, 1.1}};
    CHECK_THROWS_AS(extrapolate_c(series), InvalidArgument);
  }
  SUBCASE("XX interval scan up to 4096") {
    const auto pts = xx_interval_scan({64, 128, 256, 512, 1024, 2048, 4096});
    const auto series = local_c_estimates(pts, GeometryKind::Infinite);
    REQUIRE(series.entries.size() == 6);
    for (std::size_t i = 1; i < series.entries.size(); ++i) {
      CHECK(series.entries[i].c_local > 1.0);
      CHECK(series.entries[i].c_local < series.entries[i - 1].c_local);
    }
    CHECK(std::abs(extrapolate_c(series) - 1.0) <= 0.05);
  }
}

TEST_CASE("property: affine and reparametrization invariance") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0.0, 0.02);
  std::vector<double> lengths{16, 32, 64, 128, 256, 512};
  std::vector<ScanPoint> base;
  for (double L : lengths) {
    const double s1 = std::log(L) / 6.0 + noise(rng);
    base.push_back(ScanPoint{L, s1, std::nullopt, std::exp(-s1)});
  }
  const auto ref = local_c_estimates(base, GeometryKind::Infinite);
  const double ref_c = extrapolate_c(ref);

  for (double shift : {-1.0, 0.37, 5.0}) {
    auto shifted = base;
    for (auto& p : shifted) p.S1 += shift;
    const auto s = local_c_estimates(shifted, GeometryKind::Infinite);
    for (std::size_t i = 0; i < s.entries.size(); ++i) {
      CHECK(s.entries[i].c_local == Approx(ref.entries[i].c_local).epsilon(1e-10));
    }
    CHECK(extrapolate_c(s) == Approx(ref_c).epsilon(1e-9));
  }
  for (double factor : {2.0, 3.5, 10.0}) {
    auto scaled = base;
    for (auto& p : scaled) p.L *= factor;
    const auto s = local_c_estimates(scaled, GeometryKind::Infinite);
    for (std::size_t i = 0; i < s.entries.size(); ++i) {
      CHECK(s.entries[i].c_local == Approx(ref.entries[i].c_local).epsilon(1e-10));
    }
  }
}

TEST_CASE("property: extrapolation improves on the last local estimate") {
  for (double gamma : {-0.3, -0.1, 0.1, 0.4}) {
    const auto pts = line(GeometryKind::Infinite, 1.0, 0.2, {16, 32, 64, 128, 256, 512, 1024, 2048}, gamma);
    const auto series = local_c_estimates(pts, GeometryKind::Infinite);
    const double last = series.entries.back().c_local;
    CHECK(std::abs(extrapolate_c(series) - 1.0) < std::abs(last - 1.0));
  }
}

TEST_CASE("conformal constant fit") {
  const auto exact = line(GeometryKind::FiniteCut, 1.0, 0.42, {9, 11, 13, 15, 17});
  const auto fit = fit_conformal_constants(exact, GeometryKind::FiniteCut, 1.0);
  CHECK(fit.k1 == Approx(0.42).epsilon(1e-12));
  CHECK(fit.residual <= 1e-12);

  auto noisy = line(GeometryKind::Infinite, 1.0, 0.1, {8, 16, 32, 64, 128});
  const double bumps[] = {0.01, -0.01, 0.01, -0.01, 0.01};
  for (std::size_t i = 0; i < noisy.size(); ++i) noisy[i].S1 += bumps[i];
  CHECK(fit_conformal_constants(noisy, GeometryKind::Infinite, 1.0).residual <= 0.02);

  const auto xx = xx_interval_scan({8, 16, 32, 64, 128, 256, 512});
  double previous = 1e9;
  for (std::size_t first = 0; first + 2 <= xx.size(); ++first) {
    const double r = fit_conformal_constants(std::span(xx).subspan(first), GeometryKind::Infinite, 1.0).residual;
    CHECK(r < previous);
    previous = r;
  }
  CHECK_THROWS_AS(fit_conformal_constants(std::span(xx).first(1), GeometryKind::Infinite, 1.0), InvalidArgument);
}
