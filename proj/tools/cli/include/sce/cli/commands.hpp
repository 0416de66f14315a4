#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sce/scaling.hpp"

namespace sce::cli {

enum class Model { XX, TFIM, XxzEd };
enum class Format { Csv, Json };

Model parse_model(const std::string& name);
std::string model_name(Model model);
GeometryKind parse_geometry(const std::string& name);
std::string geometry_name(GeometryKind kind);
Format parse_format(const std::string& name);

/// xx scans default to the infinite interval, the chains to a centred cut.
GeometryKind default_geometry(Model model);

/// start:stop:factor, geometric. Values are rounded to integers and deduplicated.
std::vector<int> parse_length_range(const std::string& range);

/// Shortest round-trip text is not stable across libraries; this is fixed at
/// 17 significant digits with '.' as the decimal separator.
std::string format_number(double value, int digits = 17);

struct ScanConfig {
  Model model = Model::XX;
  /// Delta for xxz-ed, k for tfim; ignored for xx.
  std::vector<double> parameters;
  std::vector<int> lengths;
  std::optional<GeometryKind> geometry;
  unsigned threads = 1;
};

struct ScanRow {
  Model model = Model::XX;
  double parameter = 0.0;
  int L = 0;
  double S = 0.0;
  double S1 = 0.0;
  double w1 = 1.0;
  double lnZ = 0.0;
  double E0 = 0.0;
  std::uint64_t M_max = 1;
};

inline constexpr const char* kScanHeader = "model,delta_or_k,L,S,S1,w1,lnZ,E0,M_max";

/// Rows sorted by (parameter, L) whatever the thread count.
std::vector<ScanRow> run_scan(const ScanConfig& config);
void write_scan(std::ostream& out, const std::vector<ScanRow>& rows, Format format);
/// Parses a CSV written by write_scan. Throws InvalidArgument on any schema mismatch.
std::vector<ScanRow> read_scan_csv(std::istream& in);

struct SpectrumConfig {
  Model model = Model::XX;
  double parameter = 0.5;
  int L = 0;
  std::optional<GeometryKind> geometry;
};

void write_spectrum(std::ostream& out, const SpectrumConfig& config, Format format);

struct FitConfig {
  std::optional<double> parameter;
  std::optional<GeometryKind> geometry;
  ScalingQuantity quantity = ScalingQuantity::S1;
  SlopeEstimator estimator = SlopeEstimator::ConsecutivePairs;
  double c = 1.0;
};

struct FitReport {
  Model model = Model::XX;
  double parameter = 0.0;
  GeometryKind geometry = GeometryKind::Infinite;
  CEstimateSeries series;
  double k1 = 0.0;
  double residual = 0.0;
  std::vector<std::string> warnings;
};

FitReport fit_c(const std::vector<ScanRow>& rows, const FitConfig& config);
void write_fit(std::ostream& out, const FitReport& report);

struct AnalyticConfig {
  std::string formula;
  std::optional<double> k;
  std::optional<double> L;
  std::optional<double> l;
  std::optional<double> n;
  std::optional<int> index;
  GeometryKind geometry = GeometryKind::Infinite;
  double c = 1.0;
  double a = 1.0;
  double k1 = 0.0;
  double b_n = 1.0;
};

double evaluate_analytic(const AnalyticConfig& config);

struct OracleRow {
  int L = 0;
  int left = 0;
  double dS1 = 0.0;
  double dS = 0.0;
  double dweight = 0.0;
};

struct OracleReport {
  std::vector<OracleRow> rows;
  double max_deviation = 0.0;
  double tolerance = 1e-9;
  bool passed() const { return max_deviation <= tolerance; }
};

/// Delta = 0 exact diagonalization against the Jordan-Wigner route, cut
/// ceil(L/2), top `top` Schmidt weights compared element-wise.
OracleReport compare_oracle(const std::vector<int>& lengths, double tolerance, std::size_t top = 100,
                            unsigned threads = 1);
void write_oracle(std::ostream& out, const OracleReport& report, Format format);

/// Full command line. Returns the process exit code: 0, 2 (invalid input) or 3 (numerical failure).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sce::cli
