#include "sce/cli/commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <system_error>

#include "sce/analytic.hpp"
#include "sce/entanglement.hpp"
#include "sce/error.hpp"
#include "sce/exact_diag.hpp"
#include "sce/free_fermion.hpp"
#include "sce/tasks.hpp"

namespace sce::cli {
namespace {

using nlohmann::json;

const std::map<std::string, Model> kModels{{"xx", Model::XX}, {"tfim", Model::TFIM}, {"xxz-ed", Model::XxzEd}};
const std::map<std::string, GeometryKind> kGeometries{
    {"infinite", GeometryKind::Infinite}, {"half-infinite", GeometryKind::HalfInfinite}, {"finite-cut", GeometryKind::FiniteCut}};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) parts.push_back(item);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

double parse_double(const std::string& text, const std::string& what) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || text.empty()) throw InvalidArgument("cannot parse " + what + ": '" + text + "'");
  return value;
}

template <typename Int>
Int parse_integer(const std::string& text, const std::string& what) {
  Int value{};
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || text.empty()) throw InvalidArgument("cannot parse " + what + ": '" + text + "'");
  return value;
}

int cut_of(int L) { return (L + 1) / 2; }

EntanglementSummary free_fermion_point(Model model, double parameter, int L, GeometryKind geometry) {
  if (model == Model::XX) {
    switch (geometry) {
      case GeometryKind::Infinite:
        return summary_from_single_particle(single_particle_energies(xx_correlations_infinite(L)));
      case GeometryKind::HalfInfinite:
        return summary_from_single_particle(single_particle_energies(xx_correlations_half_infinite(L)));
      case GeometryKind::FiniteCut:
        break;
    }
  }
  const auto spec = model == Model::XX ? FermionModelSpec::xx_open(L) : FermionModelSpec::tfim_open(L, parameter);
  const auto corr = ground_state_correlations(build_bdg(spec));
  return summary_from_single_particle(
      single_particle_energies(corr, IndexRange{0, static_cast<std::size_t>(cut_of(L))}));
}

EntanglementSpectrum spectrum_of(Model model, double parameter, int L, GeometryKind geometry) {
  if (model == Model::XX && geometry == GeometryKind::Infinite) return single_particle_energies(xx_correlations_infinite(L));
  if (model == Model::XX && geometry == GeometryKind::HalfInfinite) {
    return single_particle_energies(xx_correlations_half_infinite(L));
  }
  const auto spec = model == Model::XX ? FermionModelSpec::xx_open(L) : FermionModelSpec::tfim_open(L, parameter);
  const auto corr = ground_state_correlations(build_bdg(spec));
  return single_particle_energies(corr, IndexRange{0, static_cast<std::size_t>(cut_of(L))});
}

GeometryKind resolve_geometry(Model model, const std::optional<GeometryKind>& requested) {
  const GeometryKind g = requested.value_or(default_geometry(model));
  if (model != Model::XX && g != GeometryKind::FiniteCut) {
    throw InvalidArgument(model_name(model) + " supports only the finite-cut geometry");
  }
  return g;
}

double minimal_length(Model model, GeometryKind geometry) {
  return model == Model::XX && geometry != GeometryKind::FiniteCut ? 1 : 2;
}

void write_text(std::ostream& out, const json& value) { out << value.dump(2) << '\n'; }

json scan_row_json(const ScanRow& r) {
  return json{{"model", model_name(r.model)}, {"delta_or_k", r.parameter}, {"L", r.L},   {"S", r.S},
              {"S1", r.S1},                   {"w1", r.w1},                {"lnZ", r.lnZ}, {"E0", r.E0},
              {"M_max", r.M_max}};
}

}  // namespace

Model parse_model(const std::string& name) {
  const auto it = kModels.find(name);
  if (it == kModels.end()) throw InvalidArgument("unknown model '" + name + "' (xx, tfim, xxz-ed)");
  return it->second;
}

std::string model_name(Model model) {
  switch (model) {
    case Model::XX: return "xx";
    case Model::TFIM: return "tfim";
    case Model::XxzEd: return "xxz-ed";
  }
  return "";
}

GeometryKind parse_geometry(const std::string& name) {
  const auto it = kGeometries.find(name);
  if (it == kGeometries.end()) throw InvalidArgument("unknown geometry '" + name + "'");
  return it->second;
}

std::string geometry_name(GeometryKind kind) {
  switch (kind) {
    case GeometryKind::Infinite: return "infinite";
    case GeometryKind::HalfInfinite: return "half-infinite";
    case GeometryKind::FiniteCut: return "finite-cut";
  }
  return "";
}

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw InvalidArgument("unknown format '" + name + "' (csv, json)");
}

GeometryKind default_geometry(Model model) {
  return model == Model::XX ? GeometryKind::Infinite : GeometryKind::FiniteCut;
}

std::vector<int> parse_length_range(const std::string& range) {
  const auto parts = split(range, ':');
  require(parts.size() == 3, "length range must read start:stop:factor");
  const double start = parse_double(parts[0], "range start");
  const double stop = parse_double(parts[1], "range stop");
  const double factor = parse_double(parts[2], "range factor");
  require(start >= 1.0 && stop >= start, "length range needs 1 <= start <= stop");
  require(factor > 1.0, "length range factor must exceed 1");
  std::vector<int> out;
  for (double L = start; L <= stop * (1.0 + 1e-12); L *= factor) {
    const int rounded = static_cast<int>(std::lround(L));
    if (out.empty() || out.back() != rounded) out.push_back(rounded);
  }
  return out;
}

std::string format_number(double value, int digits) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::general, digits);
  if (ec != std::errc{}) throw NumericalError("number formatting failed");
  return std::string(buffer, ptr);
}

std::vector<ScanRow> run_scan(const ScanConfig& config) {
  require(!config.lengths.empty(), "empty L-list");
  const GeometryKind geometry = resolve_geometry(config.model, config.geometry);

  std::vector<double> parameters = config.parameters;
  if (config.model == Model::XX) {
    for (double p : parameters) require(p == 0.0, "xx has no coupling parameter besides delta = 0");
    parameters = {0.0};
  }
  if (config.model == Model::XxzEd && parameters.empty()) parameters = {0.0};
  require(!parameters.empty(), "tfim scan needs at least one k");
  for (double p : parameters) require(std::isfinite(p), "parameters must be finite");
  for (int L : config.lengths) {
    require(L >= minimal_length(config.model, geometry), "length " + std::to_string(L) + " is too small");
  }
  std::sort(parameters.begin(), parameters.end());
  require(std::adjacent_find(parameters.begin(), parameters.end()) == parameters.end(), "duplicate parameter");
  std::vector<int> lengths = config.lengths;
  std::sort(lengths.begin(), lengths.end());
  require(std::adjacent_find(lengths.begin(), lengths.end()) == lengths.end(), "duplicate length");
  if (config.model == Model::XxzEd) {
    const int cap = max_ed_sites();
    for (double delta : parameters) {
      for (int L : lengths) XxzSpec{L, delta}.validate(cap);
    }
  }
  if (config.model == Model::TFIM) {
    for (double k : parameters) FermionModelSpec::tfim_open(2, k);
  }

  std::vector<ScanRow> rows(parameters.size() * lengths.size());
  parallel_for(rows.size(), config.threads, [&](std::size_t i) {
    const double parameter = parameters[i / lengths.size()];
    const int L = lengths[i % lengths.size()];
    EntanglementSummary sum;
    if (config.model == Model::XxzEd) {
      const auto gs = xxz_ground_state(XxzSpec{L, parameter});
      sum = summary_from_weights(rdm_weights(gs, cut_of(L)));
    } else {
      sum = free_fermion_point(config.model, parameter, L, geometry);
    }
    rows[i] = ScanRow{config.model, parameter, L, sum.S, sum.S1, sum.w1, sum.lnZ, sum.E0,
                      distillation_bound(sum.w1).M_max};
  });
  return rows;
}

void write_scan(std::ostream& out, const std::vector<ScanRow>& rows, Format format) {
  if (format == Format::Json) {
    json array = json::array();
    for (const auto& r : rows) array.push_back(scan_row_json(r));
    write_text(out, array);
    return;
  }
  out << kScanHeader << '\n';
  for (const auto& r : rows) {
    out << model_name(r.model) << ',' << format_number(r.parameter) << ',' << r.L << ',' << format_number(r.S) << ','
        << format_number(r.S1) << ',' << format_number(r.w1) << ',' << format_number(r.lnZ) << ','
        << format_number(r.E0) << ',' << r.M_max << '\n';
  }
}

std::vector<ScanRow> read_scan_csv(std::istream& in) {
  std::string line;
  auto next_line = [&]() {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };
  if (!next_line()) throw InvalidArgument("scan file is empty");
  if (line != kScanHeader) throw InvalidArgument("scan header mismatch: expected '" + std::string(kScanHeader) + "'");

  std::vector<ScanRow> rows;
  std::size_t number = 1;
  while (next_line()) {
    ++number;
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    const std::string where = " on line " + std::to_string(number);
    if (fields.size() != 9) throw InvalidArgument("expected 9 fields" + where);
    ScanRow r;
    r.model = parse_model(fields[0]);
    r.parameter = parse_double(fields[1], "delta_or_k" + where);
    r.L = parse_integer<int>(fields[2], "L" + where);
    r.S = parse_double(fields[3], "S" + where);
    r.S1 = parse_double(fields[4], "S1" + where);
    r.w1 = parse_double(fields[5], "w1" + where);
    r.lnZ = parse_double(fields[6], "lnZ" + where);
    r.E0 = parse_double(fields[7], "E0" + where);
    r.M_max = parse_integer<std::uint64_t>(fields[8], "M_max" + where);
    rows.push_back(r);
  }
  return rows;
}

void write_spectrum(std::ostream& out, const SpectrumConfig& config, Format format) {
  require(config.model != Model::XxzEd, "spectrum needs a free-fermion model (xx or tfim)");
  const GeometryKind geometry = resolve_geometry(config.model, config.geometry);
  require(config.L >= minimal_length(config.model, geometry), "length is too small");
  const auto spectrum = spectrum_of(config.model, config.parameter, config.L, geometry);
  const auto& eps = spectrum.epsilons();
  const auto& zeta = spectrum.occupations();
  const std::size_t n = eps.size();
  auto paired = [&](std::size_t i) { return std::abs(eps[i] + eps[n - 1 - i]) <= spectrum.pair_tolerance(); };

  if (format == Format::Json) {
    json array = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      array.push_back(json{{"k", i}, {"epsilon", eps[i]}, {"zeta", zeta[i]}, {"zero_mode", eps[i] == 0.0},
                           {"paired", paired(i)}});
    }
    write_text(out, array);
    return;
  }
  out << "k,epsilon,zeta,zero_mode,paired\n";
  for (std::size_t i = 0; i < n; ++i) {
    out << i << ',' << format_number(eps[i]) << ',' << format_number(zeta[i]) << ',' << (eps[i] == 0.0 ? 1 : 0) << ','
        << (paired(i) ? 1 : 0) << '\n';
  }
}

FitReport fit_c(const std::vector<ScanRow>& rows, const FitConfig& config) {
  require(!rows.empty(), "scan file has no rows");
  FitReport report;
  report.model = rows.front().model;
  std::set<double> parameters;
  for (const auto& r : rows) {
    require(r.model == report.model, "scan file mixes models");
    parameters.insert(r.parameter);
  }
  if (config.parameter) {
    require(parameters.count(*config.parameter) == 1, "no rows with delta_or_k = " + format_number(*config.parameter));
    report.parameter = *config.parameter;
  } else {
    require(parameters.size() == 1, "scan file holds several series; select one with --delta or --k");
    report.parameter = *parameters.begin();
  }
  report.geometry = resolve_geometry(report.model, config.geometry);

  std::vector<ScanPoint> points;
  for (const auto& r : rows) {
    if (r.parameter == report.parameter) points.push_back(ScanPoint{static_cast<double>(r.L), r.S1, r.S, r.w1});
  }
  std::sort(points.begin(), points.end(), [](const ScanPoint& a, const ScanPoint& b) { return a.L < b.L; });

  report.series = local_c_estimates(points, report.geometry, config.quantity, config.estimator);
  if (report.series.entries.size() >= 3) {
    try {
      report.series.extrapolated_c = extrapolate_c(report.series);
    } catch (const InvalidArgument& e) {
      report.warnings.push_back(std::string("extrapolation failed: ") + e.what());
    }
  } else {
    report.warnings.push_back("extrapolation needs at least 3 local estimates, got " +
                              std::to_string(report.series.entries.size()));
  }
  const auto fit = fit_conformal_constants(points, report.geometry, config.c);
  report.k1 = fit.k1;
  report.residual = fit.residual;
  return report;
}

void write_fit(std::ostream& out, const FitReport& report) {
  json c_local = json::array();
  json L_mid = json::array();
  for (const auto& e : report.series.entries) {
    c_local.push_back(e.c_local);
    L_mid.push_back(e.L_mid);
  }
  json doc{{"model", model_name(report.model)},
           {"delta_or_k", report.parameter},
           {"geometry", geometry_name(report.geometry)},
           {"geometry_factor", report.series.geometry_factor},
           {"L_mid", L_mid},
           {"c_local", c_local},
           {"c_extrapolated", nullptr},
           {"k1", report.k1},
           {"residual", report.residual},
           {"warnings", report.warnings}};
  if (report.series.extrapolated_c) doc["c_extrapolated"] = *report.series.extrapolated_c;
  write_text(out, doc);
}

double evaluate_analytic(const AnalyticConfig& config) {
  auto need = [&](const std::optional<double>& v, const char* name) {
    require(v.has_value(), config.formula + " needs --" + name);
    return *v;
  };
  const ConformalParams params{config.c, config.a, config.k1, config.b_n};
  if (config.formula == "conformal-s1") {
    const double L = need(config.L, "L");
    switch (config.geometry) {
      case GeometryKind::Infinite: return conformal_s1(InfiniteLineInterval{L}, params);
      case GeometryKind::HalfInfinite: return conformal_s1(HalfInfiniteEnd{L}, params);
      case GeometryKind::FiniteCut: return conformal_s1(FiniteChainCut{L, need(config.l, "l")}, params);
    }
  }
  if (config.formula == "conformal-renyi") return conformal_renyi_trace(need(config.L, "L"), need(config.n, "n"), params);
  if (config.formula == "xx-spectrum") return xx_asymptotic_spectrum(need(config.L, "L"), config.index.value_or(0));
  if (config.formula == "elliptic-k") return elliptic_K(need(config.k, "k"));
  if (config.formula == "tfim-s1") return tfim_s1_half(need(config.k, "k"));
  if (config.formula == "tfim-s1-critical") return tfim_s1_near_critical(need(config.k, "k"));
  throw InvalidArgument("unknown formula '" + config.formula + "'");
}

OracleReport compare_oracle(const std::vector<int>& lengths, double tolerance, std::size_t top, unsigned threads) {
  require(!lengths.empty(), "empty L-list");
  require(tolerance > 0.0, "tolerance must be positive");
  require(top >= 1, "top must be positive");
  const int cap = max_ed_sites();
  for (int L : lengths) XxzSpec{L, 0.0}.validate(cap);

  OracleReport report;
  report.tolerance = tolerance;
  report.rows.resize(lengths.size());
  parallel_for(lengths.size(), threads, [&](std::size_t i) {
    const int L = lengths[i];
    const int left = cut_of(L);
    const auto rdm = rdm_weights(xxz_ground_state(XxzSpec{L, 0.0}), left);
    const auto ed = summary_from_weights(rdm);

    const auto corr = ground_state_correlations(build_bdg(FermionModelSpec::xx_open(L)));
    const auto spec = single_particle_energies(corr, IndexRange{0, static_cast<std::size_t>(left)});
    const auto ff = summary_from_single_particle(spec);
    const auto weights = many_body_spectrum(spec, top).weights;

    double dweight = 0.0;
    for (std::size_t j = 0; j < top; ++j) {
      const double a = j < rdm.weights.size() ? rdm.weights[j] : 0.0;
      const double b = j < weights.size() ? weights[j] : 0.0;
      dweight = std::max(dweight, std::abs(a - b));
    }
    report.rows[i] = OracleRow{L, left, std::abs(ed.S1 - ff.S1), std::abs(ed.S - ff.S), dweight};
  });
  for (const auto& r : report.rows) report.max_deviation = std::max({report.max_deviation, r.dS1, r.dS, r.dweight});
  return report;
}

void write_oracle(std::ostream& out, const OracleReport& report, Format format) {
  if (format == Format::Json) {
    json rows = json::array();
    for (const auto& r : report.rows) {
      rows.push_back(json{{"L", r.L}, {"left", r.left}, {"dS1", r.dS1}, {"dS", r.dS}, {"dweight", r.dweight}});
    }
    write_text(out, json{{"rows", rows},
                         {"max_deviation", report.max_deviation},
                         {"tolerance", report.tolerance},
                         {"passed", report.passed()}});
    return;
  }
  out << "L,left,dS1,dS,dweight\n";
  for (const auto& r : report.rows) {
    out << r.L << ',' << r.left << ',' << format_number(r.dS1) << ',' << format_number(r.dS) << ','
        << format_number(r.dweight) << '\n';
  }
}

namespace {

struct Sink {
  std::ofstream file;
  std::ostream* stream;

  Sink(const std::string& path, std::ostream& fallback) : stream(&fallback) {
    if (path.empty() || path == "-") return;
    file.open(path, std::ios::binary | std::ios::trunc);
    if (!file) throw InvalidArgument("cannot open '" + path + "' for writing");
    stream = &file;
  }
  std::ostream& get() { return *stream; }
  void close() {
    if (!file.is_open()) return;
    file.close();
    if (!file) throw NumericalError("writing the output file failed");
  }
};

template <typename T>
std::optional<T> present(const CLI::Option* option, const T& value) {
  return option->count() > 0 ? std::optional<T>(value) : std::nullopt;
}

std::vector<std::string> keys(const auto& table) {
  std::vector<std::string> out;
  for (const auto& [name, value] : table) out.push_back(name);
  return out;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Single-copy entanglement and entropy scans for quantum chains"};
  app.set_config("--config", "", "Read options from a key = value file ([scan], [fit-c], ... sections); flags win");
  app.require_subcommand(1);

  const auto model_names = keys(kModels);
  const auto geometry_names = keys(kGeometries);
  const std::vector<std::string> format_names{"csv", "json"};

  std::string model = "xx";
  std::vector<double> deltas;
  std::vector<double> ks;
  std::vector<int> lengths;
  std::string length_range;
  std::string geometry;
  std::string out_path;
  std::string format = "csv";
  unsigned threads = 1;

  auto* scan = app.add_subcommand("scan", "Entropy scan over parameters and lengths, one CSV row per point");
  scan->add_option("--model", model, "xx, tfim or xxz-ed")->check(CLI::IsMember(model_names))->capture_default_str();
  auto* scan_delta = scan->add_option("--delta", deltas, "XXZ anisotropies (xxz-ed)")->delimiter(',');
  auto* scan_k = scan->add_option("--k", ks, "TFIM moduli in (0, 1)")->delimiter(',');
  auto* scan_L = scan->add_option("--L", lengths, "Lengths: interval/block for xx infinite and half-infinite, "
                                                 "chain length otherwise")
                     ->delimiter(',');
  auto* scan_range = scan->add_option("--L-range", length_range, "Geometric lengths start:stop:factor");
  scan_L->excludes(scan_range);
  scan->add_option("--geometry", geometry, "infinite, half-infinite or finite-cut")->check(CLI::IsMember(geometry_names));
  scan->add_option("--out", out_path, "Output file (default stdout)");
  scan->add_option("--format", format, "csv or json")->check(CLI::IsMember(format_names))->capture_default_str();
  scan->add_option("--threads", threads, "Worker threads, 0 for all cores")->capture_default_str();

  int spectrum_L = 0;
  double spectrum_k = 0.5;
  auto* spectrum = app.add_subcommand("spectrum", "Single-particle entanglement spectrum eps_k, zeta_k");
  spectrum->add_option("--model", model, "xx or tfim")->check(CLI::IsMember(model_names))->capture_default_str();
  auto* spectrum_k_opt = spectrum->add_option("--k", spectrum_k, "TFIM modulus in (0, 1)");
  spectrum->add_option("--L", spectrum_L, "Subsystem length (xx infinite, half-infinite) or chain length")->required();
  spectrum->add_option("--geometry", geometry, "infinite, half-infinite or finite-cut")
      ->check(CLI::IsMember(geometry_names));
  spectrum->add_option("--out", out_path, "Output file (default stdout)");
  spectrum->add_option("--format", format, "csv or json")->check(CLI::IsMember(format_names))->capture_default_str();

  std::string input;
  double fit_delta = 0.0;
  double fit_k = 0.0;
  double fit_central = 1.0;
  std::string quantity = "S1";
  std::string estimator = "pairs";
  auto* fit = app.add_subcommand("fit-c", "Local and extrapolated central charge from a scan CSV");
  fit->add_option("input", input, "Scan CSV")->required()->check(CLI::ExistingFile);
  auto* fit_delta_opt = fit->add_option("--delta", fit_delta, "Series to fit (xxz-ed)");
  auto* fit_k_opt = fit->add_option("--k", fit_k, "Series to fit (tfim)");
  fit_delta_opt->excludes(fit_k_opt);
  fit->add_option("--geometry", geometry, "Geometry the scan was taken in")->check(CLI::IsMember(geometry_names));
  fit->add_option("--c", fit_central, "Central charge used for the k1 fit")->capture_default_str();
  fit->add_option("--quantity", quantity, "S1 or S")->check(CLI::IsMember({"S1", "S"}))->capture_default_str();
  fit->add_option("--estimator", estimator, "pairs or three-point")
      ->check(CLI::IsMember({"pairs", "three-point"}))
      ->capture_default_str();
  fit->add_option("--out", out_path, "Output file (default stdout)");

  AnalyticConfig analytic_config;
  double a_k = 0, a_L = 0, a_l = 0, a_n = 0;
  int a_index = 0;
  auto* analytic = app.add_subcommand("analytic", "Evaluate a closed-form expression");
  analytic
      ->add_option("formula", analytic_config.formula,
                   "conformal-s1, conformal-renyi, xx-spectrum, elliptic-k, tfim-s1 or tfim-s1-critical")
      ->required()
      ->check(CLI::IsMember(
          {"conformal-s1", "conformal-renyi", "xx-spectrum", "elliptic-k", "tfim-s1", "tfim-s1-critical"}));
  auto* a_k_opt = analytic->add_option("--k", a_k, "Elliptic modulus");
  auto* a_L_opt = analytic->add_option("--L", a_L, "Length (chain length for finite-cut)");
  auto* a_l_opt = analytic->add_option("--l", a_l, "Subsystem length inside a finite chain");
  auto* a_n_opt = analytic->add_option("--n", a_n, "Renyi index");
  auto* a_index_opt = analytic->add_option("--index", a_index, "Level index for xx-spectrum");
  analytic->add_option("--geometry", geometry, "Geometry for conformal-s1")->check(CLI::IsMember(geometry_names));
  analytic->add_option("--c", analytic_config.c, "Central charge")->capture_default_str();
  analytic->add_option("--a", analytic_config.a, "Short-distance cutoff")->capture_default_str();
  analytic->add_option("--k1", analytic_config.k1, "Additive constant of S1")->capture_default_str();
  analytic->add_option("--b-n", analytic_config.b_n, "Amplitude of tr(rho^n)")->capture_default_str();

  std::vector<int> oracle_lengths{3, 5, 7, 9, 11, 13, 15};
  double tolerance = 1e-9;
  std::size_t top = 100;
  auto* oracle = app.add_subcommand("compare-oracle", "Delta = 0 exact diagonalization against free fermions");
  oracle->add_option("--L", oracle_lengths, "Chain lengths")->delimiter(',')->capture_default_str();
  oracle->add_option("--tolerance", tolerance, "Largest accepted deviation")->capture_default_str();
  oracle->add_option("--top", top, "Number of Schmidt weights compared")->capture_default_str();
  oracle->add_option("--threads", threads, "Worker threads, 0 for all cores")->capture_default_str();
  oracle->add_option("--out", out_path, "Output file (default stdout)");
  oracle->add_option("--format", format, "csv or json")->check(CLI::IsMember(format_names))->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    const std::optional<GeometryKind> geometry_kind =
        geometry.empty() ? std::nullopt : std::optional<GeometryKind>(parse_geometry(geometry));

    if (*scan) {
      ScanConfig config;
      config.model = parse_model(model);
      config.lengths = scan_range->count() > 0 ? parse_length_range(length_range) : lengths;
      if (config.model == Model::TFIM) {
        require(scan_delta->count() == 0, "tfim takes --k, not --delta");
        config.parameters = ks;
      } else {
        require(scan_k->count() == 0, model + " takes no --k");
        config.parameters = deltas;
      }
      config.geometry = geometry_kind;
      config.threads = threads;
      const auto rows = run_scan(config);
      Sink sink(out_path, out);
      write_scan(sink.get(), rows, parse_format(format));
      sink.close();
    } else if (*spectrum) {
      SpectrumConfig config;
      config.model = parse_model(model);
      if (config.model == Model::XX) require(spectrum_k_opt->count() == 0, "xx takes no --k");
      config.parameter = spectrum_k;
      config.L = spectrum_L;
      config.geometry = geometry_kind;
      Sink sink(out_path, out);
      write_spectrum(sink.get(), config, parse_format(format));
      sink.close();
    } else if (*fit) {
      std::ifstream in(input, std::ios::binary);
      if (!in) throw InvalidArgument("cannot read '" + input + "'");
      FitConfig config;
      if (fit_delta_opt->count() > 0) config.parameter = fit_delta;
      if (fit_k_opt->count() > 0) config.parameter = fit_k;
      config.geometry = geometry_kind;
      config.quantity = quantity == "S" ? ScalingQuantity::S : ScalingQuantity::S1;
      config.estimator = estimator == "pairs" ? SlopeEstimator::ConsecutivePairs : SlopeEstimator::SymmetricThreePoint;
      config.c = fit_central;
      const auto report = fit_c(read_scan_csv(in), config);
      for (const auto& w : report.warnings) err << "warning: " << w << '\n';
      Sink sink(out_path, out);
      write_fit(sink.get(), report);
      sink.close();
    } else if (*analytic) {
      analytic_config.k = present(a_k_opt, a_k);
      analytic_config.L = present(a_L_opt, a_L);
      analytic_config.l = present(a_l_opt, a_l);
      analytic_config.n = present(a_n_opt, a_n);
      analytic_config.index = present(a_index_opt, a_index);
      analytic_config.geometry = geometry_kind.value_or(GeometryKind::Infinite);
      out << format_number(evaluate_analytic(analytic_config), 12) << '\n';
    } else if (*oracle) {
      const auto report = compare_oracle(oracle_lengths, tolerance, top, threads);
      Sink sink(out_path, out);
      write_oracle(sink.get(), report, parse_format(format));
      sink.close();
      if (!report.passed()) {
        err << "error: max deviation " << format_number(report.max_deviation, 6) << " exceeds tolerance "
            << format_number(report.tolerance, 6) << '\n';
        return 3;
      }
    }
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::logic_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

}  // namespace sce::cli
