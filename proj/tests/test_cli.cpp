#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <clocale>

#include "sce/cli/commands.hpp"
#include "sce/error.hpp"

using namespace sce;
using namespace sce::cli;
using doctest::Approx;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "sce");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

int binary_exit(const std::string& args, const std::string& env = "") {
  const std::string command = env + " " + std::string(SCE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "sce_test_cli";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

std::vector<ScanRow> conformal_rows(double c, double k1, std::vector<int> lengths) {
  std::vector<ScanRow> rows;
  for (int L : lengths) {
    const double s1 = c / 6.0 * std::log(L) + k1;
    rows.push_back(ScanRow{Model::XX, 0.0, L, 2.0 * s1, s1, std::exp(-s1), 0.0, s1, 1});
  }
  return rows;
}

}  // namespace

TEST_CASE("number formatting and ranges") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(-2.5e-20) == "-2.4999999999999999e-20");
  CHECK(format_number(std::log(2.0), 12) == "0.69314718056");
  std::setlocale(LC_ALL, "de_DE.UTF-8");
  CHECK(format_number(0.5) == "0.5");
  std::setlocale(LC_ALL, "C");

  CHECK(parse_length_range("64:4096:2") == std::vector<int>{64, 128, 256, 512, 1024, 2048, 4096});
  CHECK(parse_length_range("10:40:1.5") == std::vector<int>{10, 15, 23, 34});
  CHECK(parse_length_range("5:5:2") == std::vector<int>{5});
  CHECK_THROWS_AS(parse_length_range("64:4096"), InvalidArgument);
  CHECK_THROWS_AS(parse_length_range("64:32:2"), InvalidArgument);
  CHECK_THROWS_AS(parse_length_range("8:64:1"), InvalidArgument);
  CHECK_THROWS_AS(parse_length_range("8:x:2"), InvalidArgument);
}

TEST_CASE("scan output schema and ordering") {
  ScanConfig config;
  config.model = Model::XX;
  config.lengths = {256, 64, 128};
  const auto rows = run_scan(config);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].L == 64);
  CHECK(rows[2].L == 256);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].S1 > rows[i - 1].S1);
  for (const auto& r : rows) {
    CHECK(r.S1 == Approx(-std::log(r.w1)).epsilon(1e-13));
    CHECK(r.S1 <= r.S);
    CHECK(r.S1 == Approx(r.lnZ + r.E0).epsilon(1e-9));
    CHECK(r.M_max == static_cast<std::uint64_t>(std::floor(1.0 / r.w1)));
  }

  std::ostringstream csv;
  write_scan(csv, rows, Format::Csv);
  const auto text = lines(csv.str());
  REQUIRE(text.size() == 4);
  CHECK(text[0] == kScanHeader);
  CHECK(text[1].rfind("xx,0,64,", 0) == 0);

  config.lengths.clear();
  CHECK_THROWS_AS(run_scan(config), InvalidArgument);
  config.lengths = {64, 64};
  CHECK_THROWS_AS(run_scan(config), InvalidArgument);
  config.lengths = {64};
  config.model = Model::TFIM;
  CHECK_THROWS_AS(run_scan(config), InvalidArgument);
  config.parameters = {1.5};
  CHECK_THROWS_AS(run_scan(config), InvalidArgument);
  config.parameters = {0.5};
  config.geometry = GeometryKind::Infinite;
  CHECK_THROWS_AS(run_scan(config), InvalidArgument);
}

TEST_CASE("xxz-ed scan at delta = 0 matches the open xx chain") {
  ScanConfig ed;
  ed.model = Model::XxzEd;
  ed.parameters = {0.0};
  ed.lengths = {9, 13};
  ScanConfig ff;
  ff.model = Model::XX;
  ff.geometry = GeometryKind::FiniteCut;
  ff.lengths = {9, 13};
  const auto a = run_scan(ed);
  const auto b = run_scan(ff);
  REQUIRE(a.size() == 2);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::abs(a[i].S1 - b[i].S1) <= 1e-9);
    CHECK(std::abs(a[i].S - b[i].S) <= 1e-9);
    CHECK(a[i].M_max == b[i].M_max);
  }
}

TEST_CASE("property: scan output is byte-deterministic across thread counts") {
  ScanConfig config;
  config.model = Model::XxzEd;
  config.parameters = {0.5, -0.5, 0.0};
  config.lengths = {11, 7, 9};
  std::string reference;
  for (unsigned threads : {1u, 3u, 8u, 1u}) {
    config.threads = threads;
    std::ostringstream out;
    write_scan(out, run_scan(config), Format::Csv);
    if (reference.empty()) reference = out.str();
    CHECK(out.str() == reference);
  }
  const auto text = lines(reference);
  REQUIRE(text.size() == 10);
  CHECK(text[1].rfind("xxz-ed,-0.5,7,", 0) == 0);
  CHECK(text[9].rfind("xxz-ed,0.5,11,", 0) == 0);

  const auto path = scratch("det.csv");
  const auto first = invoke({"scan", "--model", "tfim", "--k", "0.5,0.3", "--L", "16,24", "--out", path.string()});
  REQUIRE(first.code == 0);
  std::ifstream in(path, std::ios::binary);
  const std::string file((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto second = invoke({"scan", "--model", "tfim", "--k", "0.3", "--k", "0.5", "--L", "24,16", "--threads", "2"});
  CHECK(second.out == file);
}

TEST_CASE("property: scan CSV round-trips exactly") {
  ScanConfig config;
  config.model = Model::TFIM;
  config.parameters = {0.3, 0.8};
  config.lengths = {12, 20, 30, 44};
  const auto rows = run_scan(config);
  std::ostringstream out;
  write_scan(out, rows, Format::Csv);
  std::istringstream in(out.str());
  const auto back = read_scan_csv(in);
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].model == rows[i].model);
    CHECK(back[i].parameter == rows[i].parameter);
    CHECK(back[i].L == rows[i].L);
    CHECK(back[i].S == rows[i].S);
    CHECK(back[i].S1 == rows[i].S1);
    CHECK(back[i].w1 == rows[i].w1);
    CHECK(back[i].lnZ == rows[i].lnZ);
    CHECK(back[i].E0 == rows[i].E0);
    CHECK(back[i].M_max == rows[i].M_max);
  }
  FitConfig fit;
  fit.parameter = 0.8;
  CHECK(fit_c(back, fit).warnings.empty());
}

TEST_CASE("scan CSV schema errors") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_scan_csv(in);
  };
  const std::string header = std::string(kScanHeader) + "\n";
  CHECK(parse(header).empty());
  CHECK(parse(header + "xx,0,8,1,0.5,0.6,0,0.5,1\r\n").size() == 1);
  CHECK_THROWS_AS(parse(""), InvalidArgument);
  CHECK_THROWS_AS(parse("model,L,S\n"), InvalidArgument);
  CHECK_THROWS_AS(parse(header + "xx,0,8,1,0.5,0.6,0,0.5\n"), InvalidArgument);
  CHECK_THROWS_AS(parse(header + "xx,0,8.5,1,0.5,0.6,0,0.5,1\n"), InvalidArgument);
  CHECK_THROWS_AS(parse(header + "xx,0,8,1,0,5,0.6,0,0.5,1\n"), InvalidArgument);
  CHECK_THROWS_AS(parse(header + "heisenberg,0,8,1,0.5,0.6,0,0.5,1\n"), InvalidArgument);
  CHECK_THROWS_AS(parse(header + "xx,0,8,1,0.5,nan?,0,0.5,1\n"), InvalidArgument);
}

TEST_CASE("fit-c on synthetic and XX scans") {
  SUBCASE("exact conformal input") {
    std::ostringstream out;
    write_scan(out, conformal_rows(0.87, 0.3, {16, 32, 64, 128, 256, 512, 1024}), Format::Csv);
    std::istringstream in(out.str());
    const auto report = fit_c(read_scan_csv(in), FitConfig{std::nullopt, std::nullopt, ScalingQuantity::S1,
                                                           SlopeEstimator::ConsecutivePairs, 0.87});
    REQUIRE(report.series.extrapolated_c.has_value());
    CHECK(std::abs(*report.series.extrapolated_c - 0.87) <= 1e-8);
    CHECK(report.k1 == Approx(0.3).epsilon(1e-12));
    CHECK(report.residual <= 1e-12);
    CHECK(report.warnings.empty());
  }
  SUBCASE("two rows") {
    const auto report = fit_c(conformal_rows(1.0, 0.0, {16, 32}), FitConfig{});
    CHECK(report.series.entries.size() == 1);
    CHECK_FALSE(report.series.extrapolated_c.has_value());
    CHECK(report.warnings.size() == 1);
    std::ostringstream out;
    write_fit(out, report);
    CHECK(out.str().find("\"c_extrapolated\": null") != std::string::npos);
  }
  SUBCASE("XX scan through the command line") {
    const auto path = scratch("xx.csv");
    REQUIRE(invoke({"scan", "--L-range", "64:4096:2", "--out", path.string(), "--threads", "0"}).code == 0);
    const auto fit = invoke({"fit-c", path.string()});
    REQUIRE(fit.code == 0);
    CHECK(fit.err.empty());
    const auto at = fit.out.find("\"c_extrapolated\": ");
    REQUIRE(at != std::string::npos);
    const double c = std::stod(fit.out.substr(at + 18));
    CHECK(std::abs(c - 1.0) <= 0.05);
  }
  SUBCASE("series selection") {
    auto rows = conformal_rows(1.0, 0.0, {8, 16, 32});
    auto other = rows;
    for (auto& r : rows) r.model = Model::XxzEd;
    for (auto& r : other) {
      r.model = Model::XxzEd;
      r.parameter = 0.5;
    }
    rows.insert(rows.end(), other.begin(), other.end());
    CHECK_THROWS_AS(fit_c(rows, FitConfig{}), InvalidArgument);
    FitConfig pick;
    pick.parameter = 0.5;
    CHECK(fit_c(rows, pick).series.entries.size() == 2);
    pick.parameter = 0.25;
    CHECK_THROWS_AS(fit_c(rows, pick), InvalidArgument);
    rows.front().model = Model::TFIM;
    CHECK_THROWS_AS(fit_c(rows, FitConfig{}), InvalidArgument);
  }
}

TEST_CASE("spectrum tables") {
  const auto even = invoke({"spectrum", "--L", "8"});
  REQUIRE(even.code == 0);
  const auto rows = lines(even.out);
  REQUIRE(rows.size() == 9);
  CHECK(rows[0] == "k,epsilon,zeta,zero_mode,paired");
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].substr(rows[i].size() - 4) == ",0,1");

  const auto odd = lines(invoke({"spectrum", "--L", "7"}).out);
  REQUIRE(odd.size() == 8);
  int zero_modes = 0;
  for (std::size_t i = 1; i < odd.size(); ++i) zero_modes += odd[i].substr(odd[i].size() - 4, 2) == ",1";
  CHECK(zero_modes == 1);
  CHECK(odd[4] == "3,0,0.5,1,1");

  const auto tfim = invoke({"spectrum", "--model", "tfim", "--k", "0.5", "--L", "20", "--format", "json"});
  REQUIRE(tfim.code == 0);
  CHECK(tfim.out.front() == '[');
  CHECK(invoke({"spectrum", "--model", "tfim", "--k", "1.5", "--L", "8"}).code == 2);
  CHECK(invoke({"spectrum", "--model", "xxz-ed", "--L", "8"}).code == 2);
}

TEST_CASE("analytic values") {
  auto value = [](std::vector<std::string> args) {
    args.insert(args.begin(), "analytic");
    const auto r = invoke(args);
    REQUIRE(r.code == 0);
    return r.out;
  };
  CHECK(value({"tfim-s1", "--k", "0.5"}) == "0.017818600075\n");
  CHECK(value({"elliptic-k", "--k", "0"}) == "1.57079632679\n");
  CHECK(std::stod(value({"conformal-s1", "--geometry", "finite-cut", "--L", "100", "--l", "50"})) ==
        Approx(std::log(200.0 / 3.14159265358979323846) / 12.0).epsilon(1e-11));
  CHECK(std::stod(value({"conformal-renyi", "--L", "100", "--n", "2"})) ==
        Approx(std::pow(100.0, -0.25)).epsilon(1e-11));
  CHECK(std::stod(value({"xx-spectrum", "--L", "100", "--index", "1"})) ==
        Approx(3.0 * 9.86960440108935862 / (2.0 * std::log(100.0))).epsilon(1e-11));
  CHECK(value({"tfim-s1-critical", "--k", "0.99"}) == "0.247765772646\n");
  CHECK(invoke({"analytic", "elliptic-k"}).code == 2);
  CHECK(invoke({"analytic", "elliptic-k", "--k", "1"}).code == 2);
  CHECK(invoke({"analytic", "conformal-s1", "--geometry", "finite-cut", "--L", "100"}).code == 2);
  CHECK(invoke({"analytic", "gamma", "--k", "0.5"}).code == 2);
}

TEST_CASE("compare-oracle") {
  const auto ok = invoke({"compare-oracle", "--L", "5,9", "--format", "json"});
  REQUIRE(ok.code == 0);
  CHECK(ok.out.find("\"passed\": true") != std::string::npos);
  const auto report = compare_oracle({7, 11}, 1e-9, 100);
  REQUIRE(report.rows.size() == 2);
  CHECK(report.rows[1].left == 6);
  CHECK(report.passed());
  CHECK(invoke({"compare-oracle", "--L", "5", "--tolerance", "1e-300"}).code == 3);
  CHECK(invoke({"compare-oracle", "--L", "40"}).code == 2);
}

TEST_CASE("config file, precedence and outputs") {
  const auto config = scratch("scan.ini");
  write_file(config, "[scan]\nmodel = \"xxz-ed\"\ndelta = [0.5]\nL = [5, 7]\n");
  const auto from_file = invoke({"--config", config.string(), "scan"});
  REQUIRE(from_file.code == 0);
  const auto a = lines(from_file.out);
  REQUIRE(a.size() == 3);
  CHECK(a[1].rfind("xxz-ed,0.5,5,", 0) == 0);

  const auto overridden = invoke({"--config", config.string(), "scan", "--delta", "-0.5"});
  REQUIRE(overridden.code == 0);
  CHECK(lines(overridden.out)[2].rfind("xxz-ed,-0.5,7,", 0) == 0);

  const auto json = invoke({"scan", "--L", "8", "--format", "json"});
  REQUIRE(json.code == 0);
  CHECK(json.out.find("\"M_max\"") != std::string::npos);

  CHECK(invoke({"scan", "--L", "8", "--out", "/nonexistent/dir/out.csv"}).code == 2);
  const auto bad = scratch("bad.csv");
  write_file(bad, "model,L\nxx,8\n");
  CHECK(invoke({"fit-c", bad.string()}).code == 2);
}

TEST_CASE("exit codes of the installed binary") {
  CHECK(binary_exit("--help") == 0);
  CHECK(binary_exit("scan --help") == 0);
  CHECK(binary_exit("") == 2);
  CHECK(binary_exit("scan") == 2);
  CHECK(binary_exit("scan --L") == 2);
  CHECK(binary_exit("scan --L 8 --bogus") == 2);
  CHECK(binary_exit("scan --L 8 --L-range 8:16:2") == 2);
  CHECK(binary_exit("scan --model tfim --k 1.5 --L 8") == 2);
  CHECK(binary_exit("scan --model heisenberg --L 8") == 2);
  CHECK(binary_exit("scan --model xxz-ed --L 31") == 2);
  CHECK(binary_exit("SCE_NOPE") == 2);
  CHECK(binary_exit("fit-c /nonexistent.csv") == 2);
  CHECK(binary_exit("compare-oracle --L 3 --tolerance 1e-300") == 3);
  CHECK(binary_exit("scan --L 8") == 0);
  CHECK(binary_exit("scan --model xxz-ed --L 9", "SCE_MAX_ED_SITES=8") == 2);
  CHECK(binary_exit("scan --model xxz-ed --L 7", "SCE_MAX_ED_SITES=8") == 0);
  CHECK(binary_exit("scan --model xxz-ed --L 5", "SCE_MAX_ED_SITES=abc") == 2);
}
