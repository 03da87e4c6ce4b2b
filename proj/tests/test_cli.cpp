#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "commands.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::initializer_list<std::string> args) {
  std::vector<std::string> storage{"bb84lab"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : storage) argv.push_back(s.c_str());
  std::ostringstream out, err;
  const int code = bb84::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

struct CsvRow {
  std::string parameter;
  double value;
  std::string quantity;
  double analytic;
};

std::vector<CsvRow> parse_csv(const std::string& text) {
  std::vector<CsvRow> rows;
  std::istringstream in(text);
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      REQUIRE(line == "parameter,value,quantity,analytic,simulated,std_error");
      header_seen = true;
      continue;
    }
    std::istringstream ls(line);
    std::string f[6];
    for (auto& x : f) std::getline(ls, x, ',');
    rows.push_back({f[0], std::stod(f[1]), f[2], std::stod(f[3])});
  }
  return rows;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("bb84lab_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("sweep with explicit quantity") {
  const auto r = run_cli({"sweep", "--quantity", "qber_q0", "--from", "0", "--to", "1.5708", "--points", "3"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].value == 0.0);
  CHECK(rows[0].analytic == 0.0);
  CHECK(rows[1].value == doctest::Approx(std::numbers::pi / 4).epsilon(1e-4));
  CHECK(rows[1].analytic == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(rows[2].analytic == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.out.rfind("# format_version=1\n", 0) == 0);
  CHECK(r.out.find('\r') == std::string::npos);
}

TEST_CASE("figure presets") {
  const auto dir = scratch_dir("figures");

  SUBCASE("figure 4") {
    const auto out = dir / "mi.csv";
    REQUIRE(run_cli({"sweep", "--figure", "4", "--points", "500", "--out", out.string()}).code == 0);
    const auto rows = parse_csv(slurp(out));
    REQUIRE(rows.size() == 500);
    CHECK(rows.front().parameter == "epsilon");
    CHECK(rows.front().analytic == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(rows.back().analytic == doctest::Approx(0.5).epsilon(1e-14));
    CHECK_FALSE(fs::exists(out.string() + ".tmp"));
  }
  SUBCASE("figure 3") {
    const auto r = run_cli({"sweep", "--figure", "3"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    CHECK(rows.size() == 3 * 201);
    for (const auto& row : rows) {
      if (row.value != 0.0) continue;
      if (row.quantity == "qber_q0") CHECK(row.analytic == 0.0);
      if (row.quantity == "qber_q1") CHECK(row.analytic == 0.25);
      if (row.quantity == "qber_q2") CHECK(row.analytic == 0.25);
    }
  }
  SUBCASE("figure 5 as JSON") {
    const auto r = run_cli({"sweep", "--figure", "5", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto doc = json::parse(r.out);
    CHECK(doc["format_version"] == 1);
    CHECK(doc["marker_theta"].get<double>() == 0.13);
    REQUIRE(doc["series"].size() == 3);
    for (const auto& s : doc["series"]) {
      const auto& pts = s["points"];
      double max_v = -1.0;
      for (const auto& p : pts) max_v = std::max(max_v, p["analytic"].get<double>());
      CHECK(pts[0]["analytic"].get<double>() == max_v);
    }
  }
}

TEST_CASE("sweep with simulated overlay") {
  const auto r = run_cli({"sweep", "--quantity", "qber_q2", "--points", "4", "--simulate-n", "20000", "--seed", "3"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::size_t filled = 0;
  while (std::getline(in, line)) {
    if (line.rfind("theta,", 0) == 0 && line.back() != ',') ++filled;
  }
  CHECK(filled == 4);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run_cli({"sweep", "--figure", "7"}).code == 2);
  CHECK(run_cli({"sweep", "--figure", "3", "--quantity", "mi_ae"}).code == 2);
  CHECK(run_cli({"sweep", "--quantity", "bogus"}).code == 2);
  CHECK(run_cli({"sweep", "--quantity", "qber_q0", "--points", "1"}).code == 2);
  CHECK(run_cli({"sweep", "--quantity", "qber_q0", "--to", "3.0"}).code == 2);
  CHECK(run_cli({"sweep"}).code == 2);
  CHECK(run_cli({"simulate"}).code == 2);
  CHECK(run_cli({"simulate", "--scenario", "nobody"}).code == 2);
  CHECK(run_cli({"simulate", "--scenario", "near-alice", "--theta", "0.2"}).code == 2);
  CHECK(run_cli({"simulate", "--scenario", "noise-only", "--fraction", "1.5"}).code == 2);
  CHECK(run_cli({"optimize", "--resolution", "10"}).code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("I/O failures exit with 1") {
  CHECK(run_cli({"sweep", "--figure", "4", "--out", "/nonexistent-dir/x/mi.csv"}).code == 1);
  CHECK(run_cli({"optimize", "--out", "/nonexistent-dir/x/o.json"}).code == 1);
}

TEST_CASE("simulate") {
  SUBCASE("noiseless summary") {
    const auto r = run_cli({"simulate", "--scenario", "noise-only", "--theta", "0", "--n", "10000", "--seed", "7"});
    REQUIRE(r.code == 0);
    const auto doc = json::parse(r.out);
    CHECK(doc["qber_estimate"].get<double>() == 0.0);
    CHECK(doc["aborted"] == false);
    CHECK(doc["keys_agree"] == true);
    CHECK(doc["empirical_mi_ae"].is_null());
  }
  SUBCASE("full attack aborts near the 0.25 floor") {
    const auto r = run_cli({"simulate", "--scenario", "full-attack", "--theta", "0", "--phi", "0", "--n", "100000", "--seed", "7"});
    REQUIRE(r.code == 0);
    const auto doc = json::parse(r.out);
    const double q = doc["qber_estimate"].get<double>();
    const double m = doc["disclosed_count"].get<double>();
    CHECK(std::abs(q - 0.25) <= 3.0 * std::sqrt(0.25 * 0.75 / m));
    CHECK(doc["aborted"] == true);
    CHECK(doc["empirical_mi_ae"].get<double>() == doctest::Approx(0.5).epsilon(0.02));
  }
  SUBCASE("transcript and output directory") {
    const auto dir = scratch_dir("simulate");
    setenv(bb84::cli::kOutputDirEnv, dir.c_str(), 1);
    const auto r = run_cli({"simulate", "--scenario", "near-alice", "--phi", "0.2", "--n", "500", "--seed", "1",
                            "--out", "summary.json", "--transcript", "records.txt"});
    unsetenv(bb84::cli::kOutputDirEnv);
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    const auto summary = json::parse(slurp(dir / "summary.json"));
    CHECK(summary["scenario"] == "near-alice");
    std::istringstream records(slurp(dir / "records.txt"));
    std::string line;
    std::size_t data_lines = 0;
    while (std::getline(records, line)) data_lines += !line.empty() && line[0] != '#';
    CHECK(data_lines == 500);
  }
  SUBCASE("repeatable output") {
    const auto a = run_cli({"simulate", "--scenario", "full-attack", "--theta", "0.2", "--phi", "0.1", "--n", "5000", "--seed", "4"});
    const auto b = run_cli({"simulate", "--scenario", "full-attack", "--theta", "0.2", "--phi", "0.1", "--n", "5000", "--seed", "4"});
    CHECK(a.out == b.out);
  }
}

TEST_CASE("optimize") {
  const auto r = run_cli({"optimize"});
  REQUIRE(r.code == 0);
  const auto doc = json::parse(r.out);
  CHECK(std::abs(doc["epsilon_star"].get<double>() - 0.13) <= 0.02);
  CHECK(std::abs(doc["reduction_percent"].get<double>() - 20.0) <= 2.0);
  CHECK(doc["skr_table"][0]["scenario"] == "noise-only");
  CHECK(doc["skr_table"][0]["skr_at_reference"].get<double>() == doctest::Approx(0.2213).epsilon(1e-3));

  const auto fine = json::parse(run_cli({"optimize", "--resolution", "10000"}).out);
  CHECK(std::abs(fine["epsilon_star"].get<double>() - doc["epsilon_star"].get<double>()) < 1e-4);
}

TEST_CASE("verify") {
  SUBCASE("analytic only") {
    const auto r = run_cli({"verify", "--skip-montecarlo"});
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(r.out.find("montecarlo") == std::string::npos);
    CHECK(r.out.find("EXPECTED DIVERGENCE equal_noise_qber at theta=0.785398: as_printed=0.500000 "
                     "consistent=0.750000") != std::string::npos);
    CHECK(r.out.find("EXPECTED DIVERGENCE alice_eve_information") != std::string::npos);
  }
  SUBCASE("json report") {
    const auto r = run_cli({"verify", "--skip-montecarlo", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto doc = json::parse(r.out);
    CHECK(doc["all_passed"] == true);
    for (const auto& c : doc["checks"]) {
      CHECK(c["max_deviation"].get<double>() <= c["tolerance"].get<double>());
    }
    CHECK(doc["expected_divergences"][0]["difference"].get<double>() == doctest::Approx(-0.25));
  }
  SUBCASE("a failing Monte Carlo check exits with 3") {
    // Two qubits per run cannot resolve the curves.
    CHECK(run_cli({"verify", "--n", "2"}).code == 3);
  }
}
