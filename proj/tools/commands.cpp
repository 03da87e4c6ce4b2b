#include "commands.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bb84/information.hpp"
#include "bb84/optimizer.hpp"
#include "bb84/protocol.hpp"
#include "bb84/security.hpp"
#include "bb84/verify.hpp"

namespace bb84::cli {
namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr int kFormatVersion = 1;
constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kFigureMarkerTheta = 0.13;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

std::string fmt_fixed(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

fs::path resolve_output(const std::string& path) {
  fs::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
      p = fs::path(dir) / p;
    }
  }
  return p;
}

/// Writes to a sibling temporary file and renames it over the target.
void write_atomically(const fs::path& target, const std::string& content) {
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + tmp.string() + " for writing");
    f << content;
    f.flush();
    if (!f) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename onto " + target.string());
  }
}

void emit(const std::string& out_path, const std::string& content, std::ostream& out) {
  if (out_path.empty()) {
    out << content;
  } else {
    write_atomically(resolve_output(out_path), content);
  }
}

enum class Format { csv, json };

Format pick_format(const std::string& flag, const std::string& out_path) {
  if (flag == "csv") return Format::csv;
  if (flag == "json") return Format::json;
  if (!flag.empty()) throw UsageError("--format must be csv or json");
  return fs::path(out_path).extension() == ".json" ? Format::json : Format::csv;
}

// ---- sweep -----------------------------------------------------------------

struct SweepArgs {
  int figure = 0;
  std::vector<std::string> quantities;
  bool epsilon = false;
  std::optional<double> from, to;
  std::optional<std::size_t> points;
  bool as_printed = false;
  std::size_t simulate_n = 0;
  std::uint64_t seed = 0;
  std::string out, format;
};

struct Series {
  Quantity quantity;
  std::vector<SecurityPoint> points;
  std::vector<std::optional<Transcript>> simulated;
};

bool is_qber(Quantity q) {
  return q == Quantity::qber_q0 || q == Quantity::qber_q1 || q == Quantity::qber_q2;
}

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  SweepParameter parameter = a.epsilon ? SweepParameter::epsilon : SweepParameter::theta;
  std::vector<Quantity> quantities;
  std::size_t points = 201;
  std::optional<double> marker;

  switch (a.figure) {
    case 0:
      if (a.quantities.empty()) throw UsageError("sweep needs --figure or --quantity");
      for (const auto& q : a.quantities) quantities.push_back(parse_quantity(q));
      break;
    case 3:
      parameter = SweepParameter::theta;
      quantities = {Quantity::qber_q0, Quantity::qber_q1, Quantity::qber_q2};
      break;
    case 4:
      parameter = SweepParameter::epsilon;
      quantities = {Quantity::mi_ae};
      points = 501;
      break;
    case 5:
      parameter = SweepParameter::theta;
      quantities = {Quantity::skr_q0, Quantity::skr_q1, Quantity::skr_q2};
      marker = kFigureMarkerTheta;
      break;
    default: throw UsageError("--figure must be 3, 4 or 5");
  }
  if (a.points) points = *a.points;

  SweepSpec spec;
  spec.parameter = parameter;
  spec.start = a.from.value_or(0.0);
  spec.stop = a.to.value_or(parameter == SweepParameter::theta ? kHalfPi : 1.0);
  spec.points = points;
  spec.q1_form = a.as_printed ? EqualNoiseForm::as_printed : EqualNoiseForm::matrix_product;

  std::vector<Series> series;
  for (Quantity q : quantities) {
    spec.quantity = q;
    Series s{q, sweep(spec), {}};
    s.simulated.resize(s.points.size());
    if (a.simulate_n > 0 && is_qber(q)) {
      for (std::size_t i = 0; i < s.points.size(); ++i) {
        ProtocolConfig cfg;
        cfg.n_qubits = a.simulate_n;
        cfg.seed = a.seed + i;
        cfg.scenario = s.points[i].scenario;
        s.simulated[i] = run_bb84(cfg);
      }
    }
    series.push_back(std::move(s));
  }

  auto x_of = [&](const SecurityPoint& p) {
    return parameter == SweepParameter::theta ? p.theta : p.epsilon;
  };
  const std::string pname(parameter_name(parameter));
  std::ostringstream body;

  if (pick_format(a.format, a.out) == Format::csv) {
    body << "# format_version=" << kFormatVersion << '\n';
    if (a.figure != 0) body << "# figure=" << a.figure << '\n';
    if (a.as_printed) body << "# qber_q1=as_printed\n";
    if (marker) body << "# marker theta=" << fmt_double(*marker) << '\n';
    body << "parameter,value,quantity,analytic,simulated,std_error\n";
    for (const Series& s : series) {
      for (std::size_t i = 0; i < s.points.size(); ++i) {
        body << pname << ',' << fmt_double(x_of(s.points[i])) << ',' << quantity_name(s.quantity)
             << ',' << fmt_double(quantity_value(s.points[i], s.quantity)) << ',';
        if (const auto& t = s.simulated[i]; t && std::isfinite(t->qber_estimate)) {
          body << fmt_double(t->qber_estimate) << ',' << fmt_double(t->qber_standard_error());
        } else {
          body << ',';
        }
        body << '\n';
      }
    }
  } else {
    ordered_json doc;
    doc["format_version"] = kFormatVersion;
    doc["figure"] = a.figure != 0 ? ordered_json(a.figure) : ordered_json(nullptr);
    doc["parameter"] = pname;
    doc["qber_q1_form"] = a.as_printed ? "as_printed" : "matrix_product";
    doc["marker_theta"] = marker ? ordered_json(*marker) : ordered_json(nullptr);
    ordered_json js = ordered_json::array();
    for (const Series& s : series) {
      ordered_json rows = ordered_json::array();
      for (std::size_t i = 0; i < s.points.size(); ++i) {
        ordered_json row;
        row["value"] = x_of(s.points[i]);
        row["analytic"] = quantity_value(s.points[i], s.quantity);
        if (const auto& t = s.simulated[i]; t && std::isfinite(t->qber_estimate)) {
          row["simulated"] = t->qber_estimate;
          row["std_error"] = t->qber_standard_error();
        }
        rows.push_back(std::move(row));
      }
      js.push_back({{"quantity", quantity_name(s.quantity)}, {"points", std::move(rows)}});
    }
    doc["series"] = std::move(js);
    body << doc.dump(2) << '\n';
  }
  emit(a.out, body.str(), out);
  return kSuccess;
}

// ---- simulate --------------------------------------------------------------

struct SimulateArgs {
  std::string scenario;
  std::optional<double> theta, phi;
  std::size_t n = 10000;
  std::uint64_t seed = 0;
  double fraction = 0.2;
  double threshold = 0.11;
  std::string out, transcript;
};

Scenario build_scenario(const SimulateArgs& a) {
  switch (parse_scenario_kind(a.scenario)) {
    case ScenarioKind::noise_only:
      if (a.phi) throw UsageError("--phi does not apply to the noise-only scenario");
      return Scenario::noise_only(a.theta.value_or(0.0));
    case ScenarioKind::full_channel_attack:
      return Scenario::full_channel_attack(a.theta.value_or(0.0), a.phi.value_or(0.0));
    case ScenarioKind::near_alice_attack:
      if (a.theta) throw UsageError("--theta does not apply to near-alice; the Alice-Eve segment is noiseless");
      return Scenario::near_alice_attack(a.phi.value_or(0.0));
  }
  throw UsageError("unknown scenario");
}

ordered_json nullable(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  ProtocolConfig cfg;
  try {
    cfg.scenario = build_scenario(a);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  cfg.n_qubits = a.n;
  cfg.seed = a.seed;
  cfg.estimation_fraction = a.fraction;
  cfg.abort_threshold = a.threshold;
  cfg.validate();

  const Transcript t = run_bb84(cfg);
  const SecurityPoint analytic = security_point(cfg.scenario);

  ordered_json doc;
  doc["format_version"] = kFormatVersion;
  doc["scenario"] = scenario_name(cfg.scenario.kind);
  doc["theta"] = cfg.scenario.theta;
  doc["phi"] = cfg.scenario.phi;
  doc["n_qubits"] = cfg.n_qubits;
  doc["seed"] = cfg.seed;
  doc["estimation_fraction"] = cfg.estimation_fraction;
  doc["abort_threshold"] = cfg.abort_threshold;
  doc["sifted_length"] = t.sifted_indices.size();
  doc["disclosed_count"] = t.disclosed_indices.size();
  doc["disclosed_errors"] = t.disclosed_errors;
  doc["key_length"] = t.sifted_key_alice.size();
  doc["keys_agree"] = t.sifted_key_alice == t.sifted_key_bob;
  doc["qber_estimate"] = nullable(t.qber_estimate);
  doc["qber_std_error"] = nullable(t.qber_standard_error());
  doc["analytic_qber"] = analytic.qber;
  doc["aborted"] = t.aborted;
  if (cfg.scenario.eve_present()) {
    doc["empirical_mi_ae"] = empirical_mutual_information(t);
    doc["analytic_mi_ae"] = analytic.i_ae;
  } else {
    doc["empirical_mi_ae"] = nullptr;
    doc["analytic_mi_ae"] = nullptr;
  }
  emit(a.out, doc.dump(2) + "\n", out);

  if (!a.transcript.empty()) {
    std::ostringstream records;
    write_transcript(records, t);
    write_atomically(resolve_output(a.transcript), records.str());
  }
  return kSuccess;
}

// ---- optimize --------------------------------------------------------------

struct OptimizeArgs {
  std::size_t resolution = 1000;
  double reference_epsilon = 0.13;
  std::string out;
};

int cmd_optimize(const OptimizeArgs& a, std::ostream& out) {
  const Optimum o = minimize_eve_information(a.resolution);
  const TradeoffReport report = skr_tradeoff_report(o, a.reference_epsilon);

  ordered_json doc;
  doc["format_version"] = kFormatVersion;
  doc["resolution"] = a.resolution;
  doc["epsilon_star"] = o.epsilon_star;
  doc["theta_star"] = o.theta_star;
  doc["i_min"] = o.i_min;
  doc["i_min_joint_entropy"] = mutual_information_from_joint(joint_alice_eve(o.theta_star));
  doc["i_at_zero"] = o.i_at_zero;
  doc["reduction_fraction"] = o.reduction_fraction;
  doc["reduction_percent"] = 100.0 * o.reduction_fraction;
  doc["skr_at_star"] = o.skr_at_star;
  doc["skr_max"] = o.skr_max;
  doc["reference_epsilon"] = report.reference_epsilon;
  ordered_json table = ordered_json::array();
  for (const TradeoffRow& r : report.rows) {
    ordered_json row;
    row["scenario"] = scenario_name(r.scenario);
    row["skr_at_zero"] = r.skr_at_zero;
    row["skr_at_star"] = r.skr_at_star;
    row["absolute_penalty"] = r.absolute_penalty;
    row["relative_penalty"] = r.relative_penalty;
    row["skr_at_reference"] = r.skr_at_reference;
    table.push_back(std::move(row));
  }
  doc["skr_table"] = std::move(table);
  emit(a.out, doc.dump(2) + "\n", out);
  return kSuccess;
}

// ---- verify ----------------------------------------------------------------

struct VerifyArgs {
  bool skip_montecarlo = false;
  std::uint64_t seed = VerifyOptions{}.seed;
  std::size_t n = VerifyOptions{}.mc_qubits;
  std::string format = "text";
  std::string out;
};

std::string render_text(const VerificationReport& rep) {
  std::ostringstream s;
  s << "bb84lab verification report (format_version=" << kFormatVersion << ")\n";
  std::size_t passed = 0;
  for (const CheckResult& c : rep.checks) {
    if (c.passed) ++passed;
    s << (c.passed ? "PASS " : "FAIL ") << c.name << " [" << c.kind << "]"
      << " max_deviation=" << fmt_fixed("%.3e", c.max_deviation)
      << " tolerance=" << fmt_fixed("%.1e", c.tolerance);
    if (!c.detail.empty()) s << " (" << c.detail << ")";
    s << '\n';
  }
  for (const ExpectedDivergence& d : rep.divergences) {
    s << "EXPECTED DIVERGENCE " << d.name << " at " << d.parameter << "="
      << fmt_fixed("%.6f", d.at) << ": as_printed=" << fmt_fixed("%.6f", d.as_printed)
      << " consistent=" << fmt_fixed("%.6f", d.consistent)
      << " difference=" << fmt_fixed("%.6f", d.as_printed - d.consistent) << '\n';
  }
  s << passed << "/" << rep.checks.size() << " checks passed\n";
  return s.str();
}

std::string render_json(const VerificationReport& rep) {
  ordered_json doc;
  doc["format_version"] = kFormatVersion;
  doc["all_passed"] = rep.all_passed();
  ordered_json checks = ordered_json::array();
  for (const CheckResult& c : rep.checks) {
    checks.push_back({{"name", c.name},
                      {"kind", c.kind},
                      {"max_deviation", nullable(c.max_deviation)},
                      {"tolerance", c.tolerance},
                      {"passed", c.passed},
                      {"detail", c.detail}});
  }
  doc["checks"] = std::move(checks);
  ordered_json div = ordered_json::array();
  for (const ExpectedDivergence& d : rep.divergences) {
    div.push_back({{"name", d.name},
                   {"parameter", d.parameter},
                   {"at", d.at},
                   {"as_printed", d.as_printed},
                   {"consistent", d.consistent},
                   {"difference", d.as_printed - d.consistent}});
  }
  doc["expected_divergences"] = std::move(div);
  return doc.dump(2) + "\n";
}

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  VerifyOptions opt;
  opt.montecarlo = !a.skip_montecarlo;
  opt.seed = a.seed;
  opt.mc_qubits = a.n;
  const VerificationReport rep = run_verification(opt);
  emit(a.out, a.format == "json" ? render_json(rep) : render_text(rep), out);
  return rep.all_passed() ? kSuccess : kVerificationFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"BB84 security under collective rotation noise"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "bb84lab 1.0.0");

  SweepArgs sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate QBER, information or key rate on a noise grid");
  auto* fig = sweep_cmd->add_option("--figure", sw.figure, "Preset curve family (3, 4 or 5)")
                  ->check(CLI::IsMember({3, 4, 5}));
  auto* qopt = sweep_cmd->add_option("--quantity", sw.quantities,
                                     "qber_q0|qber_q1|qber_q2|mi_ae|skr_q0|skr_q1|skr_q2");
  auto* eps = sweep_cmd->add_flag("--epsilon", sw.epsilon, "Sweep epsilon = sin^2(theta) instead of theta");
  auto* from = sweep_cmd->add_option("--from", sw.from, "Range start (radians or epsilon)");
  auto* to = sweep_cmd->add_option("--to", sw.to, "Range end (radians or epsilon)");
  sweep_cmd->add_option("--points", sw.points, "Grid points");
  sweep_cmd->add_flag("--as-printed", sw.as_printed, "Use (1 + sin^2 2t)/4 for qber_q1");
  sweep_cmd->add_option("--simulate-n", sw.simulate_n, "Also simulate QBER curves with N qubits per point");
  sweep_cmd->add_option("--seed", sw.seed, "Base seed for --simulate-n");
  sweep_cmd->add_option("--out", sw.out, "Output file (default stdout)");
  sweep_cmd->add_option("--format", sw.format, "csv or json (default from extension)");
  fig->excludes(qopt)->excludes(eps)->excludes(from)->excludes(to);

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Run the BB84 protocol by Monte Carlo");
  sim_cmd->add_option("--scenario", sim.scenario, "noise-only|full-attack|near-alice")->required();
  sim_cmd->add_option("--theta", sim.theta, "Alice->Eve (or Alice->Bob) rotation, radians");
  sim_cmd->add_option("--phi", sim.phi, "Eve->Bob rotation, radians");
  sim_cmd->add_option("--n", sim.n, "Qubits sent");
  sim_cmd->add_option("--seed", sim.seed, "Random seed");
  sim_cmd->add_option("--fraction", sim.fraction, "Share of sifted bits disclosed");
  sim_cmd->add_option("--threshold", sim.threshold, "Abort when the estimated QBER exceeds this");
  sim_cmd->add_option("--out", sim.out, "Summary JSON file (default stdout)");
  sim_cmd->add_option("--transcript", sim.transcript, "Write per-qubit records here");

  OptimizeArgs opt;
  auto* opt_cmd = app.add_subcommand("optimize", "Find the noise level minimizing Eve's information");
  opt_cmd->add_option("--resolution", opt.resolution, "Coarse grid points before refinement");
  opt_cmd->add_option("--reference-epsilon", opt.reference_epsilon, "Extra noise level for the key-rate table");
  opt_cmd->add_option("--out", opt.out, "Report JSON file (default stdout)");

  VerifyArgs ver;
  auto* ver_cmd = app.add_subcommand("verify", "Check closed forms against independent oracles");
  ver_cmd->add_flag("--skip-montecarlo", ver.skip_montecarlo, "Analytic checks only");
  ver_cmd->add_option("--seed", ver.seed, "Base seed for Monte Carlo checks");
  ver_cmd->add_option("--n", ver.n, "Qubits per Monte Carlo run");
  ver_cmd->add_option("--format", ver.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  ver_cmd->add_option("--out", ver.out, "Report file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (*sweep_cmd) return cmd_sweep(sw, out);
    if (*sim_cmd) return cmd_simulate(sim, out);
    if (*opt_cmd) return cmd_optimize(opt, out);
    if (*ver_cmd) return cmd_verify(ver, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace bb84::cli
