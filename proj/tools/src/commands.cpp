#include "kepart/cli/commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "kepart/cli/csv_io.hpp"
#include "kepart/ensemble.hpp"
#include "kepart/momenta.hpp"
#include "kepart/oracle.hpp"

namespace kepart::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Mat particle_matrix(const nlohmann::json& arr, const char* key, std::size_t n) {
  if (!arr.is_array() || arr.size() != n) {
    throw std::runtime_error(std::string("'") + key + "' must be an array with one entry per mass");
  }
  std::size_t d = 0;
  for (std::size_t a = 0; a < n; ++a) {
    const auto& row = arr[a];
    if (!row.is_array() || row.empty()) {
      throw std::runtime_error(std::string("'") + key + "' entries must be non-empty arrays");
    }
    if (a == 0) d = row.size();
    if (row.size() != d) throw std::runtime_error(std::string("'") + key + "' has inconsistent dimensions");
  }
  Mat m(static_cast<Index>(d), static_cast<Index>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t i = 0; i < d; ++i) {
      const auto& v = arr[a][i];
      if (!v.is_number()) throw std::runtime_error(std::string("'") + key + "' holds a non-number");
      m(static_cast<Index>(i), static_cast<Index>(a)) = v.get<double>();
    }
  }
  return m;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int cmd_partition(const std::string& path, std::ostream& out) {
  out << partition_report_json(read_file(path)) << '\n';
  return 0;
}

int cmd_verify(const std::string& path, double sigma, std::ostream& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  const CsvDocument doc = read_csv(in);
  Verdict v;
  try {
    v = verify_report(doc.points, sigma);
  } catch (const std::out_of_range& e) {
    throw std::runtime_error(std::string("csv is missing rows: ") + e.what());
  }
  out << std::setprecision(6);
  for (const auto& c : v.checks) {
    out << (c.pass ? "PASS" : "FAIL") << " d=" << c.d << " N=" << c.N << " masses=" << to_string(c.mode)
        << ' ' << c.what << " observed=" << c.observed << " expected=" << c.expected
        << " abs_diff=" << c.abs_diff << " sigma_ratio=" << c.sigma_ratio << '\n';
  }
  out << "checks=" << v.checks.size() << " sigma_threshold=" << sigma << '\n';
  out << "abs_diff min=" << v.min_abs_diff << " max=" << v.max_abs_diff
      << " mean=" << v.mean_abs_diff << '\n';
  out << "weighted_diff max=" << v.max_weighted_diff << " mean=" << v.mean_weighted_diff << '\n';
  out << "sigma_ratio min=" << v.min_sigma_ratio << " max=" << v.max_sigma_ratio
      << " mean=" << v.mean_sigma_ratio << '\n';
  out << (v.all_pass ? "RESULT PASS" : "RESULT FAIL") << '\n';
  return v.all_pass ? 0 : 1;
}

int cmd_oracle_check(int d, int n, std::uint64_t samples, std::uint64_t seed, std::ostream& out) {
  const OracleCheckResult r = oracle_check(d, n, samples, seed);
  out << std::setprecision(3);
  for (const auto& p : r.pairs) {
    out << std::left << std::setw(28) << p.name << " max_rel=" << p.max_rel
        << " compared=" << p.compared << '\n';
  }
  out << "systems=" << r.systems << '\n' << (r.pass ? "RESULT PASS" : "RESULT FAIL") << '\n';
  return r.pass ? 0 : 1;
}

}  // namespace

std::string partition_report_json(const std::string& input_json, const ToleranceConfig& tol) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(input_json);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw std::runtime_error("input must be a JSON object");
  for (const char* key : {"masses", "positions", "velocities"}) {
    if (!doc.contains(key)) throw std::runtime_error(std::string("missing key '") + key + "'");
  }
  const auto& jm = doc["masses"];
  if (!jm.is_array() || jm.empty()) throw std::runtime_error("'masses' must be a non-empty array");
  Vec masses(static_cast<Index>(jm.size()));
  for (std::size_t a = 0; a < jm.size(); ++a) {
    if (!jm[a].is_number()) throw std::runtime_error("'masses' holds a non-number");
    masses(static_cast<Index>(a)) = jm[a].get<double>();
  }
  const Mat pos = particle_matrix(doc["positions"], "positions", jm.size());
  const Mat vel = particle_matrix(doc["velocities"], "velocities", jm.size());
  if (pos.rows() != vel.rows()) throw std::runtime_error("positions and velocities differ in dimension");

  const ParticleSystem sys = system_from_raw(masses, pos, vel);
  const PartitionResult r = compute_partition(sys.total_mass(), sys.Z, sys.Zdot, tol);

  ordered_json j;
  j["d"] = sys.d;
  j["N"] = sys.N;
  j["M"] = r.total_mass;
  j["rho"] = r.rho;
  for (Term t : all_terms()) {
    if (static_cast<std::size_t>(t) > static_cast<std::size_t>(Term::E_c)) break;
    j[std::string(term_name(t))] = term_value(r, t);
  }
  j["J2"] = r.momenta.J2;
  j["K2"] = r.momenta.K2;
  j["Lambda2"] = r.momenta.Lambda2;
  j["L2"] = r.momenta.L2;
  j["degenerate"] = r.degenerate;
  return j.dump(2);
}

std::string config_to_json(const ExperimentConfig& cfg) {
  ordered_json j;
  j["command"] = "simulate";
  j["d"] = cfg.d;
  j["n_min"] = cfg.n_min;
  j["n_max"] = cfg.n_max;
  j["samples"] = cfg.samples;
  j["masses"] = to_string(cfg.mode);
  j["seed"] = cfg.seed;
  j["gap_tol"] = cfg.tolerances.gap_rel;
  j["zero_tol"] = cfg.tolerances.zero_rel;
  return j.dump();
}

ExperimentConfig config_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    ExperimentConfig cfg;
    cfg.d = j.at("d").get<int>();
    cfg.n_min = j.at("n_min").get<int>();
    cfg.n_max = j.at("n_max").get<int>();
    cfg.samples = j.at("samples").get<std::uint64_t>();
    cfg.mode = parse_mass_mode(j.at("masses").get<std::string>());
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.tolerances.gap_rel = j.at("gap_tol").get<double>();
    cfg.tolerances.zero_rel = j.at("zero_tol").get<double>();
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("bad config header: ") + e.what());
  }
}

std::string simulate_csv(const ExperimentConfig& cfg) {
  CsvDocument doc;
  doc.config_json = config_to_json(cfg);
  doc.points = run_experiment(cfg);
  std::ostringstream out;
  write_csv(out, doc);
  return out.str();
}

double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

OracleCheckResult oracle_check(int d, int N, std::uint64_t samples, std::uint64_t seed, double tol) {
  if (d < 1 || d > 5) throw std::invalid_argument("oracle-check: d must be in [1, 5]");
  if (N < 2 || N > 8) throw std::invalid_argument("oracle-check: N must be in [2, 8]");
  if (samples < 1) throw std::invalid_argument("oracle-check: need at least one sample");

  OracleCheckResult res;
  const char* names[] = {"T_ext fast vs oracle", "T_int fast vs oracle", "T_rot fast vs oracle",
                         "E_out fast vs oracle", "E_in fast vs oracle",  "J2 fast vs direct",
                         "K2 fast vs direct",    "Lambda2 fast vs direct", "L2 fast vs direct",
                         "E_outA frame vs eigen", "E_outB frame vs eigen", "E_inA frame vs eigen",
                         "E_inB frame vs eigen"};
  for (const char* n : names) res.pairs.push_back({n, 0.0, 0});
  auto record = [&](std::size_t idx, double a, double b) {
    auto& p = res.pairs[idx];
    p.max_rel = std::max(p.max_rel, rel_diff(a, b));
    ++p.compared;
  };

  for (MassMode mode : {MassMode::Equal, MassMode::Random}) {
    const std::uint64_t pseed = point_seed(seed, d, N, mode);
    for (std::uint64_t i = 0; i < samples; ++i) {
      RandomStream rng(pseed, i);
      const ParticleSystem sys = sample_system(d, N, mode, rng);
      const double m = sys.total_mass();
      const PartitionResult fast = compute_partition(m, sys.Z, sys.Zdot);
      const OracleResult orc = project_oracle(m, sys.Z, sys.Zdot);
      record(0, fast.T_ext, orc.T_ext);
      record(1, fast.T_int, orc.T_int);
      record(2, fast.T_rot, orc.T_rot);
      if (!fast.degenerate && orc.split_valid) {
        record(3, fast.E_out, orc.E_out);
        record(4, fast.E_in, orc.E_in);
      }
      const SvdFrame fr = svd_rates(sys.Z, sys.Zdot);
      const MomentaResult direct = momenta_direct(m, sys.Z, sys.Zdot, fr.xi, fr.xidot);
      record(5, fast.momenta.J2, direct.J2);
      record(6, fast.momenta.K2, direct.K2);
      record(7, fast.momenta.Lambda2, direct.Lambda2);
      record(8, fast.momenta.L2, direct.L2);
      const EigenFormResult eig = eigen_form_oracle(m, sys.Z, sys.Zdot);
      if (!fast.degenerate && eig.valid) {
        record(9, fast.E_outA, eig.E_outA);
        record(10, fast.E_outB, eig.E_outB);
        record(11, fast.E_inA, eig.E_inA);
        record(12, fast.E_inB, eig.E_inB);
      }
      ++res.systems;
    }
  }
  res.pass = std::all_of(res.pairs.begin(), res.pairs.end(),
                         [&](const Discrepancy& p) { return p.max_rel <= tol; });
  return res;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kinetic energy partitions of N-particle systems"};
  app.require_subcommand(1);

  std::string partition_input;
  auto* partition = app.add_subcommand("partition", "Partition terms of one system from a JSON file");
  partition->add_option("--input", partition_input, "JSON with masses, positions, velocities")
      ->required();

  ExperimentConfig sim;
  std::string mode_text = "equal";
  std::string sim_out;
  std::string replay;
  bool full = false;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo run written as CSV");
  simulate->add_option("--d", sim.d, "Spatial dimension");
  simulate->add_option("--n-min", sim.n_min, "Smallest particle count");
  simulate->add_option("--n-max", sim.n_max, "Largest particle count");
  auto* samples_opt = simulate->add_option("--samples", sim.samples, "Systems per N (default 1e5)");
  simulate->add_flag("--full", full, "Use 1e6 systems per N")->excludes(samples_opt);
  simulate->add_option("--masses", mode_text, "equal or random");
  simulate->add_option("--seed", sim.seed, "Base seed");
  simulate->add_option("--out", sim_out, "Output CSV path")->required();
  simulate->add_option("--gap-tol", sim.tolerances.gap_rel, "Relative squared gap for equal singular values");
  simulate->add_option("--zero-tol", sim.tolerances.zero_rel, "Relative threshold for zero singular values");
  simulate->add_option("--replay", replay, "Re-run the config stored in an existing CSV");

  std::string verify_input;
  double sigma = 4.0;
  auto* verify = app.add_subcommand("verify", "Check a simulate CSV against the closed-form means");
  verify->add_option("--input", verify_input, "CSV from simulate")->required();
  verify->add_option("--sigma", sigma, "Threshold in standard errors");

  int oc_d = 2;
  int oc_n = 4;
  std::uint64_t oc_samples = 100;
  std::uint64_t oc_seed = 1;
  auto* oracle = app.add_subcommand("oracle-check", "Compare fast paths with brute-force oracles");
  oracle->add_option("--d", oc_d, "Spatial dimension (1..5)");
  oracle->add_option("--n", oc_n, "Particle count (2..8)");
  oracle->add_option("--samples", oc_samples, "Systems per mass mode");
  oracle->add_option("--seed", oc_seed, "Seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (*partition) return cmd_partition(partition_input, out);
    if (*simulate) {
      if (!replay.empty()) {
        std::ifstream in(replay, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open '" + replay + "'");
        sim = config_from_json(read_csv(in).config_json);
      } else {
        sim.mode = parse_mass_mode(mode_text);
        if (full) sim.samples = 1000000;
      }
      const std::string csv = simulate_csv(sim);
      write_text_file(sim_out, csv);
      out << "wrote " << sim_out << " (N " << sim.n_min << ".." << sim.n_max << ", "
          << sim.samples << " samples per N)\n";
      return 0;
    }
    if (*verify) return cmd_verify(verify_input, sigma, out);
    if (*oracle) return cmd_oracle_check(oc_d, oc_n, oc_samples, oc_seed, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace kepart::cli
