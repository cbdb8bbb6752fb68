#include "adelim/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "adelim/analytic_forms.hpp"
#include "adelim/manifest.hpp"
#include "adelim/moment_dynamics.hpp"
#include "adelim/noise_synthesis.hpp"
#include "adelim/parallel.hpp"
#include "adelim/quadrature.hpp"
#include "adelim/version.hpp"

namespace adelim::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct GlobalOptions {
  std::string out_dir = ".";
  std::uint64_t seed = 20250811;
  double rel_tol = 1.0e-10;
  int threads = 1;
  std::string config_file;
};

/// Fills option targets from a config JSON for flags the user did not give.
struct ConfigLayer {
  json flat = json::object();

  static ConfigLayer load(const std::string& path) {
    ConfigLayer layer;
    if (path.empty()) return layer;
    std::ifstream in(path);
    if (!in) throw ConfigurationError("--config: cannot open " + path);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw ConfigurationError("--config: invalid JSON in " + path + ": " + e.what());
    }
    // A manifest works directly: its params object mirrors the flags.
    layer.flat = (j.is_object() && j.contains("params")) ? j.at("params") : j;
    if (j.is_object() && j.contains("seed") && !layer.flat.contains("seed"))
      layer.flat["seed"] = j.at("seed");
    if (!layer.flat.is_object()) throw ConfigurationError("--config: expected a JSON object");
    return layer;
  }

  template <class T>
  void maybe(const CLI::Option* opt, const char* key, T& target) const {
    if (opt != nullptr && opt->count() > 0) return;
    if (!flat.contains(key)) return;
    try {
      target = flat.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigurationError(std::string("--config: bad value for key '") + key + "'");
    }
  }
};

std::vector<double> make_axis(double lo, double hi, int points, const std::string& scale) {
  if (points < 2) throw ConfigurationError("axis: points must be >= 2");
  if (points > 10'000'000) throw ConfigurationError("axis: more than 1e7 points requested");
  if (!(hi > lo)) throw ConfigurationError("axis: max must exceed min");
  std::vector<double> axis(points);
  if (scale == "log") {
    if (!(lo > 0.0)) throw ConfigurationError("axis: log scale requires min > 0");
    const double l0 = std::log(lo);
    const double l1 = std::log(hi);
    for (int i = 0; i < points; ++i)
      axis[i] = std::exp(l0 + (l1 - l0) * static_cast<double>(i) / (points - 1));
  } else if (scale == "linear") {
    for (int i = 0; i < points; ++i)
      axis[i] = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
  } else {
    throw ConfigurationError("axis: scale must be 'linear' or 'log'");
  }
  return axis;
}

fs::path prepare_out_dir(const GlobalOptions& g) {
  fs::path dir(g.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string());
  return dir;
}

QuadratureConfig quad_config(const GlobalOptions& g) {
  QuadratureConfig cfg;
  cfg.rel_tol = g.rel_tol;
  return cfg;
}

RunManifest base_manifest(const std::string& command, const GlobalOptions& g) {
  RunManifest m;
  m.command = command;
  m.seed = g.seed;
  const QuadratureConfig cfg = quad_config(g);
  m.tolerances = {{"rel_tol", cfg.rel_tol},
                  {"abs_tol", cfg.abs_tol},
                  {"max_subdivisions", cfg.max_subdivisions}};
  m.timestamp_utc = utc_timestamp_now();
  m.params["seed"] = g.seed;
  m.params["rel-tol"] = g.rel_tol;
  m.params["threads"] = g.threads;
  m.params["out"] = g.out_dir;
  return m;
}

void log_stage(const std::string& msg) { std::cerr << "[adelim] " << msg << '\n'; }

std::string bool_cell(bool b) { return b ? "true" : "false"; }

// ----------------------------------------------------------------------
// sweep-commutator

struct SweepCommutatorParams {
  double omega_c = 1.0e3;
  double x_min = 10.0;
  double x_max = 1.0e6;
  int points = 200;
  std::string scale = "log";
};

int run_sweep_commutator(const SweepCommutatorParams& p, const GlobalOptions& g) {
  if (!(p.x_min > 0.0)) throw ConfigurationError("sweep-commutator: x-min must be positive");
  const std::vector<double> axis = make_axis(p.x_min, p.x_max, p.points, p.scale);
  const QuadratureConfig cfg = quad_config(g);

  std::vector<double> closed(axis.size());
  std::vector<double> quad(axis.size(), std::numeric_limits<double>::quiet_NaN());
  std::vector<char> failed(axis.size(), 0);
  log_stage("sweep-commutator: evaluating " + std::to_string(axis.size()) + " bandwidths");
  parallel_for(static_cast<std::int64_t>(axis.size()), g.threads, [&](std::int64_t i) {
    closed[i] = commutator_cutoff(p.omega_c, axis[i]);
    try {
      quad[i] = integrate_lorentzian(p.omega_c, axis[i], cfg);
    } catch (const ConvergenceError&) {
      failed[i] = 1;
    }
  });

  const fs::path dir = prepare_out_dir(g);
  const fs::path csv_path = dir / "sweep_commutator.csv";
  CsvWriter csv(csv_path, {"omega_cap_ratio", "commutator_closed_form", "commutator_quadrature",
                           "abs_diff"});
  int n_failed = 0;
  for (std::size_t i = 0; i < axis.size(); ++i) {
    if (failed[i]) {
      ++n_failed;
      csv.write_row({csv_number(axis[i]), csv_number(closed[i]), "", ""});
    } else {
      csv.write_row({csv_number(axis[i]), csv_number(closed[i]), csv_number(quad[i]),
                     csv_number(std::abs(quad[i] - closed[i]))});
    }
  }
  csv.close();

  RunManifest m = base_manifest("sweep-commutator", g);
  m.params["omega-c"] = p.omega_c;
  m.params["x-min"] = p.x_min;
  m.params["x-max"] = p.x_max;
  m.params["points"] = p.points;
  m.params["scale"] = p.scale;
  if (n_failed > 0) m.extras["failed_rows"] = n_failed;
  m.add_output(csv_path);
  m.write(dir / "sweep_commutator_manifest.json");
  log_stage("sweep-commutator: wrote " + csv_path.string());
  return n_failed > 0 ? 1 : 0;
}

// ----------------------------------------------------------------------
// dbound-sweep

struct DboundSweepParams {
  double omega_c = 1.0e3;
  double x_min = 2.5e3;
  double x_max = 1.0e7;
  int points = 200;
  std::string scale = "log";
};

int run_dbound_sweep(const DboundSweepParams& p, const GlobalOptions& g) {
  const std::vector<double> axis = make_axis(p.x_min, p.x_max, p.points, p.scale);

  const fs::path dir = prepare_out_dir(g);
  const fs::path csv_path = dir / "dbound_sweep.csv";
  CsvWriter csv(csv_path, {"omega_cap_ratio", "d_bound", "valid"});
  for (double x : axis) {
    const CutoffSpec spec = CutoffSpec::make(p.omega_c, x);
    if (spec.d_bound_valid) {
      csv.write_row({csv_number(x), csv_number(d_bound(p.omega_c, x)), bool_cell(true)});
    } else {
      csv.write_row({csv_number(x), "", bool_cell(false)});
    }
  }
  csv.close();

  RunManifest m = base_manifest("dbound-sweep", g);
  m.params["omega-c"] = p.omega_c;
  m.params["x-min"] = p.x_min;
  m.params["x-max"] = p.x_max;
  m.params["points"] = p.points;
  m.params["scale"] = p.scale;
  m.add_output(csv_path);
  m.write(dir / "dbound_sweep_manifest.json");
  log_stage("dbound-sweep: wrote " + csv_path.string());
  return 0;
}

// ----------------------------------------------------------------------
// correlation

struct CorrelationParams {
  std::string method;
  double n_th = 1.0;
  std::vector<double> lags{0.0, 0.5, 1.0, 2.0, 5.0};
  double omega_c = 1.0e3;
  double omega_cap = 0.0;
  double d_omega = 0.0;
  std::int64_t n_traj = 0;
};

int run_correlation(const CorrelationParams& p, const GlobalOptions& g) {
  const bool is_quad = p.method == "cutoff-quad";
  const bool is_mc = p.method == "cutoff-mc";
  if (p.method != "exact" && p.method != "adiabatic" && !is_quad && !is_mc) {
    throw ConfigurationError(
        "correlation: method must be one of exact|cutoff-quad|cutoff-mc|adiabatic");
  }
  if ((is_quad || is_mc) && !(p.omega_cap > 0.0))
    throw ConfigurationError("correlation: method '" + p.method + "' requires --omega-cap");
  if (is_mc && !(p.d_omega > 0.0))
    throw ConfigurationError("correlation: method 'cutoff-mc' requires --d-omega");
  if (is_mc && p.n_traj < 1)
    throw ConfigurationError("correlation: method 'cutoff-mc' requires --n-traj");
  if (!(p.n_th >= 0.0)) throw ConfigurationError("correlation: n-th must be nonnegative");
  if (p.lags.empty()) throw ConfigurationError("correlation: empty lag list");
  for (double lag : p.lags) {
    if (!(lag >= 0.0)) throw ConfigurationError("correlation: lags must be nonnegative");
  }

  std::vector<double> lags = p.lags;
  std::sort(lags.begin(), lags.end());
  lags.erase(std::unique(lags.begin(), lags.end()), lags.end());

  log_stage("correlation: method " + p.method + ", " + std::to_string(lags.size()) + " lags");

  CorrelationSeries series;
  if (p.method == "exact") {
    series.method = "exact";
    series.lags = lags;
    for (double lag : lags) series.values.emplace_back(correlation_exact(p.n_th, lag), 0.0);
  } else if (is_quad) {
    series.method = "cutoff-quad";
    series.lags = lags;
    const QuadratureConfig cfg = quad_config(g);
    series.values.resize(lags.size());
    parallel_for(static_cast<std::int64_t>(lags.size()), g.threads, [&](std::int64_t i) {
      series.values[i] = p.n_th / kTwoPi * integrate_f(lags[i], p.omega_c, p.omega_cap, cfg);
    });
  } else if (is_mc) {
    McCorrelationParams mc;
    mc.omega_cap = p.omega_cap;
    mc.d_omega = p.d_omega;
    mc.n_th = p.n_th;
    mc.n_traj = p.n_traj;
    mc.lags = lags;
    mc.seed = g.seed;
    mc.omega_c = p.omega_c;
    mc.threads = g.threads;
    series = mc_correlation(mc);
  } else {
    series.method = "adiabatic";
    series.lags = lags;
  }

  const fs::path dir = prepare_out_dir(g);
  const fs::path csv_path = dir / "correlation.csv";
  CsvWriter csv(csv_path, {"lag", "real", "imag", "stderr"});
  for (std::size_t i = 0; i < lags.size(); ++i) {
    if (series.method == "adiabatic") {
      // Pointwise values are distributional at zero lag and vanish elsewhere.
      if (lags[i] == 0.0) {
        csv.write_row({csv_number(lags[i]), "", "", ""});
      } else {
        csv.write_row({csv_number(lags[i]), csv_number(0.0), csv_number(0.0), ""});
      }
    } else {
      const std::string se =
          series.std_errors.empty() ? std::string{} : csv_number(series.std_errors[i]);
      csv.write_row({csv_number(lags[i]), csv_number(series.values[i].real()),
                     csv_number(series.values[i].imag()), se});
    }
  }
  csv.close();

  RunManifest m = base_manifest("correlation", g);
  m.params["method"] = p.method;
  m.params["n-th"] = p.n_th;
  m.params["lags"] = lags;
  m.params["omega-c"] = p.omega_c;
  if (is_quad || is_mc) m.params["omega-cap"] = p.omega_cap;
  if (is_mc) {
    m.params["d-omega"] = p.d_omega;
    m.params["n-traj"] = p.n_traj;
  }
  if (series.method == "adiabatic") {
    m.extras["delta_coefficient"] = adiabatic_delta_coefficient(p.n_th);
    m.extras["note"] =
        "adiabatic correlation is distributional: delta_coefficient * delta(lag); "
        "pointwise rows are zero away from lag 0";
  }
  if (!series.warning.empty()) m.extras["warning"] = series.warning;
  m.add_output(csv_path);
  m.write(dir / "correlation_manifest.json");
  log_stage("correlation: wrote " + csv_path.string());
  return 0;
}

// ----------------------------------------------------------------------
// eliminate-compare

struct EliminateCompareParams {
  double gamma = 1.0e-3;
  double n_b = 1.0;
  std::vector<double> g_list{0.01, 0.02, 0.05, 0.1};
};

int run_eliminate_compare(const EliminateCompareParams& p, const GlobalOptions& g) {
  if (p.g_list.empty()) throw ConfigurationError("eliminate-compare: empty g list");
  for (double gc : p.g_list) {
    if (!(gc >= 0.0)) throw ConfigurationError("eliminate-compare: couplings must be nonnegative");
  }
  SystemParams base;
  base.gamma = p.gamma;
  base.n_th_b = p.n_b;
  base.n_th_a = 0.0;
  base.g_coupling = 0.0;
  log_stage("eliminate-compare: sweeping " + std::to_string(p.g_list.size()) + " couplings");
  const ComparisonReport report = compare_eliminated(base, p.g_list);

  const fs::path dir = prepare_out_dir(g);
  const fs::path csv_path = dir / "eliminate_compare.csv";
  CsvWriter csv(csv_path, {"g", "full_occupation", "eliminated_occupation", "rel_error"});
  for (std::size_t i = 0; i < report.g_sweep.size(); ++i) {
    csv.write_row({csv_number(report.g_sweep[i]), csv_number(report.full_occupation[i]),
                   csv_number(report.eliminated_occupation[i]),
                   csv_number(report.relative_error[i])});
  }
  csv.close();

  RunManifest m = base_manifest("eliminate-compare", g);
  m.params["gamma"] = p.gamma;
  m.params["n-b"] = p.n_b;
  m.params["g-list"] = report.g_sweep;
  if (std::isnan(report.fitted_exponent)) {
    m.extras["fitted_exponent"] = nullptr;
  } else {
    m.extras["fitted_exponent"] = report.fitted_exponent;
  }
  m.add_output(csv_path);
  m.write(dir / "eliminate_compare_manifest.json");
  log_stage("eliminate-compare: wrote " + csv_path.string());
  return 0;
}

// ----------------------------------------------------------------------
// residue-check

struct ResidueCheckParams {
  double omega_c = 1.0e3;
  std::vector<double> x_list{5.0e3, 1.0e4, 1.0e5};
  std::vector<double> lags{0.0, 1.0, 2.0, 5.0};
};

int run_residue_check(const ResidueCheckParams& p, const GlobalOptions& g) {
  if (p.x_list.empty()) throw ConfigurationError("residue-check: empty bandwidth list");
  // Validity is a usage condition here: fail before any quadrature runs.
  for (double x : p.x_list) {
    const CutoffSpec spec = CutoffSpec::make(p.omega_c, x);
    if (!spec.residue_bound_valid) {
      throw PreconditionError("residue-check: omega_cap^2 > omega_c^2 + 1/4 violated at omega_cap = " +
                              std::to_string(x));
    }
    if (!spec.d_bound_valid) {
      throw PreconditionError(
          "residue-check: omega_cap^2 - 2 omega_c omega_cap - omega_c^2 - 1/4 > 0 violated at "
          "omega_cap = " + std::to_string(x));
    }
  }

  const QuadratureConfig cfg = quad_config(g);
  std::vector<ResidueReport> reports(p.x_list.size());
  log_stage("residue-check: " + std::to_string(p.x_list.size()) + " bandwidths x " +
            std::to_string(p.lags.size()) + " lags");
  parallel_for(static_cast<std::int64_t>(p.x_list.size()), g.threads, [&](std::int64_t i) {
    reports[i] = residue_check(p.omega_c, p.x_list[i], p.lags, cfg);
  });

  const fs::path dir = prepare_out_dir(g);
  const fs::path csv_path = dir / "residue_check.csv";
  CsvWriter csv(csv_path, {"omega_cap_ratio", "lag", "f_quad_real", "f_quad_imag", "f_leading",
                           "abs_deviation", "s_bound", "pass"});
  bool all_pass = true;
  for (const auto& rep : reports) {
    for (std::size_t j = 0; j < rep.lags.size(); ++j) {
      csv.write_row({csv_number(rep.omega_cap), csv_number(rep.lags[j]),
                     csv_number(rep.f_quadrature[j].real()),
                     csv_number(rep.f_quadrature[j].imag()),
                     csv_number(rep.f_leading_term[j]), csv_number(rep.deviations[j]),
                     csv_number(rep.arc_bound), bool_cell(rep.pass[j])});
      all_pass = all_pass && rep.pass[j];
    }
  }
  csv.close();

  RunManifest m = base_manifest("residue-check", g);
  m.params["omega-c"] = p.omega_c;
  m.params["x-list"] = p.x_list;
  m.params["lags"] = p.lags;
  m.extras["all_pass"] = all_pass;
  m.add_output(csv_path);
  m.write(dir / "residue_check_manifest.json");
  log_stage("residue-check: wrote " + csv_path.string());
  return all_pass ? 0 : 1;
}

// ----------------------------------------------------------------------
// expansion-check

struct ExpansionCheckParams {
  std::string g_kind = "gaussian";
  double width = 100.0;
  double center = 0.0;
  double rate = 0.01;
  double g_scale = 1.0;
  std::vector<double> kappas{1.0, 2.0};
  std::vector<std::int64_t> orders{1, 2};
  double t_eval = 120.0;
};

int run_expansion_check(const ExpansionCheckParams& p, const GlobalOptions& g) {
  TestFunction fun;
  if (p.g_kind == "constant") {
    fun = TestFunction::constant(p.g_scale);
  } else if (p.g_kind == "gaussian") {
    fun = TestFunction::gaussian(p.width, p.center, p.g_scale);
  } else if (p.g_kind == "exponential") {
    fun = TestFunction::exponential(p.rate, p.g_scale);
  } else {
    throw ConfigurationError("expansion-check: g-kind must be constant|gaussian|exponential");
  }
  if (p.kappas.empty() || p.orders.empty())
    throw ConfigurationError("expansion-check: kappas and orders must be nonempty");

  const QuadratureConfig cfg = quad_config(g);
  const fs::path dir = prepare_out_dir(g);
  const fs::path csv_path = dir / "expansion_check.csv";
  CsvWriter csv(csv_path, {"kappa", "order", "t_eval", "convolution", "approximant", "residual"});
  log_stage("expansion-check: " + std::to_string(p.kappas.size() * p.orders.size()) + " rows");
  for (double kappa : p.kappas) {
    for (std::int64_t order : p.orders) {
      const ExpansionCheck check =
          convolution_expansion_check(fun, static_cast<int>(order), p.t_eval, kappa, cfg);
      csv.write_row({csv_number(check.kappa), std::to_string(check.order),
                     csv_number(check.t_eval), csv_number(check.convolution),
                     csv_number(check.approximant), csv_number(check.residual)});
    }
  }
  csv.close();

  RunManifest m = base_manifest("expansion-check", g);
  m.params["g-kind"] = p.g_kind;
  m.params["width"] = p.width;
  m.params["center"] = p.center;
  m.params["rate"] = p.rate;
  m.params["g-scale"] = p.g_scale;
  m.params["kappas"] = p.kappas;
  m.params["orders"] = p.orders;
  m.params["t-eval"] = p.t_eval;
  m.add_output(csv_path);
  m.write(dir / "expansion_check_manifest.json");
  log_stage("expansion-check: wrote " + csv_path.string());
  return 0;
}

// ----------------------------------------------------------------------
// noise-mc

struct NoiseMcParams {
  double omega_c = 1.0e3;
  double omega_cap = 1.0e4;
  double d_omega = 0.25;
  double n_th = 1.0;
  std::int64_t n_traj = 10000;
  std::vector<double> lags{0.0, 0.5, 1.0, 2.0, 5.0};
};

int run_noise_mc(const NoiseMcParams& p, const GlobalOptions& g) {
  McCorrelationParams mc;
  mc.omega_cap = p.omega_cap;
  mc.d_omega = p.d_omega;
  mc.n_th = p.n_th;
  mc.n_traj = p.n_traj;
  mc.lags = p.lags;
  mc.seed = g.seed;
  mc.omega_c = p.omega_c;
  mc.threads = g.threads;
  log_stage("noise-mc: " + std::to_string(p.n_traj) + " trajectories");
  const CorrelationSeries series = mc_correlation(mc);

  const QuadratureConfig cfg = quad_config(g);
  std::vector<std::complex<double>> oracle(series.lags.size());
  log_stage("noise-mc: quadrature oracle");
  parallel_for(static_cast<std::int64_t>(series.lags.size()), g.threads, [&](std::int64_t i) {
    oracle[i] = p.n_th / kTwoPi * integrate_f(series.lags[i], p.omega_c, p.omega_cap, cfg);
  });

  const fs::path dir = prepare_out_dir(g);
  const fs::path csv_path = dir / "noise_mc.csv";
  CsvWriter csv(csv_path, {"lag", "mc_real", "mc_imag", "stderr", "oracle_real", "oracle_imag",
                           "abs_diff", "sigma_distance", "pass"});
  bool all_pass = true;
  for (std::size_t i = 0; i < series.lags.size(); ++i) {
    const double diff = std::abs(series.values[i] - oracle[i]);
    const double se = series.std_errors[i];
    const bool pass = diff <= 3.0 * se;
    all_pass = all_pass && pass;
    csv.write_row({csv_number(series.lags[i]), csv_number(series.values[i].real()),
                   csv_number(series.values[i].imag()), csv_number(se),
                   csv_number(oracle[i].real()), csv_number(oracle[i].imag()), csv_number(diff),
                   se > 0.0 ? csv_number(diff / se) : std::string{}, bool_cell(pass)});
  }
  csv.close();

  RunManifest m = base_manifest("noise-mc", g);
  m.params["omega-c"] = p.omega_c;
  m.params["omega-cap"] = p.omega_cap;
  m.params["d-omega"] = p.d_omega;
  m.params["n-th"] = p.n_th;
  m.params["n-traj"] = p.n_traj;
  m.params["lags"] = series.lags;
  m.extras["all_pass"] = all_pass;
  if (!series.warning.empty()) m.extras["warning"] = series.warning;
  m.add_output(csv_path);
  m.write(dir / "noise_mc_manifest.json");
  log_stage("noise-mc: wrote " + csv_path.string());
  return all_pass ? 0 : 1;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Numerics for adiabatic elimination of a fast-damped cavity mode"};
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--out", g.out_dir, "Output directory")->capture_default_str();
  auto* opt_seed = app.add_option("--seed", g.seed, "Master seed")->capture_default_str();
  auto* opt_rel = app.add_option("--rel-tol", g.rel_tol, "Quadrature relative tolerance")
                      ->capture_default_str();
  auto* opt_threads =
      app.add_option("--threads", g.threads, "Worker threads for sweeps and Monte Carlo")
          ->capture_default_str();
  app.add_option("--config", g.config_file,
                 "JSON file whose keys mirror flags (a manifest works); flags win");
  app.set_version_flag("--version", kVersion);

  SweepCommutatorParams sweep_p;
  auto* sweep = app.add_subcommand("sweep-commutator",
                                   "Cutoff commutator vs bandwidth: closed form and quadrature");
  sweep->fallthrough();
  auto* sw_w = sweep->add_option("--omega-c", sweep_p.omega_c, "Cavity resonance (units of kappa)")
                   ->capture_default_str();
  auto* sw_lo = sweep->add_option("--x-min", sweep_p.x_min, "Lowest Omega/kappa")
                    ->capture_default_str();
  auto* sw_hi = sweep->add_option("--x-max", sweep_p.x_max, "Highest Omega/kappa")
                    ->capture_default_str();
  auto* sw_n = sweep->add_option("--points", sweep_p.points, "Grid points")->capture_default_str();
  auto* sw_s = sweep->add_option("--scale", sweep_p.scale, "linear|log")->capture_default_str();

  DboundSweepParams dbound_p;
  auto* dbound = app.add_subcommand("dbound-sweep",
                                    "Correlation-difference bound vs bandwidth");
  dbound->fallthrough();
  auto* db_w = dbound->add_option("--omega-c", dbound_p.omega_c, "Cavity resonance")
                   ->capture_default_str();
  auto* db_lo = dbound->add_option("--x-min", dbound_p.x_min, "Lowest Omega/kappa")
                    ->capture_default_str();
  auto* db_hi = dbound->add_option("--x-max", dbound_p.x_max, "Highest Omega/kappa")
                    ->capture_default_str();
  auto* db_n = dbound->add_option("--points", dbound_p.points, "Grid points")->capture_default_str();
  auto* db_s = dbound->add_option("--scale", dbound_p.scale, "linear|log")->capture_default_str();

  CorrelationParams corr_p;
  auto* corr = app.add_subcommand("correlation",
                                  "Cavity correlation series: exact, cutoff, or adiabatic");
  corr->fallthrough();
  auto* co_m = corr->add_option("--method", corr_p.method,
                                "exact|cutoff-quad|cutoff-mc|adiabatic");
  auto* co_n = corr->add_option("--n-th", corr_p.n_th, "Bath occupation")->capture_default_str();
  auto* co_l = corr->add_option("--lags", corr_p.lags, "Lag grid (units of 1/kappa)")
                   ->expected(-1)
                   ->capture_default_str();
  auto* co_w = corr->add_option("--omega-c", corr_p.omega_c, "Cavity resonance")
                   ->capture_default_str();
  auto* co_x = corr->add_option("--omega-cap", corr_p.omega_cap, "Cutoff bandwidth");
  auto* co_d = corr->add_option("--d-omega", corr_p.d_omega, "Mode spacing (cutoff-mc)");
  auto* co_t = corr->add_option("--n-traj", corr_p.n_traj, "Trajectories (cutoff-mc)");

  EliminateCompareParams elim_p;
  auto* elim = app.add_subcommand("eliminate-compare",
                                  "Full vs eliminated steady occupation over a coupling sweep");
  elim->fallthrough();
  auto* el_g = elim->add_option("--gamma", elim_p.gamma, "Partner damping")->capture_default_str();
  auto* el_n = elim->add_option("--n-b", elim_p.n_b, "Partner bath occupation")
                   ->capture_default_str();
  auto* el_l = elim->add_option("--g-list", elim_p.g_list, "Couplings G/kappa")
                   ->expected(-1)
                   ->capture_default_str();

  ResidueCheckParams res_p;
  auto* res = app.add_subcommand("residue-check",
                                 "Quadrature vs leading exponential against the arc bound");
  res->fallthrough();
  auto* rc_w = res->add_option("--omega-c", res_p.omega_c, "Cavity resonance")
                   ->capture_default_str();
  auto* rc_x = res->add_option("--x-list", res_p.x_list, "Bandwidths Omega/kappa")
                   ->expected(-1)
                   ->capture_default_str();
  auto* rc_l = res->add_option("--lags", res_p.lags, "Lag grid")->expected(-1)
                   ->capture_default_str();

  ExpansionCheckParams exp_p;
  auto* expc = app.add_subcommand("expansion-check",
                                  "Delta-expansion residuals of the response integral");
  expc->fallthrough();
  auto* ex_k = expc->add_option("--g-kind", exp_p.g_kind, "constant|gaussian|exponential")
                   ->capture_default_str();
  auto* ex_w = expc->add_option("--width", exp_p.width, "Gaussian width")->capture_default_str();
  auto* ex_c = expc->add_option("--center", exp_p.center, "Gaussian center")
                   ->capture_default_str();
  auto* ex_r = expc->add_option("--rate", exp_p.rate, "Exponential rate")->capture_default_str();
  auto* ex_s = expc->add_option("--g-scale", exp_p.g_scale, "Test-function scale")
                   ->capture_default_str();
  auto* ex_ka = expc->add_option("--kappas", exp_p.kappas, "Damping rates to test")
                    ->expected(-1)
                    ->capture_default_str();
  auto* ex_o = expc->add_option("--orders", exp_p.orders, "Expansion orders")
                   ->expected(-1)
                   ->capture_default_str();
  auto* ex_t = expc->add_option("--t-eval", exp_p.t_eval, "Evaluation time")
                   ->capture_default_str();

  NoiseMcParams mc_p;
  auto* mc = app.add_subcommand("noise-mc",
                                "Monte Carlo cutoff correlation against the quadrature oracle");
  mc->fallthrough();
  auto* mc_w = mc->add_option("--omega-c", mc_p.omega_c, "Cavity resonance")->capture_default_str();
  auto* mc_x = mc->add_option("--omega-cap", mc_p.omega_cap, "Cutoff bandwidth")
                   ->capture_default_str();
  auto* mc_d = mc->add_option("--d-omega", mc_p.d_omega, "Mode spacing")->capture_default_str();
  auto* mc_n = mc->add_option("--n-th", mc_p.n_th, "Bath occupation")->capture_default_str();
  auto* mc_t = mc->add_option("--n-traj", mc_p.n_traj, "Trajectories")->capture_default_str();
  auto* mc_l = mc->add_option("--lags", mc_p.lags, "Lag grid")->expected(-1)
                   ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const ConfigLayer config = ConfigLayer::load(g.config_file);
    config.maybe(opt_seed, "seed", g.seed);
    config.maybe(opt_rel, "rel-tol", g.rel_tol);
    config.maybe(opt_threads, "threads", g.threads);
    if (g.threads < 1) throw ConfigurationError("--threads must be >= 1");

    if (sweep->parsed()) {
      config.maybe(sw_w, "omega-c", sweep_p.omega_c);
      config.maybe(sw_lo, "x-min", sweep_p.x_min);
      config.maybe(sw_hi, "x-max", sweep_p.x_max);
      config.maybe(sw_n, "points", sweep_p.points);
      config.maybe(sw_s, "scale", sweep_p.scale);
      return run_sweep_commutator(sweep_p, g);
    }
    if (dbound->parsed()) {
      config.maybe(db_w, "omega-c", dbound_p.omega_c);
      config.maybe(db_lo, "x-min", dbound_p.x_min);
      config.maybe(db_hi, "x-max", dbound_p.x_max);
      config.maybe(db_n, "points", dbound_p.points);
      config.maybe(db_s, "scale", dbound_p.scale);
      return run_dbound_sweep(dbound_p, g);
    }
    if (corr->parsed()) {
      config.maybe(co_m, "method", corr_p.method);
      config.maybe(co_n, "n-th", corr_p.n_th);
      config.maybe(co_l, "lags", corr_p.lags);
      config.maybe(co_w, "omega-c", corr_p.omega_c);
      config.maybe(co_x, "omega-cap", corr_p.omega_cap);
      config.maybe(co_d, "d-omega", corr_p.d_omega);
      config.maybe(co_t, "n-traj", corr_p.n_traj);
      if (corr_p.method.empty())
        throw ConfigurationError("correlation: --method is required");
      return run_correlation(corr_p, g);
    }
    if (elim->parsed()) {
      config.maybe(el_g, "gamma", elim_p.gamma);
      config.maybe(el_n, "n-b", elim_p.n_b);
      config.maybe(el_l, "g-list", elim_p.g_list);
      return run_eliminate_compare(elim_p, g);
    }
    if (res->parsed()) {
      config.maybe(rc_w, "omega-c", res_p.omega_c);
      config.maybe(rc_x, "x-list", res_p.x_list);
      config.maybe(rc_l, "lags", res_p.lags);
      return run_residue_check(res_p, g);
    }
    if (expc->parsed()) {
      config.maybe(ex_k, "g-kind", exp_p.g_kind);
      config.maybe(ex_w, "width", exp_p.width);
      config.maybe(ex_c, "center", exp_p.center);
      config.maybe(ex_r, "rate", exp_p.rate);
      config.maybe(ex_s, "g-scale", exp_p.g_scale);
      config.maybe(ex_ka, "kappas", exp_p.kappas);
      config.maybe(ex_o, "orders", exp_p.orders);
      config.maybe(ex_t, "t-eval", exp_p.t_eval);
      return run_expansion_check(exp_p, g);
    }
    if (mc->parsed()) {
      config.maybe(mc_w, "omega-c", mc_p.omega_c);
      config.maybe(mc_x, "omega-cap", mc_p.omega_cap);
      config.maybe(mc_d, "d-omega", mc_p.d_omega);
      config.maybe(mc_n, "n-th", mc_p.n_th);
      config.maybe(mc_t, "n-traj", mc_p.n_traj);
      config.maybe(mc_l, "lags", mc_p.lags);
      return run_noise_mc(mc_p, g);
    }
    std::cerr << "[adelim] no subcommand given\n";
    return 2;
  } catch (const std::logic_error& e) {
    std::cerr << "[adelim] usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "[adelim] error: " << e.what() << '\n';
    return 1;
  }
}

int run(const std::vector<std::string>& args) {
  std::vector<std::string> full;
  full.reserve(args.size() + 1);
  full.emplace_back("adelim");
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(full.size());
  for (const auto& s : full) argv.push_back(s.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace adelim::cli
