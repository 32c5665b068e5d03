#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mtsearch/bounds.hpp"
#include "mtsearch/channel.hpp"
#include "mtsearch/config.hpp"
#include "mtsearch/errors.hpp"
#include "mtsearch/info_density.hpp"
#include "mtsearch/montecarlo.hpp"
#include "mtsearch/search.hpp"
#include "mtsearch/trajectories.hpp"
#include "mtsearch/util.hpp"
#include "mtsearch/verify.hpp"
#include "mtsearch/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mtsearch;

namespace {

// Resolve an output path: explicit relative paths are joined onto --out;
// empty paths fall back to out_dir/def_name when --out was given (if the
// command has a default file there), else stay empty (meaning stdout).
std::string resolve_path(const std::string& out_dir, const std::string& configured,
                         const char* def_name, bool want_default) {
  if (configured.empty()) {
    if (out_dir.empty() || !want_default) return "";
    return (fs::path(out_dir) / def_name).string();
  }
  fs::path p(configured);
  if (p.is_relative() && !out_dir.empty()) return (fs::path(out_dir) / p).string();
  return configured;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw ValidationError("output: cannot open '" + path + "' for writing");
  f << text;
  std::cout << "wrote " << path << "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("config: cannot read '" + path + "'");
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

// Insert "_trials" before the extension: sweep.csv -> sweep_trials.csv.
std::string trials_path(const std::string& csv_path) {
  fs::path p(csv_path);
  fs::path stem = p.stem();
  stem += "_trials";
  stem += p.extension();
  return (p.parent_path() / stem).string();
}

json capacity_json(const RunConfig& c, const CapacityReport& rep) {
  json out;
  out["tool_version"] = kToolVersion;
  out["config_hash"] = c.config_hash();
  out["capacity_nats"] = rep.C;
  out["maximizers"] = rep.maximizers;
  out["V_eps_low"] = rep.V_eps_low;
  out["V_eps_high"] = rep.V_eps_high;
  json moms = json::array();
  for (double p : rep.maximizers) {
    const MomentReport m = moments(c.channel, p);
    json e;
    e["p"] = m.p;
    e["mean"] = m.mean;
    e["variance"] = m.variance;
    e["third_abs_moment"] = m.third_abs_moment;
    moms.push_back(e);
  }
  out["moments"] = moms;
  return out;
}

int cmd_capacity(RunConfig c, const std::string& out_dir) {
  c.validate();
  const CapacityReport rep =
      capacity(c.channel, c.capacity_grid, c.capacity_refine_tol, c.capacity_merge_tol);
  const std::string target = resolve_path(out_dir, c.json_path, "capacity.json", true);
  write_text(target, capacity_json(c, rep).dump(2) + "\n");
  return 0;
}

int cmd_bounds(RunConfig c, const std::string& out_dir) {
  c.validate();
  c.resolve_auto_p();
  const AchievabilityResult ach =
      achievability_bound(c.sched, c.M, c.p, c.eta, c.channel, c.mode);
  const ConverseResult conv = converse_bound(c.sched, c.eps, c.channel, c.q_grid, c.beta,
                                             c.kappa, c.statement_form);
  const RateReport rates = second_order_rates(c.sched, c.eps, c.channel);
  const int B = c.sched.slots();
  json out;
  out["tool_version"] = kToolVersion;
  out["config_hash"] = c.config_hash();
  out["p"] = c.p;
  out["delta"] = static_cast<double>(B + 1) / c.M;
  json a;
  switch (c.mode) {
    case AchievabilityMode::Literal: a["mode"] = "literal"; break;
    case AchievabilityMode::RcuExact: a["mode"] = "rcu_exact"; break;
    case AchievabilityMode::GaussianApprox: a["mode"] = "gaussian_approx"; break;
  }
  a["total"] = ach.total;
  a["per_slot"] = ach.per_slot;
  a["atypicality"] = ach.atypicality;
  a["truncation"] = ach.truncation;
  a["vacuous_warning"] = ach.vacuous_warning;
  out["achievability"] = a;
  json cv;
  cv["value"] = conv.value;
  cv["q_star"] = conv.q_star;
  cv["beta"] = conv.beta;
  cv["kappa"] = conv.kappa;
  cv["stationary"] = conv.stationary;
  out["converse"] = cv;
  json r;
  r["achievable_neg_log_delta"] = rates.achievable_neg_log_delta;
  r["converse_neg_log_delta"] = rates.converse_neg_log_delta;
  r["achievable_rate"] = rates.achievable_rate;
  r["converse_rate"] = rates.converse_rate;
  r["corollary1_rate"] = rates.corollary1_rate;
  r["cold_restart_rate"] = rates.cold_restart_rate;
  r["capacity"] = rates.capacity;
  r["eps_allocation"] = rates.eps_allocation;
  r["note"] = rates.note;
  out["rates"] = r;
  const std::string target = resolve_path(out_dir, c.json_path, "bounds.json", true);
  write_text(target, out.dump(2) + "\n");
  return 0;
}

int cmd_simulate(RunConfig c, const std::string& out_dir, int threads) {
  c.validate();
  c.resolve_auto_p();
  const std::string hash = c.config_hash();
  const std::string csv_target = resolve_path(out_dir, c.csv_path, "simulate.csv", true);
  const std::string json_target = resolve_path(out_dir, c.json_path, "simulate.json", false);
  const bool want_trials = !csv_target.empty();

  struct Point {
    SlotSchedule sched;
    int M;
  };
  std::vector<Point> points;
  if (c.sweep_values.empty()) {
    points.push_back({c.sched, c.M});
  } else if (c.sweep_axis == "M") {
    for (int v : c.sweep_values) points.push_back({c.sched, v});
  } else {  // "n"
    if (c.sched.slots() != 1) {
      throw ValidationError("simulate: sweeping n needs a single-slot schedule");
    }
    for (int v : c.sweep_values) {
      SlotSchedule s = c.sched;
      s.ending_times = {v};
      points.push_back({s, c.M});
    }
  }

  const StateMode mode =
      c.state_mode == "adversarial" ? StateMode::Adversarial : StateMode::Uniform;
  std::string sweep_csv =
      "point_id,n,M,v_plus,delta,rate,trials,excess_count,p_hat,ci_lo,ci_hi,"
      "bound_rcu,bound_gaussian,config_hash,tool_version\n";
  std::string trials_csv = "point_id,trial_index,seed,excess,max_error";
  const int B = c.sched.slots();
  for (int j = 1; j <= B; ++j) trials_csv += ",margin_" + std::to_string(j);
  trials_csv += ",config_hash,tool_version\n";
  json points_json = json::array();

  for (std::size_t id = 0; id < points.size(); ++id) {
    const Point& pt = points[id];
    const TrialContext ctx = make_trial_context(pt.sched, pt.M, c.p, c.channel,
                                                c.resolution_factor, c.enumeration_cap);
    const PointEstimate est = estimate_excess_probability(
        ctx, c.trials, c.base_seed, mode, c.adversarial_states, threads, want_trials);
    const double delta = static_cast<double>(pt.sched.slots() + 1) / pt.M;
    // + 0.0 turns the -0 that -log(1) produces into a plain 0 for the CSV
    const double rate = -std::log(delta) / pt.sched.horizon() + 0.0;
    double bound_rcu = std::nan("");
    if (c.channel.discrete()) {
      bound_rcu = achievability_bound(pt.sched, pt.M, c.p, c.eta, c.channel,
                                      AchievabilityMode::RcuExact)
                      .total;
    }
    const double bound_gauss = achievability_bound(pt.sched, pt.M, c.p, c.eta, c.channel,
                                                   AchievabilityMode::GaussianApprox)
                                   .total;
    sweep_csv += std::to_string(id) + "," + std::to_string(pt.sched.horizon()) + "," +
                 std::to_string(pt.M) + "," + fmt_double(pt.sched.max_speed) + "," +
                 fmt_double(delta) + "," + fmt_double(rate) + "," +
                 std::to_string(est.trials) + "," + std::to_string(est.excess_count) + "," +
                 fmt_double(est.ci.p_hat) + "," + fmt_double(est.ci.lo) + "," +
                 fmt_double(est.ci.hi) + "," + fmt_double(bound_rcu) + "," +
                 fmt_double(bound_gauss) + "," + hash + "," + kToolVersion + "\n";
    if (want_trials) {
      for (std::size_t i = 0; i < est.records.size(); ++i) {
        const TrialRecord& rec = est.records[i];
        trials_csv += std::to_string(id) + "," + std::to_string(i) + "," +
                      std::to_string(rec.seed) + "," + (rec.excess ? "1" : "0") + "," +
                      fmt_double(rec.max_error);
        for (double mgn : rec.margins) trials_csv += "," + fmt_double(mgn);
        trials_csv += "," + hash + "," + std::string(kToolVersion) + "\n";
      }
    }
    json pj;
    pj["point_id"] = id;
    pj["n"] = pt.sched.horizon();
    pj["M"] = pt.M;
    pj["v_plus"] = pt.sched.max_speed;
    pj["delta"] = delta;
    pj["rate"] = rate;
    pj["trials"] = est.trials;
    pj["excess_count"] = est.excess_count;
    pj["p_hat"] = est.ci.p_hat;
    pj["ci_lo"] = est.ci.lo;
    pj["ci_hi"] = est.ci.hi;
    pj["bound_rcu"] = bound_rcu;        // null when not defined (non-discrete channel)
    pj["bound_gaussian"] = bound_gauss;
    points_json.push_back(pj);
  }

  write_text(csv_target, sweep_csv);
  if (want_trials) write_text(trials_path(csv_target), trials_csv);
  if (!json_target.empty()) {
    json out;
    out["tool_version"] = kToolVersion;
    out["config_hash"] = hash;
    out["points"] = points_json;
    write_text(json_target, out.dump(2) + "\n");
  }
  return 0;
}

int cmd_phase(RunConfig c, const std::string& out_dir, const std::vector<int>& n_override) {
  if (!n_override.empty()) c.phase_n = n_override;
  c.validate();
  const std::string hash = c.config_hash();
  const CapacityReport rep =
      capacity(c.channel, c.capacity_grid, c.capacity_refine_tol, c.capacity_merge_tol);
  const int d = c.sched.dimension;
  const double r_max = c.phase_rate_max_mult * rep.C / (2.0 * d);
  std::vector<double> grid(static_cast<std::size_t>(c.phase_rate_points));
  for (int i = 0; i < c.phase_rate_points; ++i) {
    grid[static_cast<std::size_t>(i)] = r_max * i / (c.phase_rate_points - 1);
  }
  std::string csv = "n,rate,epsilon_star,threshold,config_hash,tool_version\n";
  for (int n : c.phase_n) {
    const PhaseCurve curve = phase_curve(n, d, c.channel, c.eps, grid, c.printed_phase_form);
    for (const PhasePoint& ppt : curve.points) {
      csv += std::to_string(n) + "," + fmt_double(ppt.rate) + "," +
             fmt_double(ppt.epsilon_star) + "," + fmt_double(curve.threshold) + "," + hash +
             "," + kToolVersion + "\n";
    }
  }
  const std::string target = resolve_path(out_dir, c.csv_path, "phase.csv", true);
  write_text(target, csv);
  return 0;
}

int cmd_trajectories(RunConfig c, const std::string& out_dir) {
  c.validate();
  const std::string hash = c.config_hash();
  const TrajectorySet set =
      enumerate_first_slot(c.sched, c.M, c.resolution_factor, c.enumeration_cap);
  const int d = set.d;
  const int len = c.sched.ending_times.front();
  std::string csv = "entry";
  for (int t = 1; t <= len; ++t) {
    for (int k = 1; k <= d; ++k) {
      csv += ",cell_t" + std::to_string(t) + "_x" + std::to_string(k);
    }
  }
  for (int k = 1; k <= d; ++k) csv += ",witness_s_" + std::to_string(k);
  for (int k = 1; k <= d; ++k) csv += ",witness_v_" + std::to_string(k);
  csv += ",config_hash,tool_version\n";
  for (std::size_t i = 0; i < set.size(); ++i) {
    const TrajectoryEntry& e = set.entries[i];
    csv += std::to_string(i);
    for (int32_t cell : e.cells) csv += "," + std::to_string(cell);
    for (double s : e.witness_s) csv += "," + fmt_double(s);
    for (double v : e.witness_v) csv += "," + fmt_double(v);
    csv += "," + hash + "," + std::string(kToolVersion) + "\n";
  }
  const std::string target = resolve_path(out_dir, c.csv_path, "trajectories.csv", true);
  write_text(target, csv);
  return 0;
}

int cmd_verify(RunConfig c, const std::string& out_dir) {
  const VerificationReport report = run_verification(c);
  json checks = json::array();
  for (const CheckResult& chk : report.checks) {
    std::cout << (chk.pass ? "[PASS] " : "[FAIL] ") << chk.name << ": " << chk.detail << "\n";
    json e;
    e["name"] = chk.name;
    e["pass"] = chk.pass;
    e["detail"] = chk.detail;
    checks.push_back(e);
  }
  const std::string target = resolve_path(out_dir, c.json_path, "verify.json", false);
  if (!target.empty()) {
    json out;
    out["tool_version"] = kToolVersion;
    out["config_hash"] = c.config_hash();
    out["all_pass"] = report.all_pass();
    out["checks"] = checks;
    write_text(target, out.dump(2) + "\n");
  }
  return report.all_pass() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Query design, resolution bounds, and Monte Carlo simulation for\n"
               "non-adaptive search of a piecewise-constant-velocity target."};
  app.require_subcommand(1);
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  int threads = 0;
  app.add_option("--config", config_path, "JSON config file (defaults fill missing keys)");
  app.add_option("--set", overrides,
                 "override a config key by dotted path, e.g. --set channel.zeta=0.1")
      ->take_all();
  app.add_option("--threads", threads, "worker threads for simulation (0 = all cores)");
  app.add_option("--out", out_dir, "output directory for generated files");

  CLI::App* sub_capacity =
      app.add_subcommand("capacity", "channel capacity and maximizer moments (JSON)");
  CLI::App* sub_bounds =
      app.add_subcommand("bounds", "achievability/converse bounds and rates (JSON)");
  CLI::App* sub_simulate =
      app.add_subcommand("simulate", "Monte Carlo excess-resolution sweep (CSV)");
  CLI::App* sub_phase =
      app.add_subcommand("phase", "asymptotic phase curves over rate grid (CSV)");
  std::vector<int> phase_n;
  sub_phase->add_option("--n", phase_n, "comma-separated horizon list")->delimiter(',');
  CLI::App* sub_trajectories =
      app.add_subcommand("trajectories", "distinct quantized first-slot trajectories (CSV)");
  CLI::App* sub_verify =
      app.add_subcommand("verify", "internal consistency checks (exit 3 on failure)");
  for (CLI::App* sub : {sub_capacity, sub_bounds, sub_simulate, sub_phase, sub_trajectories,
                        sub_verify}) {
    sub->fallthrough(true);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const std::string text = config_path.empty() ? std::string() : read_file(config_path);
    const RunConfig cfg = parse_config(text, overrides);
    if (sub_capacity->parsed()) return cmd_capacity(cfg, out_dir);
    if (sub_bounds->parsed()) return cmd_bounds(cfg, out_dir);
    if (sub_simulate->parsed()) return cmd_simulate(cfg, out_dir, threads);
    if (sub_phase->parsed()) return cmd_phase(cfg, out_dir, phase_n);
    if (sub_trajectories->parsed()) return cmd_trajectories(cfg, out_dir);
    if (sub_verify->parsed()) return cmd_verify(cfg, out_dir);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
