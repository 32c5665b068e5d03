#include "mtsearch/config.hpp"

#include <json.hpp>

#include "mtsearch/errors.hpp"
#include "mtsearch/info_density.hpp"
#include "mtsearch/util.hpp"

namespace mtsearch {

namespace {

using nlohmann::json;

json config_to_json(const RunConfig& c) {
  json j;
  j["schedule"]["n"] = c.sched.ending_times;
  j["schedule"]["d"] = c.sched.dimension;
  j["schedule"]["v_plus"] = c.sched.max_speed;
  j["channel"]["type"] = c.channel.kind == ChannelKind::Bsc ? "bsc" : "awgn";
  j["channel"]["zeta"] = c.channel.zeta;
  j["channel"]["sigma"] = c.channel.sigma;
  j["channel"]["f"]["a"] = c.channel.f.a;
  j["channel"]["f"]["b"] = c.channel.f.b;
  if (c.p_auto) {
    j["design"]["p"] = "auto";
  } else {
    j["design"]["p"] = c.p;
  }
  j["design"]["M"] = c.M;
  j["design"]["eta"] = c.eta;
  j["design"]["resolution_factor"] = c.resolution_factor;
  j["design"]["cap"] = c.enumeration_cap;
  j["bounds"]["eps"] = c.eps;
  switch (c.mode) {
    case AchievabilityMode::Literal:
      j["bounds"]["mode"] = "literal";
      break;
    case AchievabilityMode::RcuExact:
      j["bounds"]["mode"] = "rcu_exact";
      break;
    case AchievabilityMode::GaussianApprox:
      j["bounds"]["mode"] = "gaussian_approx";
      break;
  }
  j["bounds"]["beta"] = c.beta;
  j["bounds"]["kappa"] = c.kappa;
  j["bounds"]["q_grid"] = c.q_grid;
  j["bounds"]["statement_form"] = c.statement_form;
  j["bounds"]["printed_phase_form"] = c.printed_phase_form;
  j["bounds"]["xi_max"] = c.xi_max;
  j["capacity"]["grid"] = c.capacity_grid;
  j["capacity"]["refine_tol"] = c.capacity_refine_tol;
  j["capacity"]["merge_tol"] = c.capacity_merge_tol;
  j["simulation"]["trials"] = c.trials;
  j["simulation"]["base_seed"] = c.base_seed;
  j["simulation"]["state_mode"] = c.state_mode;
  json adv = json::array();
  for (const TargetState& st : c.adversarial_states) {
    json e;
    e["s"] = st.s;
    e["v"] = st.v;
    adv.push_back(e);
  }
  j["simulation"]["adversarial_states"] = adv;
  j["simulation"]["sweep_axis"] = c.sweep_axis;
  j["simulation"]["sweep_values"] = c.sweep_values;
  j["phase"]["n"] = c.phase_n;
  j["phase"]["rate_points"] = c.phase_rate_points;
  j["phase"]["rate_max_mult"] = c.phase_rate_max_mult;
  j["output"]["csv_path"] = c.csv_path;
  j["output"]["json_path"] = c.json_path;
  return j;
}

// Overlay user values onto the defaults, object by object; keys that the
// schema does not define are reported rather than silently dropped.
void merge_into(json& base, const json& user, const std::string& path) {
  if (!user.is_object()) {
    throw ValidationError("config: expected an object at '" + (path.empty() ? "." : path) + "'");
  }
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string child = path.empty() ? it.key() : path + "." + it.key();
    if (!base.contains(it.key())) {
      throw ValidationError("config: unknown key '" + child + "'");
    }
    if (base[it.key()].is_object()) {
      merge_into(base[it.key()], it.value(), child);
    } else {
      base[it.key()] = it.value();
    }
  }
}

void set_path(json& base, const std::string& dotted, const json& value) {
  json* node = &base;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = dotted.find('.', start);
    const std::string key = dotted.substr(start, dot - start);
    if (key.empty() || !node->is_object() || !node->contains(key)) {
      throw ValidationError("config: unknown key '" + dotted + "'");
    }
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

double get_num(const json& j, const char* group, const char* key) {
  const json& v = j.at(group).at(key);
  if (!v.is_number()) {
    throw ValidationError(std::string("config: ") + group + "." + key + " must be a number");
  }
  return v.get<double>();
}

long long get_int(const json& j, const char* group, const char* key) {
  const json& v = j.at(group).at(key);
  if (!v.is_number_integer()) {
    throw ValidationError(std::string("config: ") + group + "." + key + " must be an integer");
  }
  return v.get<long long>();
}

bool get_bool(const json& j, const char* group, const char* key) {
  const json& v = j.at(group).at(key);
  if (!v.is_boolean()) {
    throw ValidationError(std::string("config: ") + group + "." + key + " must be a boolean");
  }
  return v.get<bool>();
}

std::string get_str(const json& j, const char* group, const char* key) {
  const json& v = j.at(group).at(key);
  if (!v.is_string()) {
    throw ValidationError(std::string("config: ") + group + "." + key + " must be a string");
  }
  return v.get<std::string>();
}

RunConfig from_json(const json& j) {
  RunConfig c;
  const json& sn = j.at("schedule").at("n");
  c.sched.ending_times.clear();
  if (sn.is_number_integer()) {
    c.sched.ending_times.push_back(sn.get<int>());
  } else if (sn.is_array()) {
    for (const json& e : sn) {
      if (!e.is_number_integer()) {
        throw ValidationError("config: schedule.n entries must be integers");
      }
      c.sched.ending_times.push_back(e.get<int>());
    }
  } else {
    throw ValidationError("config: schedule.n must be an integer or an integer array");
  }
  c.sched.dimension = static_cast<int>(get_int(j, "schedule", "d"));
  c.sched.max_speed = get_num(j, "schedule", "v_plus");

  const std::string type = get_str(j, "channel", "type");
  SizeFunction f{get_num(j.at("channel"), "f", "a"), get_num(j.at("channel"), "f", "b")};
  if (type == "bsc") {
    c.channel = ChannelModel::bsc(get_num(j, "channel", "zeta"), f);
    c.channel.sigma = get_num(j, "channel", "sigma");  // kept for round-tripping
  } else if (type == "awgn") {
    c.channel = ChannelModel::awgn(get_num(j, "channel", "sigma"), f);
    c.channel.zeta = get_num(j, "channel", "zeta");
  } else {
    throw ValidationError("config: channel.type must be 'bsc' or 'awgn'");
  }

  const json& p = j.at("design").at("p");
  if (p.is_string()) {
    if (p.get<std::string>() != "auto") {
      throw ValidationError("config: design.p must be a number or \"auto\"");
    }
    c.p_auto = true;
  } else if (p.is_number()) {
    c.p_auto = false;
    c.p = p.get<double>();
  } else {
    throw ValidationError("config: design.p must be a number or \"auto\"");
  }
  c.M = static_cast<int>(get_int(j, "design", "M"));
  c.eta = get_num(j, "design", "eta");
  c.resolution_factor = static_cast<int>(get_int(j, "design", "resolution_factor"));
  c.enumeration_cap = get_num(j, "design", "cap");

  c.eps = get_num(j, "bounds", "eps");
  const std::string mode = get_str(j, "bounds", "mode");
  if (mode == "literal") {
    c.mode = AchievabilityMode::Literal;
  } else if (mode == "rcu_exact") {
    c.mode = AchievabilityMode::RcuExact;
  } else if (mode == "gaussian_approx") {
    c.mode = AchievabilityMode::GaussianApprox;
  } else {
    throw ValidationError("config: bounds.mode must be literal, rcu_exact, or gaussian_approx");
  }
  c.beta = get_num(j, "bounds", "beta");
  c.kappa = get_num(j, "bounds", "kappa");
  c.q_grid = static_cast<int>(get_int(j, "bounds", "q_grid"));
  c.statement_form = get_bool(j, "bounds", "statement_form");
  c.printed_phase_form = get_bool(j, "bounds", "printed_phase_form");
  c.xi_max = get_num(j, "bounds", "xi_max");

  c.capacity_grid = static_cast<int>(get_int(j, "capacity", "grid"));
  c.capacity_refine_tol = get_num(j, "capacity", "refine_tol");
  c.capacity_merge_tol = get_num(j, "capacity", "merge_tol");

  c.trials = get_int(j, "simulation", "trials");
  c.base_seed = j.at("simulation").at("base_seed").get<uint64_t>();
  c.state_mode = get_str(j, "simulation", "state_mode");
  c.adversarial_states.clear();
  for (const json& e : j.at("simulation").at("adversarial_states")) {
    TargetState st;
    st.s = e.at("s").get<std::vector<double>>();
    st.v = e.at("v").get<std::vector<std::vector<double>>>();
    c.adversarial_states.push_back(std::move(st));
  }
  c.sweep_axis = get_str(j, "simulation", "sweep_axis");
  c.sweep_values = j.at("simulation").at("sweep_values").get<std::vector<int>>();

  c.phase_n = j.at("phase").at("n").get<std::vector<int>>();
  c.phase_rate_points = static_cast<int>(get_int(j, "phase", "rate_points"));
  c.phase_rate_max_mult = get_num(j, "phase", "rate_max_mult");

  c.csv_path = get_str(j, "output", "csv_path");
  c.json_path = get_str(j, "output", "json_path");
  return c;
}

}  // namespace

std::string RunConfig::resolved_json() const { return config_to_json(*this).dump(); }

std::string RunConfig::config_hash() const { return to_hex(fnv1a64(resolved_json())); }

void RunConfig::resolve_auto_p() {
  if (!p_auto) return;
  const CapacityReport rep =
      capacity(channel, capacity_grid, capacity_refine_tol, capacity_merge_tol);
  p = rep.maximizers.front();  // smallest maximizer by construction
}

void RunConfig::validate() const {
  sched.validate();
  if (M < 1) throw ValidationError("config: design.M must be >= 1");
  if (!p_auto && !(p > 0.0 && p < 1.0)) {
    throw ValidationError("config: design.p must lie in (0, 1)");
  }
  if (!(eta >= 0.0)) throw ValidationError("config: design.eta must be >= 0");
  if (resolution_factor < 1) {
    throw ValidationError("config: design.resolution_factor must be >= 1");
  }
  if (!(enumeration_cap > 0.0)) throw ValidationError("config: design.cap must be > 0");
  if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("config: bounds.eps must lie in (0, 1)");
  if (q_grid < 2) throw ValidationError("config: bounds.q_grid must be >= 2");
  if (!(xi_max >= 0.0)) throw ValidationError("config: bounds.xi_max must be >= 0");
  if (capacity_grid < 101) throw ValidationError("config: capacity.grid must be >= 101");
  if (trials < 1) throw ValidationError("config: simulation.trials must be >= 1");
  if (state_mode != "uniform" && state_mode != "adversarial") {
    throw ValidationError("config: simulation.state_mode must be 'uniform' or 'adversarial'");
  }
  if (state_mode == "adversarial") {
    if (adversarial_states.empty()) {
      throw ValidationError("config: adversarial mode needs at least one state");
    }
    for (const TargetState& st : adversarial_states) {
      st.validate(sched);
    }
  }
  if (sweep_axis != "M" && sweep_axis != "n") {
    throw ValidationError("config: simulation.sweep_axis must be 'M' or 'n'");
  }
  for (int v : sweep_values) {
    if (v < 1) throw ValidationError("config: simulation.sweep_values must be >= 1");
  }
  if (phase_n.empty()) throw ValidationError("config: phase.n must be non-empty");
  for (int n : phase_n) {
    if (n < 1) throw ValidationError("config: phase.n entries must be >= 1");
  }
  if (phase_rate_points < 2) throw ValidationError("config: phase.rate_points must be >= 2");
  if (!(phase_rate_max_mult > 0.0)) {
    throw ValidationError("config: phase.rate_max_mult must be > 0");
  }
}

RunConfig parse_config(const std::string& json_text, const std::vector<std::string>& overrides) {
  json merged = config_to_json(RunConfig{});
  if (!json_text.empty()) {
    json user;
    try {
      user = json::parse(json_text);
    } catch (const json::exception& ex) {
      throw ValidationError(std::string("config: invalid JSON: ") + ex.what());
    }
    merge_into(merged, user, "");
  }
  for (const std::string& assignment : overrides) {
    const std::size_t eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ValidationError("config: --set expects key.path=value, got '" + assignment + "'");
    }
    const std::string key = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    json value;
    try {
      value = json::parse(raw);
    } catch (const json::exception&) {
      value = raw;  // bare words (e.g. auto, bsc) are string values
    }
    set_path(merged, key, value);
  }
  try {
    return from_json(merged);
  } catch (const json::exception& ex) {
    throw ValidationError(std::string("config: ") + ex.what());
  }
}

std::string default_config_json() { return config_to_json(RunConfig{}).dump(2); }

}  // namespace mtsearch
