#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mtsearch/bounds.hpp"
#include "mtsearch/channel.hpp"
#include "mtsearch/kinematics.hpp"

namespace mtsearch {

// Resolved run configuration for the CLI. Mirrors the JSON schema; defaults
// reproduce the reference BSC setup (zeta = 0.2, f(q) = 2q + 0.5, d = 1).
struct RunConfig {
  // schedule
  SlotSchedule sched{{20}, 1, 0.05};
  // channel
  ChannelModel channel = ChannelModel::bsc(0.2, SizeFunction{2.0, 0.5});
  // design
  int M = 2;
  bool p_auto = true;          // "auto": smallest capacity maximizer
  double p = 0.5;              // used when p_auto is false; resolved value otherwise
  double eta = 0.1;
  int resolution_factor = 4;
  double enumeration_cap = 1e7;
  // bounds
  double eps = 0.1;
  AchievabilityMode mode = AchievabilityMode::RcuExact;
  double beta = -1.0;   // <= 0: default 1/sqrt(n_B)
  double kappa = -1.0;  // <= 0: default 1/n_B
  int q_grid = 512;
  bool statement_form = false;
  bool printed_phase_form = false;
  double xi_max = 1e-3;
  // capacity
  int capacity_grid = 1001;
  double capacity_refine_tol = 1e-9;
  double capacity_merge_tol = 1e-6;
  // simulation
  long long trials = 1000;
  uint64_t base_seed = 20260816;
  std::string state_mode = "uniform";  // or "adversarial"
  std::vector<TargetState> adversarial_states;
  std::string sweep_axis = "M";  // "M" or "n"
  std::vector<int> sweep_values;  // empty: single point at the design values
  // phase
  std::vector<int> phase_n = {100, 200, 400};
  int phase_rate_points = 41;
  double phase_rate_max_mult = 2.0;  // grid spans [0, mult * C/(2d)]
  // output
  std::string csv_path;
  std::string json_path;

  // Raw resolved JSON (canonical, sorted keys) and its stable hash.
  std::string resolved_json() const;
  std::string config_hash() const;

  // Resolve p:"auto" to the smallest capacity maximizer (idempotent).
  void resolve_auto_p();
  void validate() const;
};

// Parse a config from JSON text (fields may be omitted; defaults fill in),
// then apply --set overrides with dotted paths, e.g. "channel.zeta=0.3".
RunConfig parse_config(const std::string& json_text,
                       const std::vector<std::string>& overrides = {});

// Default config JSON (all defaults, explicit).
std::string default_config_json();

}  // namespace mtsearch
