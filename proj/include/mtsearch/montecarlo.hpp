#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mtsearch/search.hpp"

namespace mtsearch {

struct WilsonInterval {
  double p_hat = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double std_err = 0.0;  // half-width / z
};

// Wilson score interval for a binomial proportion (default 95%).
WilsonInterval wilson_interval(long long successes, long long trials, double z = 1.959963984540054);

enum class StateMode { Uniform, Adversarial };

// Per-trial record for the trial-level CSV.
struct TrialRecord {
  uint64_t seed = 0;
  bool excess = false;
  double max_error = 0.0;
  std::vector<double> margins;
};

struct PointEstimate {
  long long trials = 0;
  long long excess_count = 0;
  WilsonInterval ci;
  std::vector<TrialRecord> records;  // index-ordered, deterministic
};

// Excess-resolution probability over derived per-trial seeds. States are
// drawn uniformly per trial from the trial's own substream, or cycled from
// the adversarial list. Deterministic for any thread count.
PointEstimate estimate_excess_probability(const TrialContext& ctx, long long trials,
                                          uint64_t base_seed,
                                          StateMode mode = StateMode::Uniform,
                                          const std::vector<TargetState>& adversarial = {},
                                          int threads = 1, bool keep_records = true);

// Uniform state draw used by the estimator (exposed for tests).
TargetState sample_state(const SlotSchedule& sched, uint64_t base_seed, long long trial_index);

// Per-trial seed derivation (exposed for tests and the trial CSV).
uint64_t trial_seed(uint64_t base_seed, long long trial_index);

}  // namespace mtsearch
