#include "mtsearch/montecarlo.hpp"

#include <cmath>

#include "mtsearch/errors.hpp"
#include "mtsearch/util.hpp"

namespace mtsearch {

WilsonInterval wilson_interval(long long successes, long long trials, double z) {
  if (trials < 1 || successes < 0 || successes > trials) {
    throw ValidationError("wilson interval: need 0 <= successes <= trials, trials >= 1");
  }
  if (!(z > 0.0)) {
    throw ValidationError("wilson interval: z must be > 0");
  }
  const double n = static_cast<double>(trials);
  const double p_hat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p_hat + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n)) / denom;
  WilsonInterval w;
  w.p_hat = p_hat;
  w.lo = center - half;
  w.hi = center + half;
  w.std_err = half / z;
  return w;
}

uint64_t trial_seed(uint64_t base_seed, long long trial_index) {
  return rng::derive(base_seed, rng::kTrialStream, static_cast<uint64_t>(trial_index));
}

TargetState sample_state(const SlotSchedule& sched, uint64_t base_seed, long long trial_index) {
  CounterRng rng(rng::derive(base_seed, rng::kStateStream, static_cast<uint64_t>(trial_index)));
  const int d = sched.dimension;
  TargetState state;
  state.s.resize(d);
  for (int i = 0; i < d; ++i) {
    state.s[i] = rng.uniform();
  }
  state.v.resize(sched.slots());
  for (int j = 0; j < sched.slots(); ++j) {
    state.v[j].resize(d);
    for (int i = 0; i < d; ++i) {
      state.v[j][i] = rng.uniform(-sched.max_speed, sched.max_speed);
    }
  }
  return state;
}

PointEstimate estimate_excess_probability(const TrialContext& ctx, long long trials,
                                          uint64_t base_seed, StateMode mode,
                                          const std::vector<TargetState>& adversarial,
                                          int threads, bool keep_records) {
  if (trials < 1) {
    throw ValidationError("estimate: trials must be >= 1");
  }
  if (mode == StateMode::Adversarial) {
    if (adversarial.empty()) {
      throw ValidationError("estimate: adversarial mode needs at least one state");
    }
    for (const TargetState& st : adversarial) {
      st.validate(ctx.sched);
    }
  }

  PointEstimate est;
  est.trials = trials;
  est.records.resize(trials);

  // Each trial owns derived substreams for its state, codebook, and noise,
  // so records depend only on the trial index — any thread count, same bytes.
  parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t i) {
    const TargetState state =
        mode == StateMode::Uniform
            ? sample_state(ctx.sched, base_seed, static_cast<long long>(i))
            : adversarial[i % adversarial.size()];
    const uint64_t seed = trial_seed(base_seed, static_cast<long long>(i));
    const SearchOutcome outcome = run_trial(ctx, state, seed);
    TrialRecord& rec = est.records[i];
    rec.seed = seed;
    rec.excess = outcome.excess;
    rec.max_error = outcome.max_error;
    rec.margins = outcome.slot_margins;
  });

  est.excess_count = 0;
  for (const TrialRecord& rec : est.records) {
    if (rec.excess) ++est.excess_count;
  }
  est.ci = wilson_interval(est.excess_count, trials);
  if (!keep_records) {
    est.records.clear();
    est.records.shrink_to_fit();
  }
  return est;
}

}  // namespace mtsearch
