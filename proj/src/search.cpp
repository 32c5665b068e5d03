#include "mtsearch/search.hpp"

#include <cmath>

#include "mtsearch/errors.hpp"
#include "mtsearch/info_density.hpp"
#include "mtsearch/util.hpp"

namespace mtsearch {

namespace {

void check_decode_inputs(const TrajectorySet& candidates, const QueryCodebook& cb,
                         std::span<const double> y_slot) {
  if (candidates.entries.empty()) {
    throw ValidationError("decode: candidate set is empty");
  }
  if (cb.slot_n != candidates.slot_n || cb.M != candidates.M || cb.d != candidates.d ||
      cb.t_begin != candidates.t_begin) {
    throw ValidationError("decode: codebook and candidate set cover different slots");
  }
  if (static_cast<int>(y_slot.size()) != cb.slot_n) {
    throw ValidationError("decode: received sequence length differs from slot length");
  }
}

// Flat cell index of a candidate's cell tuple at step k (0-based).
int64_t entry_flat(const QueryCodebook& cb, const TrajectoryEntry& e, int k) {
  const int64_t cpa = cb.cells_per_axis();
  int64_t flat = 0;
  for (int i = 0; i < cb.d; ++i) {
    flat = flat * cpa + (e.cells[static_cast<std::size_t>(k) * cb.d + i] - 1);
  }
  return flat;
}

}  // namespace

DecodeResult mi_decode(const TrajectorySet& candidates, const QueryCodebook& cb,
                       const ChannelModel& ch, double p, std::span<const double> y_slot) {
  check_decode_inputs(candidates, cb, y_slot);
  const int n = cb.slot_n;
  DecodeResult res;

  if (ch.kind == ChannelKind::Bsc) {
    // With a symmetric binary channel the density score is an affine,
    // strictly decreasing function of the disagreement count, so ranking by
    // the integer count gives the exact argmax (and exact tie handling).
    const double e0 = ch.flip_prob(p);
    const double beta = p + e0 - 2.0 * p * e0;
    std::vector<int> yb(n);
    int ones = 0;
    for (int k = 0; k < n; ++k) {
      yb[k] = y_slot[k] > 0.5 ? 1 : 0;
      ones += yb[k];
    }
    const double marginal = ones * std::log(beta) + (n - ones) * std::log(1.0 - beta);
    if (e0 == 0.5) {
      // Degenerate channel: every codeword scores the same; ties resolve to
      // the lexicographically smallest candidate, which is entry 0.
      res.winner = 0;
      res.score = n * std::log(0.5) - marginal;
      res.margin = candidates.entries.size() > 1 ? 0.0 : HUGE_VAL;
      return res;
    }
    int best = n + 1;
    int second = n + 1;
    std::size_t winner = 0;
    for (std::size_t c = 0; c < candidates.entries.size(); ++c) {
      const TrajectoryEntry& e = candidates.entries[c];
      int dis = 0;
      for (int k = 0; k < n; ++k) {
        const int bit = cb.bit_flat(entry_flat(cb, e, k), cb.t_begin + k) ? 1 : 0;
        dis += bit ^ yb[k];
      }
      if (dis < best) {
        second = best;
        best = dis;
        winner = c;
      } else if (dis < second) {
        second = dis;
      }
    }
    const double unit = std::log(1.0 - e0) - std::log(e0);  // > 0
    res.winner = winner;
    res.score = (n - best) * std::log(1.0 - e0) + best * std::log(e0) - marginal;
    res.margin = second > n ? HUGE_VAL : (second - best) * unit;
    return res;
  }

  // Continuous output: per-step score tables for both codeword bits; each
  // candidate sums the table entries its codeword selects.
  std::vector<double> a0(n);
  std::vector<double> a1(n);
  for (int k = 0; k < n; ++k) {
    a0[k] = info_density(ch, p, p, 0, y_slot[k]);
    a1[k] = info_density(ch, p, p, 1, y_slot[k]);
  }
  double best = -HUGE_VAL;
  double second = -HUGE_VAL;
  std::size_t winner = 0;
  for (std::size_t c = 0; c < candidates.entries.size(); ++c) {
    const TrajectoryEntry& e = candidates.entries[c];
    double score = 0.0;
    for (int k = 0; k < n; ++k) {
      const bool bit = cb.bit_flat(entry_flat(cb, e, k), cb.t_begin + k);
      score += bit ? a1[k] : a0[k];
    }
    if (score > best) {
      second = best;
      best = score;
      winner = c;
    } else if (score > second) {
      second = score;
    }
  }
  res.winner = winner;
  res.score = best;
  res.margin = second == -HUGE_VAL ? HUGE_VAL : best - second;
  return res;
}

DecodeResult nn_decode(const TrajectorySet& candidates, const QueryCodebook& cb,
                       std::span<const double> y_slot) {
  check_decode_inputs(candidates, cb, y_slot);
  const int n = cb.slot_n;
  double best = HUGE_VAL;
  double second = HUGE_VAL;
  std::size_t winner = 0;
  for (std::size_t c = 0; c < candidates.entries.size(); ++c) {
    const TrajectoryEntry& e = candidates.entries[c];
    double dist = 0.0;
    for (int k = 0; k < n; ++k) {
      const double bit = cb.bit_flat(entry_flat(cb, e, k), cb.t_begin + k) ? 1.0 : 0.0;
      const double diff = bit - y_slot[k];
      dist += diff * diff;
    }
    if (dist < best) {
      second = best;
      best = dist;
      winner = c;
    } else if (dist < second) {
      second = dist;
    }
  }
  DecodeResult res;
  res.winner = winner;
  res.score = -best;
  res.margin = second == HUGE_VAL ? HUGE_VAL : second - best;
  return res;
}

TrialContext make_trial_context(const SlotSchedule& sched, int M, double p,
                                const ChannelModel& ch, int resolution_factor, double cap,
                                DecoderKind decoder) {
  sched.validate();
  if (!(p > 0.0 && p < 1.0)) {
    throw ValidationError("trial context: p must lie in (0, 1)");
  }
  TrialContext ctx;
  ctx.sched = sched;
  ctx.M = M;
  ctx.p = p;
  ctx.ch = ch;
  ctx.resolution_factor = resolution_factor;
  ctx.cap = cap;
  ctx.decoder = decoder;
  ctx.first_slot = std::make_shared<const TrajectorySet>(
      enumerate_first_slot(sched, M, resolution_factor, cap));
  return ctx;
}

SearchOutcome run_trial(const TrialContext& ctx, const TargetState& state, uint64_t seed) {
  const SlotSchedule& sched = ctx.sched;
  state.validate(sched);
  if (!ctx.first_slot) {
    throw ValidationError("run_trial: context has no first-slot candidate set");
  }
  const int B = sched.slots();
  const int d = sched.dimension;
  const std::vector<QueryCodebook> books = generate_codebook(sched, ctx.M, ctx.p, seed);

  SearchOutcome out;
  out.delta = static_cast<double>(B + 1) / ctx.M;
  TargetState est;

  for (int j = 1; j <= B; ++j) {
    const QueryCodebook& cb = books[j - 1];
    const int n_slot = cb.slot_n;
    CounterRng noise(rng::derive(seed, rng::kChannelStream, static_cast<uint64_t>(j)));

    // Query, observe through the channel whose state tracks the realized
    // query measure at each step.
    std::vector<double> y(n_slot);
    for (int k = 0; k < n_slot; ++k) {
      const long long t = cb.t_begin + k;
      const std::vector<double> loc = locate_piecewise(state, sched, t);
      const int x = answer_query(cb, loc, t);
      const double q = query_measure(cb, t);
      y[k] = sample_output(ctx.ch, q, x, noise);
    }

    // Decode among this slot's candidates, conditioning on the running
    // estimates from earlier slots (no re-estimation).
    TrajectorySet later;
    const TrajectorySet* candidates = ctx.first_slot.get();
    if (j > 1) {
      later = enumerate_later_slot(est.s, est.v, sched, j, ctx.M, ctx.resolution_factor,
                                   ctx.cap);
      candidates = &later;
    }
    const DecodeResult dec =
        ctx.decoder == DecoderKind::MutualInformation
            ? mi_decode(*candidates, cb, ctx.ch, ctx.p, std::span<const double>(y))
            : nn_decode(*candidates, cb, std::span<const double>(y));
    const TrajectoryEntry& win = candidates->entries[dec.winner];
    if (j == 1) {
      est.s = win.witness_s;
      est.v.clear();
    }
    est.v.push_back(win.witness_v);
    out.slot_scores.push_back(dec.score);
    out.slot_margins.push_back(dec.margin);
  }

  out.estimate = est;
  double worst = 0.0;
  for (long long t = 0; t <= sched.horizon(); ++t) {
    const std::vector<double> truth = locate_piecewise(state, sched, t);
    const std::vector<double> guess = locate_piecewise(est, sched, t);
    for (int i = 0; i < d; ++i) {
      worst = std::fmax(worst, std::fabs(truth[i] - guess[i]));
    }
  }
  out.max_error = worst;
  out.excess = worst > out.delta;
  return out;
}

SearchOutcome run_trial(const SlotSchedule& sched, int M, double p, const ChannelModel& ch,
                        const TargetState& state, uint64_t seed, int resolution_factor,
                        double cap, DecoderKind decoder) {
  return run_trial(make_trial_context(sched, M, p, ch, resolution_factor, cap, decoder), state,
                   seed);
}

}  // namespace mtsearch
