#pragma once

#include <memory>
#include <span>
#include <vector>

#include "mtsearch/channel.hpp"
#include "mtsearch/codebook.hpp"
#include "mtsearch/trajectories.hpp"

namespace mtsearch {

enum class DecoderKind { MutualInformation, NearestNeighbor };

// Winner of a slot decode. margin = winner's score minus the runner-up's
// (in the decoder's own score units; +inf for a single candidate).
struct DecodeResult {
  std::size_t winner = 0;
  double score = 0.0;
  double margin = 0.0;
};

// Argmax of the empirical information density at (p, f(p)) along each
// candidate's codeword sequence; ties go to the lexicographically smallest
// cell matrix (entries are stored in that order).
DecodeResult mi_decode(const TrajectorySet& candidates, const QueryCodebook& cb,
                       const ChannelModel& ch, double p, std::span<const double> y_slot);

// Argmin of the squared L2 distance between candidate codeword sequence and
// the received sequence; same tie rule.
DecodeResult nn_decode(const TrajectorySet& candidates, const QueryCodebook& cb,
                       std::span<const double> y_slot);

// Result of one full search trial.
struct SearchOutcome {
  TargetState estimate;
  double max_error = 0.0;  // max over t in [0, n_B] of L-inf location error
  double delta = 0.0;      // resolution level (B+1)/M
  bool excess = false;     // max_error > delta
  std::vector<double> slot_scores;   // winning decode score per slot
  std::vector<double> slot_margins;  // decode margin per slot
};

// Shared per-config state for trials: the first-slot candidate set is
// enumerated once and reused across every trial.
struct TrialContext {
  SlotSchedule sched;
  int M = 1;
  double p = 0.5;
  ChannelModel ch;
  int resolution_factor = 4;
  double cap = 1e7;
  DecoderKind decoder = DecoderKind::MutualInformation;
  std::shared_ptr<const TrajectorySet> first_slot;
};

TrialContext make_trial_context(const SlotSchedule& sched, int M, double p,
                                const ChannelModel& ch, int resolution_factor = 4,
                                double cap = 1e7,
                                DecoderKind decoder = DecoderKind::MutualInformation);

// One end-to-end trial of the non-adaptive query procedure: per slot, query
// with the seeded codebook, pass answers through the channel, decode among
// the slot's candidate trajectories, and accumulate (s_hat, v_hat); then
// evaluate the L-inf trajectory error at every t in [0, n_B].
SearchOutcome run_trial(const TrialContext& ctx, const TargetState& state, uint64_t seed);

// Convenience overload that builds the context on the fly.
SearchOutcome run_trial(const SlotSchedule& sched, int M, double p, const ChannelModel& ch,
                        const TargetState& state, uint64_t seed,
                        int resolution_factor = 4, double cap = 1e7,
                        DecoderKind decoder = DecoderKind::MutualInformation);

}  // namespace mtsearch
