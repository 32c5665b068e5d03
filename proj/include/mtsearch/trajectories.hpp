#pragma once

#include <cstdint>
#include <vector>

#include "mtsearch/kinematics.hpp"

namespace mtsearch {

// One deduplicated quantized trajectory with a generating witness.
struct TrajectoryEntry {
  std::vector<int32_t> cells;     // slot_length x d, time-major
  std::vector<double> witness_s;  // d (first-slot sets) or the fixed prefix start
  std::vector<double> witness_v;  // d, the swept velocity
};

// All quantized trajectories a slot can exhibit, sorted lexicographically by
// cell matrix (the decoder tie order), one witness per entry.
struct TrajectorySet {
  int slot_n = 1;  // quantizer n for this slot (n_1, or N_j for j >= 2)
  int M = 1;
  int d = 1;
  int t_begin = 1;  // first time index covered (1, or n_{j-1}+1)
  std::vector<TrajectoryEntry> entries;

  std::size_t size() const { return entries.size(); }
};

// Counting bounds on the set sizes (may overflow double range only far past
// any enumerable size).
double first_slot_size_bound(int n1, int M, double v_plus, int d);
double later_slot_size_bound(int Nj, int M, double v_plus, int d);

// Enumerate the distinct quantized trajectories w(s, v, [1..n_1]) over a grid
// of (s, v) with per-axis step 1/(resolution_factor * n1^2 * M). Throws
// CapExceeded when the counting bound exceeds cap.
TrajectorySet enumerate_first_slot(const SlotSchedule& sched, int M,
                                   int resolution_factor = 4, double cap = 1e7);

// Enumerate slot-j trajectories conditioned on fixed (s, v^{j-1}); only the
// slot-j velocity is swept. Entries cover times n_{j-1}+1 .. n_j on the
// (N_j M)-per-axis grid.
TrajectorySet enumerate_later_slot(const std::vector<double>& s,
                                   const std::vector<std::vector<double>>& v_prefix,
                                   const SlotSchedule& sched, int j, int M,
                                   int resolution_factor = 4, double cap = 1e7);

// Closed velocity neighborhood: max_i |v_i - v_bar_i| <= 1/(nM).
bool in_velocity_neighborhood(const std::vector<double>& v, const std::vector<double>& v_bar,
                              int n, int M);
// Adds the location condition max_i |s_i - s_bar_i| <= 1/M.
bool in_state_neighborhood(const std::vector<double>& s, const std::vector<double>& v,
                           const std::vector<double>& s_bar, const std::vector<double>& v_bar,
                           int n, int M);

// Reflection-aware variants. The boundary fold maps the line s + v*t onto the
// same trajectory as its wall images (-s, -v) and (2-s, -v), so states that
// are far apart coordinate-wise can still move in lockstep after a bounce
// (e.g. (0, v) and (0, -v) coincide for every t). These test closeness
// against every image per axis; the velocity-only form accepts either sign,
// the worst case over unknown start locations.
bool in_velocity_neighborhood_folded(const std::vector<double>& v,
                                     const std::vector<double>& v_bar, int n, int M);
bool in_state_neighborhood_folded(const std::vector<double>& s, const std::vector<double>& v,
                                  const std::vector<double>& s_bar,
                                  const std::vector<double>& v_bar, int n, int M);

// Number of time points where the entry's cells equal the reference cells.
int coincidence_count(const std::vector<int32_t>& entry_cells,
                      const std::vector<int32_t>& true_cells, int d);

// Confusable entries (witness outside the success neighborhood of the truth),
// partitioned by their coincidence count with the truth's quantized cells.
// For first-slot sets pass the full (s, v) truth, use_location = true; for
// later slots only the velocity condition applies.
struct ConfusablePartition {
  std::vector<std::vector<std::size_t>> classes;  // classes[l] = entry indices with l coincidences
  std::size_t total = 0;                          // |U|
  int max_coincidences = -1;                      // -1 when U is empty
};
// With folded = true the exclusion uses the reflection-aware neighborhoods, so
// wall images of the truth do not count as confusable.
ConfusablePartition confusable_sets(const std::vector<double>& s_true,
                                    const std::vector<double>& v_true,
                                    const std::vector<int32_t>& true_cells,
                                    const TrajectorySet& set, bool use_location,
                                    bool folded = false);

// Scan every (truth witness, confusable entry) pair of the set and report the
// worst coincidence count against the ceil(2 n v_+) cap. The plain coordinate
// neighborhood (folded = false) can fail this cap: a trajectory that bounces
// off a wall inside the window is identical to that of its mirror image, whose
// raw velocity is far away. folded = true removes exactly those images.
struct IntersectionReport {
  int max_observed = -1;
  long long cap = 0;
  bool pass = true;
  std::size_t pairs_checked = 0;
};
IntersectionReport verify_intersection_bound(const TrajectorySet& set, double v_plus,
                                             bool use_location, bool folded = false);

}  // namespace mtsearch
