#include "mtsearch/kinematics.hpp"

#include <cmath>
#include <string>

#include "mtsearch/errors.hpp"
#include "mtsearch/util.hpp"

namespace mtsearch {

int SlotSchedule::slot_of(long long t) const {
  if (t < 0 || t > horizon()) {
    throw ValidationError("slot_of: time " + std::to_string(t) + " outside [0, " +
                          std::to_string(horizon()) + "]");
  }
  if (t == 0) return 1;
  for (int j = 1; j <= slots(); ++j) {
    if (t <= ending_time(j)) return j;
  }
  return slots();  // unreachable; t <= horizon() guaranteed above
}

void SlotSchedule::validate() const {
  if (ending_times.empty()) {
    throw ValidationError("schedule: at least one slot ending time is required");
  }
  int prev = 0;
  for (int n : ending_times) {
    if (n <= prev) {
      throw ValidationError("schedule: ending times must be positive and strictly increasing");
    }
    prev = n;
  }
  if (dimension < 1) {
    throw ValidationError("schedule: dimension must be >= 1");
  }
  if (!(max_speed >= 0.0) || !std::isfinite(max_speed)) {
    throw ValidationError("schedule: max speed must be finite and >= 0");
  }
}

void TargetState::validate(const SlotSchedule& sched) const {
  sched.validate();
  const int d = sched.dimension;
  if (static_cast<int>(s.size()) != d) {
    throw ValidationError("state: location must have one coordinate per dimension");
  }
  for (double si : s) {
    if (!(si >= 0.0 && si <= 1.0)) {
      throw ValidationError("state: location coordinates must lie in [0, 1]");
    }
  }
  if (static_cast<int>(v.size()) != sched.slots()) {
    throw ValidationError("state: one velocity row per slot is required");
  }
  const double vp = sched.max_speed;
  for (const auto& row : v) {
    if (static_cast<int>(row.size()) != d) {
      throw ValidationError("state: velocity rows must have one entry per dimension");
    }
    for (double vi : row) {
      if (!(std::fabs(vi) <= vp)) {
        throw ValidationError("state: velocity entries must lie in [-v_+, v_+]");
      }
    }
  }
}

double locate(double s, double v, long long t) {
  // Unfold the reflections: the path in the doubled interval [0, 2) is
  // periodic, and folding its upper half back gives the reflected position.
  double m = std::fmod(s + static_cast<double>(t) * v, 2.0);
  if (m < 0.0) m += 2.0;
  return m <= 1.0 ? m : 2.0 - m;
}

std::vector<double> locate_piecewise(const TargetState& state, const SlotSchedule& sched,
                                     long long t) {
  if (t < 0 || t > sched.horizon()) {
    throw ValidationError("locate_piecewise: time outside [0, n_B]");
  }
  const int d = sched.dimension;
  std::vector<double> pos = state.s;
  if (t == 0) return pos;
  const int j_end = sched.slot_of(t);
  for (int j = 1; j <= j_end; ++j) {
    // Each slot restarts from the previous slot's end position with a fresh
    // velocity; the final slot runs only up to t.
    long long steps = (j == j_end) ? t - sched.ending_time(j - 1)
                                   : static_cast<long long>(sched.slot_length(j));
    for (int i = 0; i < d; ++i) {
      pos[i] = locate(pos[i], state.v[j - 1][i], steps);
    }
  }
  return pos;
}

int64_t quantize_cell(double x, int64_t n, int64_t M) {
  if (n < 1 || M < 1) {
    throw ValidationError("quantize_cell: grid factors must be >= 1");
  }
  const int64_t grid = n * M;
  // Snap before the ceiling so boundary values carrying float noise land in
  // the intended cell; x = 0 belongs to the first cell by convention.
  const double scaled = x * static_cast<double>(grid);
  if (scaled < -kSnapTol) {
    throw ValidationError("quantize_cell: value outside the unit interval");
  }
  int64_t k = snap_ceil(scaled);
  if (k < 1) k = 1;
  if (k > grid) {
    throw ValidationError("quantize_cell: value outside the unit interval");
  }
  return k;
}

std::vector<int32_t> slot_cells(const TargetState& state, const SlotSchedule& sched, int j,
                                int M) {
  if (j < 1 || j > sched.slots()) {
    throw ValidationError("slot_cells: slot index outside [1, B]");
  }
  if (M < 1) {
    throw ValidationError("slot_cells: M must be >= 1");
  }
  const int d = sched.dimension;
  const int n_quant = (j == 1) ? sched.ending_time(1) : sched.slot_length(j);
  const int t_begin = sched.ending_time(j - 1) + 1;
  const int t_end = sched.ending_time(j);
  std::vector<int32_t> cells;
  cells.reserve(static_cast<std::size_t>(t_end - t_begin + 1) * d);
  for (int t = t_begin; t <= t_end; ++t) {
    std::vector<double> pos = locate_piecewise(state, sched, t);
    for (int i = 0; i < d; ++i) {
      cells.push_back(static_cast<int32_t>(quantize_cell(pos[i], n_quant, M)));
    }
  }
  return cells;
}

QuantizedTrajectory quantized_trajectory(const TargetState& state, const SlotSchedule& sched,
                                         int M) {
  state.validate(sched);
  QuantizedTrajectory qt;
  qt.M = M;
  qt.slots.reserve(sched.slots());
  for (int j = 1; j <= sched.slots(); ++j) {
    qt.slots.push_back(slot_cells(state, sched, j, M));
  }
  return qt;
}

}  // namespace mtsearch
