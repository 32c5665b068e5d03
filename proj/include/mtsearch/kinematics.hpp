#pragma once

#include <cstdint>
#include <vector>

namespace mtsearch {

// Fixed slot schedule: ending times n_1 < ... < n_B, dimension d, max speed.
struct SlotSchedule {
  std::vector<int> ending_times;  // n_1..n_B, strictly increasing, positive
  int dimension = 1;              // d
  double max_speed = 0.0;         // v_+, cube edges per time step

  int slots() const { return static_cast<int>(ending_times.size()); }   // B
  int horizon() const { return ending_times.back(); }                   // n_B
  // n_j with the n_0 = 0 convention; j in [0, B].
  int ending_time(int j) const { return j == 0 ? 0 : ending_times[j - 1]; }
  // N_j = n_j - n_{j-1}; j in [1, B].
  int slot_length(int j) const { return ending_time(j) - ending_time(j - 1); }
  // Slot index j in [1, B] with n_{j-1} < t <= n_j; t = 0 maps to slot 1.
  int slot_of(long long t) const;
  void validate() const;  // throws ValidationError naming the violated invariant
};

// Initial location and per-slot velocities of the target.
struct TargetState {
  std::vector<double> s;               // d entries in [0,1]
  std::vector<std::vector<double>> v;  // B rows of d entries in [-v_+, v_+]

  void validate(const SlotSchedule& sched) const;
};

// Per-slot matrices of quantized cell indices; slot j holds N_j x d entries
// (time-major) on the slot's own (N_j M)-per-axis grid.
struct QuantizedTrajectory {
  int M = 1;
  std::vector<std::vector<int32_t>> slots;
};

// Position at time t of a point starting at s with signed speed v, reflecting
// off the unit interval's endpoints.
double locate(double s, double v, long long t);

// Piecewise-constant-velocity position at integer time t in [0, n_B].
std::vector<double> locate_piecewise(const TargetState& state, const SlotSchedule& sched,
                                     long long t);

// Cell index of x on an n*M-cell grid over [0,1]: ceil(x*n*M), with x=0 -> 1.
int64_t quantize_cell(double x, int64_t n, int64_t M);

// Quantized cells of the state's trajectory, one matrix per slot.
QuantizedTrajectory quantized_trajectory(const TargetState& state, const SlotSchedule& sched,
                                         int M);

// Cells of slot j only (times n_{j-1}+1 .. n_j), time-major, on grid N_j*M.
std::vector<int32_t> slot_cells(const TargetState& state, const SlotSchedule& sched, int j,
                                int M);

}  // namespace mtsearch
