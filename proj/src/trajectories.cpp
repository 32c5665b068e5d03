#include "mtsearch/trajectories.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>
#include <unordered_map>

#include "mtsearch/errors.hpp"
#include "mtsearch/util.hpp"

namespace mtsearch {

namespace {

struct CellsHash {
  std::size_t operator()(const std::vector<int32_t>& cells) const {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (int32_t c : cells) {
      for (int b = 0; b < 4; ++b) {
        h ^= static_cast<unsigned char>(c >> (8 * b));
        h *= 0x100000001b3ULL;
      }
    }
    return static_cast<std::size_t>(h);
  }
};

struct ScalarEntry {
  std::vector<int32_t> cells;
  double s = 0.0;
  double v = 0.0;
};

// Velocity grid with per-axis step 1/count, ascending, with the exact
// interval endpoints +-v_plus appended when they fall off the lattice.
std::vector<double> velocity_grid(double v_plus, long long count) {
  const long long kv = static_cast<long long>(std::floor(snap(v_plus * count)));
  std::vector<double> grid;
  grid.reserve(2 * kv + 3);
  const double edge = static_cast<double>(kv) / count;
  if (v_plus > edge) grid.push_back(-v_plus);
  for (long long k = -kv; k <= kv; ++k) {
    grid.push_back(static_cast<double>(k) / count);
  }
  if (v_plus > edge) grid.push_back(v_plus);
  return grid;
}

// Exact cell-edge crossings for a fixed start. fold(s0 + v*t) meets a grid
// edge e/G only where s0 + v*t = 2k +- e/G, so the realizable patterns are
// constant on the open intervals between these velocities. Sampling every
// crossing plus the midpoint of each gap therefore visits every pattern —
// a guarantee a uniform grid cannot give from a fixed start, where a pattern
// may occupy a sliver narrower than any fixed step.
std::vector<double> edge_crossing_velocities(double s0, int steps, int G, double v_plus) {
  std::vector<double> vs{-v_plus, v_plus};
  for (int tau = 1; tau <= steps; ++tau) {
    const double lo = s0 - v_plus * tau;
    const double hi = s0 + v_plus * tau;
    const long long kmin = static_cast<long long>(std::floor(lo / 2.0)) - 1;
    const long long kmax = static_cast<long long>(std::ceil(hi / 2.0)) + 1;
    for (long long k = kmin; k <= kmax; ++k) {
      for (int e = 0; e <= G; ++e) {
        for (int sign = -1; sign <= 1; sign += 2) {
          const double m = 2.0 * static_cast<double>(k) +
                           static_cast<double>(sign) * static_cast<double>(e) / G;
          if (m < lo || m > hi) continue;
          double v = (m - s0) / tau;
          if (v < -v_plus) v = -v_plus;
          if (v > v_plus) v = v_plus;
          vs.push_back(v);
        }
      }
    }
  }
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  std::vector<double> out;
  out.reserve(2 * vs.size());
  for (std::size_t i = 0; i < vs.size(); ++i) {
    out.push_back(vs[i]);
    if (i + 1 < vs.size()) out.push_back(0.5 * (vs[i] + vs[i + 1]));
  }
  return out;
}

// Deduplicated single-axis trajectories in sweep order (first witness kept).
// Starts ranges over `starts`; each start sweeps every velocity.
std::vector<ScalarEntry> enumerate_scalar(const std::vector<double>& starts,
                                          const std::vector<double>& velocities, int n_quant,
                                          int steps, int M) {
  std::vector<ScalarEntry> entries;
  std::unordered_map<std::vector<int32_t>, std::size_t, CellsHash> seen;
  std::vector<int32_t> scratch(steps);
  for (double s : starts) {
    for (double v : velocities) {
      for (int t = 1; t <= steps; ++t) {
        scratch[t - 1] = static_cast<int32_t>(quantize_cell(locate(s, v, t), n_quant, M));
      }
      if (seen.find(scratch) == seen.end()) {
        seen.emplace(scratch, entries.size());
        entries.push_back({scratch, s, v});
      }
    }
  }
  return entries;
}

// Interleave d single-axis sets into the full set (axes are independent, so
// the multi-axis set is the product), then sort by cell matrix.
TrajectorySet product_set(const std::vector<ScalarEntry>& scalar, int n_quant, int steps, int M,
                          int d, int t_begin) {
  TrajectorySet set;
  set.slot_n = n_quant;
  set.M = M;
  set.d = d;
  set.t_begin = t_begin;

  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= scalar.size();
  set.entries.reserve(total);

  std::vector<std::size_t> idx(d, 0);
  for (std::size_t r = 0; r < total; ++r) {
    TrajectoryEntry entry;
    entry.cells.resize(static_cast<std::size_t>(steps) * d);
    entry.witness_s.resize(d);
    entry.witness_v.resize(d);
    for (int i = 0; i < d; ++i) {
      const ScalarEntry& se = scalar[idx[i]];
      entry.witness_s[i] = se.s;
      entry.witness_v[i] = se.v;
      for (int t = 0; t < steps; ++t) {
        entry.cells[static_cast<std::size_t>(t) * d + i] = se.cells[t];
      }
    }
    set.entries.push_back(std::move(entry));
    for (int i = d - 1; i >= 0; --i) {
      if (++idx[i] < scalar.size()) break;
      idx[i] = 0;
    }
  }
  std::sort(set.entries.begin(), set.entries.end(),
            [](const TrajectoryEntry& a, const TrajectoryEntry& b) { return a.cells < b.cells; });
  return set;
}

void check_enumeration_args(int M, int resolution_factor) {
  if (M < 1) throw ValidationError("enumeration: M must be >= 1");
  if (resolution_factor < 1) throw ValidationError("enumeration: resolution factor must be >= 1");
}

}  // namespace

double first_slot_size_bound(int n1, int M, double v_plus, int d) {
  const double n = n1;
  return std::pow(2.0 * (n * v_plus + 3.0) * n * n * n * n * M * M, d);
}

double later_slot_size_bound(int Nj, int M, double v_plus, int d) {
  const double n = Nj;
  return std::pow((2.0 * n * v_plus + 3.0) * n * n * n * M, d);
}

TrajectorySet enumerate_first_slot(const SlotSchedule& sched, int M, int resolution_factor,
                                   double cap) {
  sched.validate();
  check_enumeration_args(M, resolution_factor);
  const int n1 = sched.ending_time(1);
  const int d = sched.dimension;
  const double bound = first_slot_size_bound(n1, M, sched.max_speed, d);
  if (bound > cap) {
    throw CapExceeded("first-slot enumeration: size bound " + fmt_double(bound) +
                      " exceeds cap " + fmt_double(cap));
  }
  // One grid point per 1/(rf n^2 M): consecutive velocities then move the
  // unreflected position by at most 1/(rf n M) per trajectory, a fraction of
  // a cell, so no quantized pattern between grid points is skipped.
  const long long count = static_cast<long long>(resolution_factor) * n1 * n1 * M;
  std::vector<double> starts;
  starts.reserve(count + 1);
  for (long long k = 0; k <= count; ++k) {
    starts.push_back(static_cast<double>(k) / count);
  }
  const std::vector<double> vels = velocity_grid(sched.max_speed, count);
  return product_set(enumerate_scalar(starts, vels, n1, n1, M), n1, n1, M, d, 1);
}

TrajectorySet enumerate_later_slot(const std::vector<double>& s,
                                   const std::vector<std::vector<double>>& v_prefix,
                                   const SlotSchedule& sched, int j, int M,
                                   int resolution_factor, double cap) {
  sched.validate();
  check_enumeration_args(M, resolution_factor);
  if (j < 2 || j > sched.slots()) {
    throw ValidationError("later-slot enumeration: slot index outside [2, B]");
  }
  const int d = sched.dimension;
  if (static_cast<int>(s.size()) != d) {
    throw ValidationError("later-slot enumeration: start location dimension mismatch");
  }
  if (static_cast<int>(v_prefix.size()) < j - 1) {
    throw ValidationError("later-slot enumeration: prefix must cover slots 1..j-1");
  }
  for (int jj = 0; jj < j - 1; ++jj) {
    if (static_cast<int>(v_prefix[jj].size()) != d) {
      throw ValidationError("later-slot enumeration: prefix velocity dimension mismatch");
    }
  }
  const int Nj = sched.slot_length(j);
  const double bound = later_slot_size_bound(Nj, M, sched.max_speed, d);
  if (bound > cap) {
    throw CapExceeded("later-slot enumeration: size bound " + fmt_double(bound) +
                      " exceeds cap " + fmt_double(cap));
  }
  // Roll the fixed prefix forward to the slot boundary; only the new slot's
  // velocity remains free.
  std::vector<double> pos = s;
  for (int jj = 1; jj < j; ++jj) {
    for (int i = 0; i < d; ++i) {
      pos[i] = locate(pos[i], v_prefix[jj - 1][i], sched.slot_length(jj));
    }
  }
  const long long count = static_cast<long long>(resolution_factor) * Nj * Nj * M;
  const std::vector<double> vels = velocity_grid(sched.max_speed, count);

  // Axes decouple, but each axis has its own fixed start, so build each
  // axis's scalar set separately before taking the product. The uniform grid
  // is augmented with that start's exact cell-edge crossings: with only the
  // velocity free, patterns can occupy slivers a fixed step would skip.
  std::vector<std::vector<ScalarEntry>> per_axis(d);
  for (int i = 0; i < d; ++i) {
    std::vector<double> vels_i = vels;
    const std::vector<double> exact =
        edge_crossing_velocities(pos[i], Nj, Nj * M, sched.max_speed);
    vels_i.insert(vels_i.end(), exact.begin(), exact.end());
    std::sort(vels_i.begin(), vels_i.end());
    vels_i.erase(std::unique(vels_i.begin(), vels_i.end()), vels_i.end());
    per_axis[i] = enumerate_scalar({pos[i]}, vels_i, Nj, Nj, M);
  }
  if (d == 1) {
    return product_set(per_axis[0], Nj, Nj, M, 1, sched.ending_time(j - 1) + 1);
  }
  // Mixed product across distinct per-axis sets.
  TrajectorySet set;
  set.slot_n = Nj;
  set.M = M;
  set.d = d;
  set.t_begin = sched.ending_time(j - 1) + 1;
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= per_axis[i].size();
  set.entries.reserve(total);
  std::vector<std::size_t> idx(d, 0);
  for (std::size_t r = 0; r < total; ++r) {
    TrajectoryEntry entry;
    entry.cells.resize(static_cast<std::size_t>(Nj) * d);
    entry.witness_s.resize(d);
    entry.witness_v.resize(d);
    for (int i = 0; i < d; ++i) {
      const ScalarEntry& se = per_axis[i][idx[i]];
      entry.witness_s[i] = se.s;
      entry.witness_v[i] = se.v;
      for (int t = 0; t < Nj; ++t) {
        entry.cells[static_cast<std::size_t>(t) * d + i] = se.cells[t];
      }
    }
    set.entries.push_back(std::move(entry));
    for (int i = d - 1; i >= 0; --i) {
      if (++idx[i] < per_axis[i].size()) break;
      idx[i] = 0;
    }
  }
  std::sort(set.entries.begin(), set.entries.end(),
            [](const TrajectoryEntry& a, const TrajectoryEntry& b) { return a.cells < b.cells; });
  return set;
}

bool in_velocity_neighborhood(const std::vector<double>& v, const std::vector<double>& v_bar,
                              int n, int M) {
  if (v.size() != v_bar.size()) {
    throw ValidationError("neighborhood: velocity dimension mismatch");
  }
  const double tol = 1.0 / (static_cast<double>(n) * M);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::fabs(v[i] - v_bar[i]) > tol) return false;
  }
  return true;
}

bool in_state_neighborhood(const std::vector<double>& s, const std::vector<double>& v,
                           const std::vector<double>& s_bar, const std::vector<double>& v_bar,
                           int n, int M) {
  if (s.size() != s_bar.size()) {
    throw ValidationError("neighborhood: location dimension mismatch");
  }
  const double tol = 1.0 / M;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (std::fabs(s[i] - s_bar[i]) > tol) return false;
  }
  return in_velocity_neighborhood(v, v_bar, n, M);
}

bool in_velocity_neighborhood_folded(const std::vector<double>& v,
                                     const std::vector<double>& v_bar, int n, int M) {
  if (v.size() != v_bar.size()) {
    throw ValidationError("neighborhood: velocity dimension mismatch");
  }
  const double tol = 1.0 / (static_cast<double>(n) * M);
  for (std::size_t i = 0; i < v.size(); ++i) {
    // either sign can drive the same folded path, depending on the start
    if (std::fabs(v[i] - v_bar[i]) > tol && std::fabs(v[i] + v_bar[i]) > tol) return false;
  }
  return true;
}

bool in_state_neighborhood_folded(const std::vector<double>& s, const std::vector<double>& v,
                                  const std::vector<double>& s_bar,
                                  const std::vector<double>& v_bar, int n, int M) {
  if (s.size() != s_bar.size() || v.size() != v_bar.size() || s.size() != v.size()) {
    throw ValidationError("neighborhood: state dimension mismatch");
  }
  const double s_tol = 1.0 / M;
  const double v_tol = 1.0 / (static_cast<double>(n) * M);
  for (std::size_t i = 0; i < s.size(); ++i) {
    // images of the line s + v t under the fold: itself, the reflection at 0,
    // and the reflection at 1
    const bool plain = std::fabs(s[i] - s_bar[i]) <= s_tol && std::fabs(v[i] - v_bar[i]) <= v_tol;
    const bool lo = std::fabs(-s[i] - s_bar[i]) <= s_tol && std::fabs(v[i] + v_bar[i]) <= v_tol;
    const bool hi =
        std::fabs(2.0 - s[i] - s_bar[i]) <= s_tol && std::fabs(v[i] + v_bar[i]) <= v_tol;
    if (!plain && !lo && !hi) return false;
  }
  return true;
}

int coincidence_count(const std::vector<int32_t>& entry_cells,
                      const std::vector<int32_t>& true_cells, int d) {
  if (entry_cells.size() != true_cells.size() || d < 1) {
    throw ValidationError("coincidence count: cell matrices must have equal shape");
  }
  const int steps = static_cast<int>(entry_cells.size()) / d;
  int count = 0;
  for (int t = 0; t < steps; ++t) {
    bool same = true;
    for (int i = 0; i < d; ++i) {
      if (entry_cells[static_cast<std::size_t>(t) * d + i] !=
          true_cells[static_cast<std::size_t>(t) * d + i]) {
        same = false;
        break;
      }
    }
    if (same) ++count;
  }
  return count;
}

ConfusablePartition confusable_sets(const std::vector<double>& s_true,
                                    const std::vector<double>& v_true,
                                    const std::vector<int32_t>& true_cells,
                                    const TrajectorySet& set, bool use_location, bool folded) {
  ConfusablePartition part;
  for (std::size_t idx = 0; idx < set.entries.size(); ++idx) {
    const TrajectoryEntry& e = set.entries[idx];
    bool close;
    if (use_location) {
      close = folded ? in_state_neighborhood_folded(s_true, v_true, e.witness_s, e.witness_v,
                                                    set.slot_n, set.M)
                     : in_state_neighborhood(s_true, v_true, e.witness_s, e.witness_v, set.slot_n,
                                             set.M);
    } else {
      close = folded ? in_velocity_neighborhood_folded(v_true, e.witness_v, set.slot_n, set.M)
                     : in_velocity_neighborhood(v_true, e.witness_v, set.slot_n, set.M);
    }
    if (close) continue;
    const int l = coincidence_count(e.cells, true_cells, set.d);
    if (l >= static_cast<int>(part.classes.size())) {
      part.classes.resize(l + 1);
    }
    part.classes[l].push_back(idx);
    part.total += 1;
    part.max_coincidences = std::max(part.max_coincidences, l);
  }
  return part;
}

IntersectionReport verify_intersection_bound(const TrajectorySet& set, double v_plus,
                                             bool use_location, bool folded) {
  IntersectionReport rep;
  rep.cap = snap_ceil(2.0 * set.slot_n * v_plus);
  for (const TrajectoryEntry& truth : set.entries) {
    ConfusablePartition part =
        confusable_sets(truth.witness_s, truth.witness_v, truth.cells, set, use_location, folded);
    rep.pairs_checked += part.total;
    rep.max_observed = std::max(rep.max_observed, part.max_coincidences);
  }
  rep.pass = rep.max_observed <= rep.cap;
  return rep;
}

}  // namespace mtsearch
