#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mtsearch/kinematics.hpp"
#include "mtsearch/rng.hpp"

namespace mtsearch {

// One slot's random query codebook: (slot_n*M)^d binary codewords of length
// slot_n, one per cell tuple, each bit i.i.d. Bernoulli(p). Bits are computed
// on demand from (seed, slot, cell, time), so nothing is materialized and any
// single bit is addressable.
struct QueryCodebook {
  uint64_t key = 0;  // derived from (seed, slot index)
  int slot_n = 1;    // codeword length N_j and quantizer n for this slot
  int M = 1;
  int d = 1;
  int t_begin = 1;  // first query time of the slot
  double p = 0.5;

  int64_t cells_per_axis() const { return static_cast<int64_t>(slot_n) * M; }
  int64_t cells_total() const {
    int64_t total = 1;
    for (int i = 0; i < d; ++i) total *= cells_per_axis();
    return total;
  }
  // Flat 0-based index of a 1-based cell tuple.
  int64_t flat_index(std::span<const int32_t> cell_tuple) const;
  // Codeword bit for a cell at absolute time t (t within the slot's range).
  bool bit_flat(int64_t flat_cell, long long t) const;
  bool bit(std::span<const int32_t> cell_tuple, long long t) const;
};

// Codebooks for every slot of the schedule, sharing one seed.
std::vector<QueryCodebook> generate_codebook(const SlotSchedule& sched, int M, double p,
                                             uint64_t seed);

// Measure |A_t| of the query region at time t: active cells / total cells.
double query_measure(const QueryCodebook& cb, long long t);

// True iff max_t |q_t - p| <= eta over the slot's query times.
bool is_typical(const QueryCodebook& cb, double eta);

// Probability bound on atypicality: 4 n exp(-2 (nM)^d eta^2).
double atypicality_bound(int n, int M, int d, double eta);

// Noiseless answer X_t: the codeword bit of the cell containing the location.
int answer_query(const QueryCodebook& cb, std::span<const double> location, long long t);

}  // namespace mtsearch
