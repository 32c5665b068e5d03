#include "mtsearch/codebook.hpp"

#include <cmath>

#include "mtsearch/errors.hpp"

namespace mtsearch {

int64_t QueryCodebook::flat_index(std::span<const int32_t> cell_tuple) const {
  if (static_cast<int>(cell_tuple.size()) != d) {
    throw ValidationError("codebook: cell tuple dimension mismatch");
  }
  const int64_t cpa = cells_per_axis();
  int64_t flat = 0;
  for (int i = 0; i < d; ++i) {
    const int64_t c = cell_tuple[i];
    if (c < 1 || c > cpa) {
      throw ValidationError("codebook: cell index outside the grid");
    }
    flat = flat * cpa + (c - 1);
  }
  return flat;
}

bool QueryCodebook::bit_flat(int64_t flat_cell, long long t) const {
  // Each bit is a pure function of (slot key, cell, time); nothing is stored.
  return rng::to_unit(rng::chain(rng::chain(key, static_cast<uint64_t>(flat_cell)),
                                 static_cast<uint64_t>(t))) < p;
}

bool QueryCodebook::bit(std::span<const int32_t> cell_tuple, long long t) const {
  return bit_flat(flat_index(cell_tuple), t);
}

std::vector<QueryCodebook> generate_codebook(const SlotSchedule& sched, int M, double p,
                                             uint64_t seed) {
  sched.validate();
  if (M < 1) throw ValidationError("codebook: M must be >= 1");
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("codebook: p must lie in (0, 1)");
  std::vector<QueryCodebook> books;
  books.reserve(sched.slots());
  for (int j = 1; j <= sched.slots(); ++j) {
    QueryCodebook cb;
    cb.key = rng::derive(seed, rng::kCodebookStream, static_cast<uint64_t>(j));
    cb.slot_n = (j == 1) ? sched.ending_time(1) : sched.slot_length(j);
    cb.M = M;
    cb.d = sched.dimension;
    cb.t_begin = sched.ending_time(j - 1) + 1;
    cb.p = p;
    books.push_back(cb);
  }
  return books;
}

double query_measure(const QueryCodebook& cb, long long t) {
  const int64_t total = cb.cells_total();
  int64_t active = 0;
  for (int64_t c = 0; c < total; ++c) {
    if (cb.bit_flat(c, t)) ++active;
  }
  // All cells have equal volume, so the queried region's measure is the
  // active fraction.
  return static_cast<double>(active) / static_cast<double>(total);
}

bool is_typical(const QueryCodebook& cb, double eta) {
  for (long long t = cb.t_begin; t < cb.t_begin + cb.slot_n; ++t) {
    if (std::fabs(query_measure(cb, t) - cb.p) > eta) return false;
  }
  return true;
}

double atypicality_bound(int n, int M, int d, double eta) {
  if (n < 1 || M < 1 || d < 1) {
    throw ValidationError("atypicality bound: grid parameters must be >= 1");
  }
  if (!(eta >= 0.0)) {
    throw ValidationError("atypicality bound: eta must be >= 0");
  }
  const double cells = std::pow(static_cast<double>(n) * M, d);
  return 4.0 * n * std::exp(-2.0 * cells * eta * eta);
}

int answer_query(const QueryCodebook& cb, std::span<const double> location, long long t) {
  if (static_cast<int>(location.size()) != cb.d) {
    throw ValidationError("answer_query: location dimension mismatch");
  }
  std::vector<int32_t> cell(cb.d);
  for (int i = 0; i < cb.d; ++i) {
    cell[i] = static_cast<int32_t>(quantize_cell(location[i], cb.slot_n, cb.M));
  }
  return cb.bit(cell, t) ? 1 : 0;
}

}  // namespace mtsearch
