#pragma once

#include <cmath>
#include <cstdint>

namespace mtsearch {

// Counter-based randomness. Every draw is a pure function of a 64-bit key and
// a counter, so individual values are addressable without materializing a
// stream, results are independent of thread scheduling, and distinct keys
// derived from (seed, stream tag, indices...) never share state.

namespace rng {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Fold one word of stream identity into a key.
inline uint64_t chain(uint64_t key, uint64_t word) {
  return splitmix64(key ^ (word + 0x9e3779b97f4a7c15ULL));
}

inline uint64_t derive(uint64_t key, uint64_t tag) { return chain(key, tag); }

inline uint64_t derive(uint64_t key, uint64_t tag, uint64_t a) {
  return chain(chain(key, tag), a);
}

inline uint64_t derive(uint64_t key, uint64_t tag, uint64_t a, uint64_t b) {
  return chain(chain(chain(key, tag), a), b);
}

// Map a hash word to [0, 1) with 53 random bits.
inline double to_unit(uint64_t x) { return static_cast<double>(x >> 11) * 0x1.0p-53; }

// Stream tags separating the independent randomness consumers of a run.
enum StreamTag : uint64_t {
  kTrialStream = 1,     // per-trial subkey derivation
  kCodebookStream = 2,  // query codebook bits, one substream per slot
  kChannelStream = 3,   // channel noise, one substream per slot
  kStateStream = 4,     // random target states
  kTestStream = 5,      // test-local randomness
};

}  // namespace rng

// Sequential counter-mode generator for consumers that need a stream of
// draws (channel noise, state sampling) rather than addressable bits.
class CounterRng {
 public:
  explicit CounterRng(uint64_t key) : key_(key) {}

  uint64_t next_u64() { return rng::chain(key_, counter_++); }

  // Uniform on [0, 1).
  double uniform() { return rng::to_unit(next_u64()); }

  // Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  // Standard normal via Box-Muller; one cached spare per pair.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  uint64_t key_;
  uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace mtsearch
