#pragma once

#include <cmath>

#include "mtsearch/rng.hpp"

namespace mtsearch {

// Affine answer-noise size function f(q) = a*q + b mapping a query's measure
// to the channel state.
struct SizeFunction {
  double a = 2.0;
  double b = 0.5;

  double operator()(double q) const { return a * q + b; }
  double lipschitz() const { return std::fabs(a); }
  // Extremes of f over q in [0,1] (affine, so attained at the endpoints).
  double min_on_unit() const { return std::fmin(b, a + b); }
  double max_on_unit() const { return std::fmax(b, a + b); }
};

enum class ChannelKind { Bsc, Awgn };

// Query-dependent noisy oracle: a BSC whose crossover is zeta*f(q) or an
// AWGN channel with noise standard deviation f(q)*sigma. Construct through
// the factories, which validate the parameter ranges.
struct ChannelModel {
  ChannelKind kind = ChannelKind::Bsc;
  double zeta = 0.2;   // BSC noise scale
  double sigma = 2.0;  // AWGN noise scale
  SizeFunction f;

  static ChannelModel bsc(double zeta, SizeFunction f);
  static ChannelModel awgn(double sigma, SizeFunction f);

  bool discrete() const { return kind == ChannelKind::Bsc; }
  // BSC crossover probability at query measure q.
  double flip_prob(double q) const { return zeta * f(q); }
  // AWGN noise std at query measure q.
  double noise_std(double q) const { return f(q) * sigma; }
};

// Probability (BSC) or density (AWGN) of output y given input bit x when the
// queried region has measure q.
double transition_prob(const ChannelModel& ch, double q, int x, double y);
double log_transition_prob(const ChannelModel& ch, double q, int x, double y);

// One sampled channel output for input bit x at query measure q.
double sample_output(const ChannelModel& ch, double q, int x, CounterRng& rng);

// Smallest mean-value-theorem constant c(u) bounding the per-state log-ratio
// |log P^{u'}(y|z) - log P^{u}(y|z)| <= c(u)*|u'-u| for |u'-u| <= xi_max.
// Defined for the BSC only; the AWGN variant provably violates the bound.
double continuity_constant(const ChannelModel& ch, double u, double xi_max = 1e-3);

}  // namespace mtsearch
