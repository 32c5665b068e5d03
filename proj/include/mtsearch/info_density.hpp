#pragma once

#include <span>
#include <vector>

#include "mtsearch/channel.hpp"

namespace mtsearch {

// Moments of the information density at input bias p and state f(p).
struct MomentReport {
  double p = 0.0;
  double mean = 0.0;              // E[iota], nats
  double variance = 0.0;          // nats^2
  double third_abs_moment = 0.0;  // E|iota - mean|^3, nats^3
};

// Capacity of the query-dependent channel over Bernoulli input biases.
struct CapacityReport {
  double C = 0.0;                  // max_p E[iota_{p,f(p)}], nats
  std::vector<double> maximizers;  // ascending; merged within merge_tol
  double V_eps_low = 0.0;          // min variance over the maximizers
  double V_eps_high = 0.0;         // max variance over the maximizers
};

// Information density iota_{p,f(q)}(x; y) = log P^q(y|x) - log P_Y(y) where
// P_Y is the output law under Bernoulli(p) input at query measure q.
// Zero-probability discrete outputs return -infinity.
double info_density(const ChannelModel& ch, double p, double q, int x, double y);

// Sum of per-symbol information densities at fixed (p, q).
double empirical_info_density(const ChannelModel& ch, double p, double q,
                              std::span<const int> x, std::span<const double> y);

// Mean/variance/third absolute moment of iota_{p,f(p)} under Bernoulli(p)
// input. Discrete channels use exact sums; AWGN uses adaptive quadrature.
MomentReport moments(const ChannelModel& ch, double p, double quad_tol = 1e-9);

// E[exp(-iota_{p,f(q)})] under the generating measure; equals 1 identically.
double exp_neg_info_density_mean(const ChannelModel& ch, double p, double q,
                                 double quad_tol = 1e-9);

// Dense-grid scan plus golden-section refinement of p -> E[iota_{p,f(p)}].
CapacityReport capacity(const ChannelModel& ch, int grid_size = 1001,
                        double refine_tol = 1e-9, double merge_tol = 1e-6);

// V_eps selection: max variance over maximizers when eps <= 0.5, else min.
double dispersion_for_eps(const CapacityReport& report, double eps);

}  // namespace mtsearch
