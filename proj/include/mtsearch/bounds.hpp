#pragma once

#include <string>
#include <vector>

#include "mtsearch/channel.hpp"
#include "mtsearch/info_density.hpp"
#include "mtsearch/kinematics.hpp"

namespace mtsearch {

// Penalty exponent for one slot of length n with k log-n terms:
//   2 n eta K c(f(p)) - ceil(2 n v_+) min(log p, log(1-p))
//     + d log(2 n v_+ + 3) + k d log n.
// The first term uses the BSC continuity constant; pass eta = 0 to drop it.
double zeta_penalty(const ChannelModel& ch, int n, int k, double p, double v_plus,
                    double eta, int d, double xi_max = 1e-3);

struct TauZetaG {
  double tau = 0.0;
  double zeta_g = 0.0;
};

// AWGN counterpart: tau(p, eta) and zeta_G = zeta + n*(tau - 2 eta K c(f(p)))
// (the continuity term is replaced by n*tau, so no c() is evaluated).
TauZetaG tau_and_zeta_g(const ChannelModel& ch, int n, int k, double p, double v_plus,
                        double eta, int d);

enum class AchievabilityMode { Literal, RcuExact, GaussianApprox };

struct AchievabilityResult {
  AchievabilityMode mode = AchievabilityMode::RcuExact;
  double total = 0.0;
  std::vector<double> per_slot;      // decode-error term per slot
  std::vector<double> atypicality;   // typicality tail per slot
  std::vector<double> truncation;    // AWGN truncation tail per slot (else 0)
  bool vacuous_warning = false;      // literal mode only: min saturated at 1
};

// Upper bound on the excess-resolution probability at delta = (B+1)/M for
// the random-codebook procedure.
//   literal         - displayed union-bound form with E[exp(-iota)] = 1.
//   rcu_exact       - exact E[min{1, e^zeta M^{ed} exp(-iota_n)}] (BSC only).
//   gaussian_approx - Berry-Esseen-corrected normal CDF + 1/n per slot.
AchievabilityResult achievability_bound(const SlotSchedule& sched, int M, double p,
                                        double eta, const ChannelModel& ch,
                                        AchievabilityMode mode);

struct ConverseResult {
  double value = 0.0;   // bound on -(B+1) d log delta
  double q_star = 0.0;  // maximizing constant query measure
  double beta = 0.0;
  double kappa = 0.0;
  bool stationary = false;  // v_+ = 0: velocity-resolution term omitted
};

// Converse on -(B+1) d log delta for epsilon-reliable procedures, evaluated
// over constant-measure i.i.d. query plans with q on a uniform grid.
// Defaults: beta = 1/sqrt(n_B), kappa = 1/n_B (pass <= 0 to use them).
// statement_form swaps the proof's 2(1+4B v_+) d beta for 2(1+4B) d beta.
ConverseResult converse_bound(const SlotSchedule& sched, double eps, const ChannelModel& ch,
                              int q_grid = 512, double beta = -1.0, double kappa = -1.0,
                              bool statement_form = false);

struct RateReport {
  double achievable_neg_log_delta = 0.0;  // best guaranteed -log delta
  double converse_neg_log_delta = 0.0;
  double achievable_rate = 0.0;  // -log delta / n_B
  double converse_rate = 0.0;
  double corollary1_rate = 0.0;    // C / ((B+1) d)
  double cold_restart_rate = 0.0;  // C / (2 (B+1) d)
  double capacity = 0.0;
  std::vector<double> eps_allocation;  // maximizing slot error split
  std::string note;                    // records zeroed O-terms and eta choice
};

// Second-order achievable/converse resolution rates with all O(1)/O(log n)
// remainder terms set to zero and eta = 1/n_B inside the zeta penalties.
RateReport second_order_rates(const SlotSchedule& sched, double eps, const ChannelModel& ch);

struct PhasePoint {
  double rate = 0.0;
  double epsilon_star = 0.0;
};

struct PhaseCurve {
  int n = 0;
  double threshold = 0.0;  // C / (2d)
  std::vector<PhasePoint> points;
};

// Asymptotic excess-resolution probability as a function of the resolution
// decay rate, eps*(r) = Phi((2 d n r - n C) / sqrt(n V_eps)). The printed
// form (factor d instead of 2d) is available behind printed_form.
PhaseCurve phase_curve(int n, int d, const ChannelModel& ch, double eps_for_Veps,
                       const std::vector<double>& rate_grid, bool printed_form = false);

struct GaussianTail {
  double bound = 0.0;       // exp(-n (1 - log 2) / 2)
  double theta_star = 0.0;  // 1 / (4 sigma^2)
};

// Chernoff tail for the mean of n squared N(0, sigma^2) variables exceeding
// 2 sigma^2.
GaussianTail gaussian_tail(int n, double sigma);

// Chernoff exponent I(theta, sigma^2) = 2 theta sigma^2 + 0.5 log(1 - 2 theta sigma^2).
double chernoff_exponent(double theta, double sigma);

}  // namespace mtsearch
