#include "mtsearch/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "mtsearch/codebook.hpp"
#include "mtsearch/errors.hpp"
#include "mtsearch/util.hpp"

namespace mtsearch {

namespace {

constexpr double kHalfOneMinusLogTwo = 0.15342640972002733;  // (1 - log 2) / 2

void check_bias_open(double p, const char* who) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ValidationError(std::string(who) + ": p must lie in (0, 1)");
  }
}

// Per-slot shape of the achievability bound: slot 1 resolves both location
// and velocity (codebook exponent 2d, four log-n terms); later slots resolve
// velocity only (exponent d, three log-n terms).
struct SlotShape {
  int n = 1;          // slot length (n_1 or N_j)
  int k = 3;          // log-n multiplicity inside the penalty
  int m_exponent = 1; // codebook-size exponent multiplier (2 for slot 1)
};

std::vector<SlotShape> slot_shapes(const SlotSchedule& sched) {
  std::vector<SlotShape> shapes;
  shapes.reserve(sched.slots());
  for (int j = 1; j <= sched.slots(); ++j) {
    SlotShape sh;
    sh.n = (j == 1) ? sched.ending_time(1) : sched.slot_length(j);
    sh.k = (j == 1) ? 4 : 3;
    sh.m_exponent = (j == 1) ? 2 : 1;
    shapes.push_back(sh);
  }
  return shapes;
}

double slot_penalty(const ChannelModel& ch, const SlotShape& sh, double p, double v_plus,
                    double eta, int d) {
  if (ch.kind == ChannelKind::Bsc) {
    return zeta_penalty(ch, sh.n, sh.k, p, v_plus, eta, d);
  }
  return tau_and_zeta_g(ch, sh.n, sh.k, p, v_plus, eta, d).zeta_g;
}

// Exact decode-error term of the random-coding union bound for a binary
// channel: E[min{1, exp(offset - iota_n)}], enumerated over the joint law of
// (disagreement count, output weight); the inner loop convolves the four
// (input, output) category counts.
double rcu_slot_exact(const ChannelModel& ch, int n, double p, double offset) {
  const double e0 = ch.flip_prob(p);
  const double beta = p + e0 - 2.0 * p * e0;
  const double lp = std::log(p);
  const double l1p = std::log(1.0 - p);
  const double le = std::log(e0);
  const double l1e = std::log(1.0 - e0);
  const double lb = std::log(beta);
  const double l1b = std::log(1.0 - beta);
  std::vector<double> lf(n + 1);
  for (int i = 0; i <= n; ++i) lf[i] = std::lgamma(i + 1.0);

  double total = 0.0;
  for (int dis = 0; dis <= n; ++dis) {
    for (int m = 0; m <= n; ++m) {
      // iota_n depends on (dis, m) only; min with 1 applied in the log domain.
      const double iota_n = (n - dis) * l1e + dis * le - m * lb - (n - m) * l1b;
      const double expo = offset - iota_n;
      const double val = expo >= 0.0 ? 1.0 : std::exp(expo);
      // P(dis, m): split by c01 = #{x=0, y=1} (flipped zeros).
      double mass = 0.0;
      const int c01_lo = std::max(0, dis + m - n);
      const int c01_hi = std::min(dis, m);
      for (int c01 = c01_lo; c01 <= c01_hi; ++c01) {
        const int c11 = m - c01;        // kept ones
        const int c00 = dis - c01;      // flipped ones
        const int c10 = n - dis - m + c01;  // kept zeros
        const double lmass = lf[n] - lf[c11] - lf[c10] - lf[c01] - lf[c00] +
                             c11 * (lp + l1e) + c10 * (l1p + l1e) + c01 * (l1p + le) +
                             c00 * (lp + le);
        mass += std::exp(lmass);
      }
      total += mass * val;
    }
  }
  return total;
}

}  // namespace

double zeta_penalty(const ChannelModel& ch, int n, int k, double p, double v_plus, double eta,
                    int d, double xi_max) {
  check_bias_open(p, "penalty");
  if (n < 1 || k < 0 || d < 1) {
    throw ValidationError("penalty: n and d must be >= 1 and k >= 0");
  }
  if (!(v_plus >= 0.0) || !(eta >= 0.0)) {
    throw ValidationError("penalty: v_+ and eta must be >= 0");
  }
  double continuity_term = 0.0;
  if (eta > 0.0) {
    const double K = ch.f.lipschitz();
    continuity_term = 2.0 * n * eta * K * continuity_constant(ch, ch.f(p), xi_max);
  }
  const double velocity_term =
      -static_cast<double>(snap_ceil(2.0 * n * v_plus)) * std::fmin(std::log(p), std::log(1.0 - p));
  const double cardinality_term = d * std::log(2.0 * n * v_plus + 3.0);
  const double resolution_term = k * d * std::log(static_cast<double>(n));
  return continuity_term + velocity_term + cardinality_term + resolution_term;
}

TauZetaG tau_and_zeta_g(const ChannelModel& ch, int n, int k, double p, double v_plus,
                        double eta, int d) {
  check_bias_open(p, "penalty");
  const double u = ch.f(p);
  const double ke = ch.f.lipschitz() * eta;
  const double denom = u * u - 2.0 * ke * (u - ke);
  if (!(denom > 0.0)) {
    throw ValidationError("penalty: eta too large for the size function's range");
  }
  TauZetaG out;
  out.tau = 2.0 * (ke * (u + ke)) * (u * u + 4.0 * ke * (u + ke)) / (u * u * denom);
  // The continuity term of the binary-channel penalty is replaced by n*tau,
  // so assemble the remaining terms with eta = 0 and add n*tau.
  out.zeta_g = zeta_penalty(ch, n, k, p, v_plus, 0.0, d) + n * out.tau;
  return out;
}

AchievabilityResult achievability_bound(const SlotSchedule& sched, int M, double p, double eta,
                                        const ChannelModel& ch, AchievabilityMode mode) {
  sched.validate();
  check_bias_open(p, "achievability");
  if (M < 1) throw ValidationError("achievability: M must be >= 1");
  if (!(eta >= 0.0)) throw ValidationError("achievability: eta must be >= 0");
  if (mode == AchievabilityMode::RcuExact && ch.kind != ChannelKind::Bsc) {
    throw ValidationError("achievability: exact union-bound mode needs a discrete channel");
  }

  const int d = sched.dimension;
  const double log_m = std::log(static_cast<double>(M));
  const std::vector<SlotShape> shapes = slot_shapes(sched);

  AchievabilityResult res;
  res.mode = mode;

  MomentReport mom;
  if (mode == AchievabilityMode::GaussianApprox) {
    mom = moments(ch, p);
  }

  for (const SlotShape& sh : shapes) {
    const double zeta_j = slot_penalty(ch, sh, p, sched.max_speed, eta, d);
    const double offset = zeta_j + sh.m_exponent * d * log_m;
    double decode_term = 0.0;
    switch (mode) {
      case AchievabilityMode::Literal:
        // Displayed union-bound form with the unit mean substituted; the min
        // saturating at 1 makes the term vacuous.
        decode_term = std::fmin(1.0, std::exp(offset));
        if (decode_term >= 1.0) res.vacuous_warning = true;
        break;
      case AchievabilityMode::RcuExact:
        decode_term = rcu_slot_exact(ch, sh.n, p, offset);
        break;
      case AchievabilityMode::GaussianApprox: {
        const double threshold = offset + std::log(static_cast<double>(sh.n));
        const double spread = std::sqrt(sh.n * mom.variance);
        const double arg = (threshold - sh.n * mom.mean) / spread;
        const double berry_esseen =
            6.0 * mom.third_abs_moment /
            std::sqrt(static_cast<double>(sh.n) * mom.variance * mom.variance * mom.variance);
        decode_term = norm_cdf(arg) + berry_esseen + 1.0 / sh.n;
        break;
      }
    }
    res.per_slot.push_back(decode_term);
    res.atypicality.push_back(atypicality_bound(sh.n, M, d, eta));
    res.truncation.push_back(
        ch.kind == ChannelKind::Awgn ? std::exp(-sh.n * kHalfOneMinusLogTwo) : 0.0);
  }

  res.total = 0.0;
  for (std::size_t j = 0; j < res.per_slot.size(); ++j) {
    res.total += res.per_slot[j] + res.atypicality[j] + res.truncation[j];
  }
  return res;
}

ConverseResult converse_bound(const SlotSchedule& sched, double eps, const ChannelModel& ch,
                              int q_grid, double beta, double kappa, bool statement_form) {
  sched.validate();
  if (!(eps > 0.0 && eps < 1.0)) {
    throw ValidationError("converse: eps must lie in (0, 1)");
  }
  if (q_grid < 2) {
    throw ValidationError("converse: q grid needs at least 2 points");
  }
  const int B = sched.slots();
  const int d = sched.dimension;
  const double n_b = sched.horizon();
  const double v_plus = sched.max_speed;

  ConverseResult res;
  res.beta = beta > 0.0 ? beta : 1.0 / std::sqrt(n_b);
  res.kappa = kappa > 0.0 ? kappa : 1.0 / n_b;
  res.stationary = v_plus == 0.0;
  if (!(res.beta < (1.0 - eps) / 2.0)) {
    throw ValidationError("converse: beta must lie in (0, (1-eps)/2)");
  }
  const double speed_factor = statement_form ? 1.0 : v_plus;
  const double slack = 2.0 * (1.0 + 4.0 * B * speed_factor) * d * res.beta;
  if (!(res.kappa < 1.0 - eps - slack)) {
    throw ValidationError("converse: kappa must lie in (0, 1 - eps - 2(1+4Bv)d beta)");
  }
  const double base = eps + slack + res.kappa;

  // Quantile of the query-measure-q information-density sum, with the
  // Berry-Esseen slack folded into the quantile argument; maximize over a
  // uniform grid of constant-measure plans.
  double best = -HUGE_VAL;
  for (int i = 1; i <= q_grid; ++i) {
    const double q = static_cast<double>(i) / (q_grid + 1.0);
    const MomentReport mom = moments(ch, q);
    double r;
    if (mom.variance <= 0.0) {
      r = n_b * mom.mean;
    } else {
      const double arg =
          base + 6.0 * mom.third_abs_moment /
                     std::sqrt(n_b * mom.variance * mom.variance * mom.variance);
      if (!(arg > 0.0 && arg < 1.0)) {
        // The normal-quantile evaluation degenerates at extreme measures
        // (variance shrinks faster than the third moment); those q cannot
        // attain the max, so they are skipped rather than fatal.
        continue;
      }
      r = n_b * mom.mean + std::sqrt(n_b * mom.variance) * norm_ppf(arg);
    }
    if (r > best) {
      best = r;
      res.q_star = q;
    }
  }

  if (best == -HUGE_VAL) {
    throw ValidationError(
        "converse: quantile argument outside (0, 1) at every grid measure; "
        "increase the horizon or eps");
  }
  double value = best - (B + 1) * d * std::log(res.beta) - std::log(res.kappa);
  if (!res.stationary) {
    for (int j = 1; j <= B; ++j) {
      value -= std::log(2.0 * sched.slot_length(j) * v_plus);
    }
  }
  res.value = value;
  return res;
}

RateReport second_order_rates(const SlotSchedule& sched, double eps, const ChannelModel& ch) {
  sched.validate();
  if (!(eps > 0.0 && eps < 1.0)) {
    throw ValidationError("second-order rates: eps must lie in (0, 1)");
  }
  const int B = sched.slots();
  const int d = sched.dimension;
  const double n_b = sched.horizon();
  // Typicality width shrinks with the horizon so the penalty's continuity
  // term stays o(n); any 1/n <= eta <= log(n)/n choice works at first order.
  const double eta = 1.0 / n_b;

  const CapacityReport cap = capacity(ch);
  const double C = cap.C;
  const double p = cap.maximizers.front();
  const std::vector<SlotShape> shapes = slot_shapes(sched);

  std::vector<double> penalties;
  penalties.reserve(B);
  for (const SlotShape& sh : shapes) {
    penalties.push_back(slot_penalty(ch, sh, p, sched.max_speed, eta, d));
  }

  // Per-slot guaranteed exponent at slot error eps_j; slot 1 pays for both
  // location and velocity, so its term is halved.
  auto slot_term = [&](int j, double eps_j) {
    const SlotShape& sh = shapes[j];
    const double v_eps = dispersion_for_eps(cap, eps_j);
    const double raw = sh.n * C + std::sqrt(sh.n * v_eps) * norm_ppf(eps_j) - penalties[j] -
                       std::log(static_cast<double>(sh.n));
    return j == 0 ? raw / 2.0 : raw;
  };
  auto objective = [&](const std::vector<double>& alloc) {
    double worst = HUGE_VAL;
    for (int j = 0; j < B; ++j) {
      worst = std::fmin(worst, slot_term(j, alloc[j]));
    }
    return worst;
  };

  std::vector<double> alloc(B, eps / B);
  if (B == 1) {
    alloc[0] = eps;
  } else {
    // Simplex grid over the split weights (step 0.01), then a few rounds of
    // per-coordinate golden refinement around the best grid point.
    const int steps = 100;
    std::vector<int> w(B - 1, 0);
    std::vector<double> cand(B);
    double best = -HUGE_VAL;
    std::function<void(int, int)> sweep = [&](int pos, int remaining) {
      if (pos == B - 1) {
        if (remaining < 1) return;
        double used = 0.0;
        for (int j = 0; j < B - 1; ++j) {
          cand[j] = eps * w[j] / steps;
          used += cand[j];
        }
        cand[B - 1] = eps - used;
        const double val = objective(cand);
        if (val > best) {
          best = val;
          alloc = cand;
        }
        return;
      }
      for (int s = 1; s <= remaining - (B - 1 - pos); ++s) {
        w[pos] = s;
        sweep(pos + 1, remaining - s);
      }
    };
    sweep(0, steps);

    const double invphi = 0.6180339887498949;
    for (int round = 0; round < 3; ++round) {
      for (int jj = 0; jj < B - 1; ++jj) {
        const double width = eps / steps;
        double lo = std::max(1e-9 * eps, alloc[jj] - width);
        double hi = alloc[jj] + width;
        auto eval = [&](double x) {
          std::vector<double> a = alloc;
          const double shift = x - a[jj];
          if (a[B - 1] - shift <= 0.0) return -HUGE_VAL;
          a[jj] = x;
          a[B - 1] -= shift;  // keep the total split equal to eps
          return objective(a);
        };
        double c = hi - invphi * (hi - lo);
        double dd = lo + invphi * (hi - lo);
        double fc = eval(c);
        double fd = eval(dd);
        while (hi - lo > 1e-12) {
          if (fc > fd) {
            hi = dd;
            dd = c;
            fd = fc;
            c = hi - invphi * (hi - lo);
            fc = eval(c);
          } else {
            lo = c;
            c = dd;
            fc = fd;
            dd = lo + invphi * (hi - lo);
            fd = eval(dd);
          }
        }
        const double x = 0.5 * (lo + hi);
        const double shift = x - alloc[jj];
        if (alloc[B - 1] - shift > 0.0) {
          alloc[jj] = x;
          alloc[B - 1] -= shift;
        }
      }
    }
  }

  RateReport rep;
  rep.capacity = C;
  rep.eps_allocation = alloc;
  rep.achievable_neg_log_delta = (objective(alloc) - d * std::log(B + 1.0)) / d;
  rep.converse_neg_log_delta =
      (n_b * C + std::sqrt(n_b * dispersion_for_eps(cap, eps)) * norm_ppf(eps)) /
      ((B + 1.0) * d);
  rep.achievable_rate = rep.achievable_neg_log_delta / n_b;
  rep.converse_rate = rep.converse_neg_log_delta / n_b;
  rep.corollary1_rate = C / ((B + 1.0) * d);
  rep.cold_restart_rate = rep.corollary1_rate / 2.0;
  rep.note = "remainder O(1)/O(log) terms zeroed; typicality eta = 1/n_B; bias p = " +
             fmt_double(p);
  return rep;
}

PhaseCurve phase_curve(int n, int d, const ChannelModel& ch, double eps_for_Veps,
                       const std::vector<double>& rate_grid, bool printed_form) {
  if (n < 1 || d < 1) {
    throw ValidationError("phase curve: n and d must be >= 1");
  }
  const CapacityReport cap = capacity(ch);
  const double v_eps = dispersion_for_eps(cap, eps_for_Veps);
  PhaseCurve curve;
  curve.n = n;
  curve.threshold = cap.C / (2.0 * d);
  const double factor = printed_form ? d : 2.0 * d;
  const double spread = std::sqrt(n * v_eps);
  for (double r : rate_grid) {
    PhasePoint pt;
    pt.rate = r;
    pt.epsilon_star = norm_cdf((factor * n * r - n * cap.C) / spread);
    curve.points.push_back(pt);
  }
  return curve;
}

GaussianTail gaussian_tail(int n, double sigma) {
  if (n < 1) throw ValidationError("gaussian tail: n must be >= 1");
  if (!(sigma > 0.0)) throw ValidationError("gaussian tail: sigma must be > 0");
  GaussianTail out;
  out.bound = std::exp(-n * kHalfOneMinusLogTwo);
  out.theta_star = 1.0 / (4.0 * sigma * sigma);
  return out;
}

double chernoff_exponent(double theta, double sigma) {
  if (!(sigma > 0.0)) throw ValidationError("chernoff exponent: sigma must be > 0");
  const double arg = 1.0 - 2.0 * theta * sigma * sigma;
  if (!(arg > 0.0)) {
    throw ValidationError("chernoff exponent: theta must stay below 1/(2 sigma^2)");
  }
  return 2.0 * theta * sigma * sigma + 0.5 * std::log(arg);
}

}  // namespace mtsearch
