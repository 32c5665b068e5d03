#include "mtsearch/info_density.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "mtsearch/errors.hpp"
#include "mtsearch/util.hpp"

namespace mtsearch {

namespace {

// Recursive adaptive Simpson quadrature. The integrands here are smooth
// log-ratios against Gaussian weights, so modest depth suffices.
double simpson_panel(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& g, double a, double fa, double b,
                     double fb, double m, double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = g(lm);
  const double frm = g(rm);
  const double left = simpson_panel(a, fa, m, fm, flm);
  const double right = simpson_panel(m, fm, b, fb, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_step(g, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_step(g, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& g, double a, double b, double tol) {
  // Seed with several panels so narrow features are not stepped over.
  const int panels = 8;
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double lo = a + k * h;
    const double hi = lo + h;
    const double mid = 0.5 * (lo + hi);
    const double flo = g(lo);
    const double fhi = g(hi);
    const double fmid = g(mid);
    const double whole = simpson_panel(lo, flo, hi, fhi, fmid);
    sum += adaptive_step(g, lo, flo, hi, fhi, mid, fmid, whole, tol / panels, 48);
  }
  return sum;
}

double binary_entropy(double e) {
  if (e <= 0.0 || e >= 1.0) return 0.0;
  return -e * std::log(e) - (1.0 - e) * std::log(1.0 - e);
}

void check_bias(double p, const char* who) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ValidationError(std::string(who) + ": input bias must lie in [0, 1]");
  }
}

// Mean of the information density at bias p with query measure p (the value
// the capacity search maximizes). Closed form for the binary channel.
double mean_info(const ChannelModel& ch, double p, double quad_tol) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  if (ch.kind == ChannelKind::Bsc) {
    const double e0 = ch.flip_prob(p);
    const double beta = p + e0 - 2.0 * p * e0;  // P(Y = 1)
    return binary_entropy(beta) - binary_entropy(e0);
  }
  const double s = ch.noise_std(p);
  double mean = 0.0;
  for (int x = 0; x <= 1; ++x) {
    const double pr_x = x == 1 ? p : 1.0 - p;
    const double mu = static_cast<double>(x);
    auto g = [&](double y) {
      const double z = (y - mu) / s;
      const double w = std::exp(-0.5 * z * z) / (s * std::sqrt(2.0 * M_PI));
      return w * info_density(ch, p, p, x, y);
    };
    mean += pr_x * integrate(g, mu - 14.0 * s, mu + 14.0 * s, quad_tol);
  }
  return mean;
}

}  // namespace

double info_density(const ChannelModel& ch, double p, double q, int x, double y) {
  check_bias(p, "info_density");
  if (x != 0 && x != 1) {
    throw ValidationError("info_density: input symbol must be 0 or 1");
  }
  if (ch.kind == ChannelKind::Bsc) {
    const double e = ch.flip_prob(q);
    const int yi = y > 0.5 ? 1 : 0;
    const double cond = yi == x ? 1.0 - e : e;
    const double marg_one = p + e - 2.0 * p * e;  // P(Y = 1) under Bern(p)
    const double marg = yi == 1 ? marg_one : 1.0 - marg_one;
    if (cond == 0.0) return -HUGE_VAL;
    return std::log(cond) - std::log(marg);
  }
  // The Gaussian normalizers cancel between the conditional and the mixture,
  // so work with log densities directly.
  const double log_cond = log_transition_prob(ch, q, x, y);
  const double log_one = p > 0.0 ? std::log(p) + log_transition_prob(ch, q, 1, y) : -HUGE_VAL;
  const double log_zero =
      p < 1.0 ? std::log(1.0 - p) + log_transition_prob(ch, q, 0, y) : -HUGE_VAL;
  return log_cond - log_sum_exp(log_one, log_zero);
}

double empirical_info_density(const ChannelModel& ch, double p, double q,
                              std::span<const int> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw ValidationError("empirical_info_density: input and output lengths differ");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sum += info_density(ch, p, q, x[i], y[i]);
  }
  return sum;
}

MomentReport moments(const ChannelModel& ch, double p, double quad_tol) {
  check_bias(p, "moments");
  MomentReport rep;
  rep.p = p;
  if (ch.kind == ChannelKind::Bsc) {
    const double e0 = ch.flip_prob(p);
    const double probs[2] = {1.0 - p, p};
    double mean = 0.0;
    double vals[2][2];
    double mass[2][2];
    for (int x = 0; x <= 1; ++x) {
      for (int y = 0; y <= 1; ++y) {
        mass[x][y] = probs[x] * (y == x ? 1.0 - e0 : e0);
        vals[x][y] = info_density(ch, p, p, x, static_cast<double>(y));
        mean += mass[x][y] * vals[x][y];
      }
    }
    // Second pass with the centered values keeps the small-variance cases
    // free of cancellation error.
    double var = 0.0;
    double third = 0.0;
    for (int x = 0; x <= 1; ++x) {
      for (int y = 0; y <= 1; ++y) {
        const double c = vals[x][y] - mean;
        var += mass[x][y] * c * c;
        third += mass[x][y] * std::fabs(c) * c * c;
      }
    }
    rep.mean = mean;
    rep.variance = var;
    rep.third_abs_moment = third;
    return rep;
  }
  const double s = ch.noise_std(p);
  auto weighted = [&](int x, const std::function<double(double)>& h) {
    const double mu = static_cast<double>(x);
    auto g = [&](double y) {
      const double z = (y - mu) / s;
      const double w = std::exp(-0.5 * z * z) / (s * std::sqrt(2.0 * M_PI));
      return w * h(y);
    };
    return integrate(g, mu - 14.0 * s, mu + 14.0 * s, quad_tol);
  };
  double mean = 0.0;
  for (int x = 0; x <= 1; ++x) {
    const double pr_x = x == 1 ? p : 1.0 - p;
    if (pr_x == 0.0) continue;
    mean += pr_x * weighted(x, [&](double y) { return info_density(ch, p, p, x, y); });
  }
  double var = 0.0;
  double third = 0.0;
  for (int x = 0; x <= 1; ++x) {
    const double pr_x = x == 1 ? p : 1.0 - p;
    if (pr_x == 0.0) continue;
    var += pr_x * weighted(x, [&](double y) {
      const double c = info_density(ch, p, p, x, y) - mean;
      return c * c;
    });
    third += pr_x * weighted(x, [&](double y) {
      const double c = info_density(ch, p, p, x, y) - mean;
      return std::fabs(c) * c * c;
    });
  }
  rep.mean = mean;
  rep.variance = var;
  rep.third_abs_moment = third;
  return rep;
}

double exp_neg_info_density_mean(const ChannelModel& ch, double p, double q, double quad_tol) {
  check_bias(p, "exp_neg_info_density_mean");
  if (ch.kind == ChannelKind::Bsc) {
    const double e = ch.flip_prob(q);
    const double probs[2] = {1.0 - p, p};
    double total = 0.0;
    for (int x = 0; x <= 1; ++x) {
      for (int y = 0; y <= 1; ++y) {
        const double mass = probs[x] * (y == x ? 1.0 - e : e);
        if (mass == 0.0) continue;
        total += mass * std::exp(-info_density(ch, p, q, x, static_cast<double>(y)));
      }
    }
    return total;
  }
  // The integrand P(y|x) exp(-iota) equals the output mixture density, whose
  // modes sit at both inputs; integrate over a window covering both.
  const double s = ch.noise_std(q);
  const double lo = -14.0 * s;
  const double hi = 1.0 + 14.0 * s;
  double total = 0.0;
  for (int x = 0; x <= 1; ++x) {
    const double pr_x = x == 1 ? p : 1.0 - p;
    if (pr_x == 0.0) continue;
    auto g = [&](double y) {
      return transition_prob(ch, q, x, y) * std::exp(-info_density(ch, p, q, x, y));
    };
    total += pr_x * integrate(g, lo, hi, quad_tol);
  }
  return total;
}

CapacityReport capacity(const ChannelModel& ch, int grid_size, double refine_tol,
                        double merge_tol) {
  if (grid_size < 101) {
    throw ValidationError("capacity: grid must have at least 101 points");
  }
  if (!(refine_tol > 0.0) || !(merge_tol > 0.0)) {
    throw ValidationError("capacity: tolerances must be > 0");
  }
  // Tighter quadrature than the final tolerance so the grid/refinement noise
  // floor sits well below the merge decisions.
  const double quad_tol = 1e-11;
  auto g = [&](double p) { return mean_info(ch, p, quad_tol); };

  std::vector<double> ps(grid_size);
  std::vector<double> gs(grid_size);
  for (int i = 0; i < grid_size; ++i) {
    ps[i] = static_cast<double>(i) / (grid_size - 1);
    gs[i] = g(ps[i]);
  }

  // Golden-section polish of every interior local maximum of the grid scan.
  const double invphi = 0.6180339887498949;
  const double xtol = 1e-12;
  std::vector<std::pair<double, double>> peaks;  // (p, value)
  for (int i = 1; i + 1 < grid_size; ++i) {
    if (gs[i] >= gs[i - 1] && gs[i] >= gs[i + 1]) {
      double a = ps[i - 1];
      double b = ps[i + 1];
      double c = b - invphi * (b - a);
      double d = a + invphi * (b - a);
      double fc = g(c);
      double fd = g(d);
      while (b - a > xtol) {
        if (fc > fd) {
          b = d;
          d = c;
          fd = fc;
          c = b - invphi * (b - a);
          fc = g(c);
        } else {
          a = c;
          c = d;
          fc = fd;
          d = a + invphi * (b - a);
          fd = g(d);
        }
      }
      const double pm = 0.5 * (a + b);
      peaks.emplace_back(pm, g(pm));
    }
  }
  if (peaks.empty()) {
    // Degenerate scan (monotone grid); fall back to the best grid point.
    int best = static_cast<int>(std::max_element(gs.begin(), gs.end()) - gs.begin());
    peaks.emplace_back(ps[best], gs[best]);
  }

  CapacityReport rep;
  for (const auto& [pm, val] : peaks) rep.C = std::fmax(rep.C, val);

  // Keep peaks attaining the maximum within refine_tol, merged within
  // merge_tol in p; the lowest p of each cluster represents it.
  std::sort(peaks.begin(), peaks.end());
  for (const auto& [pm, val] : peaks) {
    if (val < rep.C - refine_tol) continue;
    if (!rep.maximizers.empty() && pm - rep.maximizers.back() <= merge_tol) continue;
    rep.maximizers.push_back(pm);
  }

  rep.V_eps_low = HUGE_VAL;
  rep.V_eps_high = -HUGE_VAL;
  for (double pm : rep.maximizers) {
    const double var = moments(ch, pm).variance;
    rep.V_eps_low = std::fmin(rep.V_eps_low, var);
    rep.V_eps_high = std::fmax(rep.V_eps_high, var);
  }
  return rep;
}

double dispersion_for_eps(const CapacityReport& report, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw ValidationError("dispersion_for_eps: eps must lie in (0, 1)");
  }
  return eps <= 0.5 ? report.V_eps_high : report.V_eps_low;
}

}  // namespace mtsearch
