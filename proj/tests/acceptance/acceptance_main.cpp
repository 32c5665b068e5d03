// Acceptance gate: one criterion per invocation, one [PASS]/[FAIL] line on
// stdout, exit status 0/1. Criteria are self-contained end-to-end checks of
// the shipped operations against independent re-computations, finer-grained
// oracles, frozen reference constants, and Monte Carlo simulation.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "mtsearch/bounds.hpp"
#include "mtsearch/channel.hpp"
#include "mtsearch/codebook.hpp"
#include "mtsearch/errors.hpp"
#include "mtsearch/info_density.hpp"
#include "mtsearch/kinematics.hpp"
#include "mtsearch/montecarlo.hpp"
#include "mtsearch/rng.hpp"
#include "mtsearch/search.hpp"
#include "mtsearch/trajectories.hpp"

namespace {

using namespace mtsearch;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

ChannelModel reference_bsc() { return ChannelModel::bsc(0.2, SizeFunction{2.0, 0.5}); }
ChannelModel reference_awgn() { return ChannelModel::awgn(2.0, SizeFunction{2.0, 0.5}); }

double binary_entropy(double e) {
  if (e <= 0.0 || e >= 1.0) return 0.0;
  return -e * std::log(e) - (1.0 - e) * std::log(1.0 - e);
}

// ---------------------------------------------------------------------------
// Criterion 1: the information-density decoder and the nearest-neighbor
// decoder pick the same winner on every random instance, for both channel
// families. Exact agreement, >= 1000 instances each, under 10 s.
bool criterion1() {
  const auto t0 = Clock::now();
  const SlotSchedule sched{{8}, 1, 0.2};
  const int M = 2;
  const TrajectorySet set = enumerate_first_slot(sched, M);
  const int n = sched.horizon();

  long long agree = 0;
  long long total = 0;
  for (int family = 0; family < 2; ++family) {
    const ChannelModel ch = family == 0 ? reference_bsc() : reference_awgn();
    for (int i = 0; i < 1000; ++i) {
      CounterRng rng(rng::derive(0xACC1, rng::kTestStream, family, i));
      const double p = 0.2 + 0.6 * rng.uniform();
      const std::vector<QueryCodebook> cbs = generate_codebook(sched, M, p, rng.next_u64());
      const QueryCodebook& cb = cbs[0];
      const TrajectoryEntry& truth =
          set.entries[static_cast<std::size_t>(rng.next_u64() % set.size())];
      std::vector<double> y(n);
      for (int k = 0; k < n; ++k) {
        const long long t = cb.t_begin + k;
        const int x = cb.bit(std::span<const int32_t>(&truth.cells[k], 1), t) ? 1 : 0;
        y[k] = sample_output(ch, query_measure(cb, t), x, rng);
      }
      const DecodeResult mi = mi_decode(set, cb, ch, p, y);
      const DecodeResult nn = nn_decode(set, cb, y);
      ++total;
      agree += mi.winner == nn.winner ? 1 : 0;
    }
  }
  const double dt = seconds_since(t0);
  std::printf("  winners agree on %lld/%lld instances (%zu candidates, n=%d); %.2f s\n",
              agree, total, set.size(), n, dt);
  return agree == total && total >= 2000 && dt < 10.0;
}

// ---------------------------------------------------------------------------
// Shared grid for criteria 2 and 3: every (n, M, v_+) combination from
// {2,3,4} x {1,2,3} x {0, 0.1, 0.25}, d = 1.
struct GridConfig {
  int n = 2;
  int M = 1;
  double vp = 0.0;
};

std::vector<GridConfig> grid_configs() {
  std::vector<GridConfig> out;
  for (int n : {2, 3, 4})
    for (int M : {1, 2, 3})
      for (double vp : {0.0, 0.1, 0.25}) out.push_back({n, M, vp});
  return out;
}

bool same_patterns(const TrajectorySet& a, const TrajectorySet& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.entries[i].cells != b.entries[i].cells) return false;
  }
  return true;
}

// Criterion 2: enumeration at the default resolution equals the 10x-finer
// oracle (first slot, and 20 random fixed prefixes for a second slot), and
// every set size respects the counting bound. Under 60 s.
bool criterion2() {
  const auto t0 = Clock::now();
  const std::vector<GridConfig> configs = grid_configs();
  int bad = 0;
  for (std::size_t idx = 0; idx < configs.size(); ++idx) {
    const GridConfig& cfg = configs[idx];
    const SlotSchedule first{{cfg.n}, 1, cfg.vp};
    const TrajectorySet base = enumerate_first_slot(first, cfg.M, 4);
    const TrajectorySet fine = enumerate_first_slot(first, cfg.M, 40);
    const bool eq1 = same_patterns(base, fine);
    const bool sz1 =
        static_cast<double>(base.size()) <= first_slot_size_bound(cfg.n, cfg.M, cfg.vp, 1);

    const SlotSchedule two{{cfg.n, 2 * cfg.n}, 1, cfg.vp};
    CounterRng prng(rng::derive(0xACC2, rng::kTestStream, idx));
    int eq2 = 0;
    bool sz2 = true;
    std::size_t max_later = 0;
    for (int trial = 0; trial < 20; ++trial) {
      const double s0 = prng.uniform();
      const double v1 = cfg.vp == 0.0 ? 0.0 : prng.uniform(-cfg.vp, cfg.vp);
      const TrajectorySet lbase = enumerate_later_slot({s0}, {{v1}}, two, 2, cfg.M, 4);
      const TrajectorySet lfine = enumerate_later_slot({s0}, {{v1}}, two, 2, cfg.M, 40);
      eq2 += same_patterns(lbase, lfine) ? 1 : 0;
      sz2 = sz2 && static_cast<double>(lbase.size()) <=
                       later_slot_size_bound(lbase.slot_n, cfg.M, cfg.vp, 1);
      max_later = std::max(max_later, lbase.size());
    }
    const bool ok = eq1 && sz1 && eq2 == 20 && sz2;
    bad += ok ? 0 : 1;
    std::printf(
        "  n=%d M=%d v+=%.2f: first %4zu %s oracle (bound %s), later %2d/20 prefixes "
        "agree (max %3zu, bounds %s)%s\n",
        cfg.n, cfg.M, cfg.vp, base.size(), eq1 ? "==" : "!=", sz1 ? "ok" : "EXCEEDED",
        eq2, max_later, sz2 ? "ok" : "EXCEEDED", ok ? "" : "  <-- MISMATCH");
  }
  const double dt = seconds_since(t0);
  std::printf("  %d/27 configurations clean; %.2f s\n", 27 - bad, dt);
  return bad == 0 && dt < 60.0;
}

// ---------------------------------------------------------------------------
// Criterion 3: across all confusable pairs of criterion 2's enumerated sets,
// coincidence counts stay within ceil(2 n v_+). Run literally as stated.
// The reflection-aware variant is printed alongside as a diagnostic: wall
// images of a bouncing trajectory share its folded path while carrying a
// far-away raw velocity, which is exactly where the literal cap breaks.
bool criterion3() {
  const auto t0 = Clock::now();
  const std::vector<GridConfig> configs = grid_configs();
  int violated = 0;
  int folded_max_over = 0;
  for (std::size_t idx = 0; idx < configs.size(); ++idx) {
    const GridConfig& cfg = configs[idx];
    const SlotSchedule first{{cfg.n}, 1, cfg.vp};
    const TrajectorySet base = enumerate_first_slot(first, cfg.M, 4);
    const IntersectionReport rep = verify_intersection_bound(base, cfg.vp, true, false);
    const IntersectionReport folded = verify_intersection_bound(base, cfg.vp, true, true);
    folded_max_over = std::max<long long>(folded_max_over, folded.max_observed - folded.cap);

    const SlotSchedule two{{cfg.n, 2 * cfg.n}, 1, cfg.vp};
    CounterRng prng(rng::derive(0xACC2, rng::kTestStream, idx));
    int later_max = -1;
    long long later_cap = 0;
    std::size_t later_pairs = 0;
    for (int trial = 0; trial < 20; ++trial) {
      const double s0 = prng.uniform();
      const double v1 = cfg.vp == 0.0 ? 0.0 : prng.uniform(-cfg.vp, cfg.vp);
      const TrajectorySet lbase = enumerate_later_slot({s0}, {{v1}}, two, 2, cfg.M, 4);
      const IntersectionReport lrep = verify_intersection_bound(lbase, cfg.vp, false, false);
      later_max = std::max(later_max, lrep.max_observed);
      later_cap = lrep.cap;
      later_pairs += lrep.pairs_checked;
    }
    const bool first_ok = rep.pass;
    const bool later_ok = later_max <= later_cap;
    if (!first_ok || !later_ok) ++violated;
    std::printf(
        "  n=%d M=%d v+=%.2f: first max %d vs cap %lld (%zu pairs)%s | folded max %d | "
        "later max %d vs cap %lld (%zu pairs)%s\n",
        cfg.n, cfg.M, cfg.vp, rep.max_observed, rep.cap, rep.pairs_checked,
        first_ok ? "" : "  VIOLATION", folded.max_observed, later_max, later_cap, later_pairs,
        later_ok ? "" : "  VIOLATION");
  }
  const double dt = seconds_since(t0);
  std::printf("  %d/27 configurations violate the literal cap; %.2f s\n", violated, dt);
  if (violated > 0) {
    std::printf(
        "  note: two effects break the literal cap. (i) Wall images: a trajectory that\n"
        "  bounces off an interval end shares its folded path with a mirrored start whose\n"
        "  raw velocity lies outside the exclusion neighborhood; the image-aware rescan\n"
        "  (folded column) removes these. (ii) Crossing runs: two velocities just over one\n"
        "  velocity cell apart stay within one location cell of each other for about two\n"
        "  consecutive steps around each crossing, so small caps are exceeded regardless\n"
        "  of exclusion rule - the folded column still overshoots by up to %d.\n",
        folded_max_over);
  }
  return violated == 0;
}

// ---------------------------------------------------------------------------
// Criterion 4: E[exp(-iota)] under the generating law equals 1 identically
// (a change of measure back to the output marginal), which is what makes the
// displayed union-bound form of the achievability saturate at 1. Exact sums
// within 1e-12 for the discrete channel, quadrature within 1e-6 for AWGN.
bool criterion4() {
  const auto t0 = Clock::now();
  const ChannelModel bsc = reference_bsc();
  const ChannelModel awgn = reference_awgn();
  CounterRng rng(rng::derive(0xACC4, rng::kTestStream, 0));
  double worst_bsc = 0.0;
  double worst_awgn = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double p = 0.02 + 0.96 * rng.uniform();
    worst_bsc = std::fmax(worst_bsc, std::fabs(exp_neg_info_density_mean(bsc, p, p) - 1.0));
    worst_awgn = std::fmax(worst_awgn, std::fabs(exp_neg_info_density_mean(awgn, p, p) - 1.0));
  }
  std::printf("  |E[exp(-iota)] - 1|: discrete worst %.3e (tol 1e-12), awgn worst %.3e "
              "(tol 1e-6)\n",
              worst_bsc, worst_awgn);

  // The identity makes the as-displayed bound vacuous: check that the literal
  // mode reports exactly that.
  const SlotSchedule sched{{20}, 1, 0.05};
  const double p_star = capacity(bsc).maximizers.front();
  const AchievabilityResult lit =
      achievability_bound(sched, 2, p_star, 0.1, bsc, AchievabilityMode::Literal);
  std::printf("  literal-mode bound total %.6f, saturation flag %s\n", lit.total,
              lit.vacuous_warning ? "set" : "NOT SET");
  const double dt = seconds_since(t0);
  std::printf("  %.2f s\n", dt);
  return worst_bsc <= 1e-12 && worst_awgn <= 1e-6 && lit.vacuous_warning && lit.total >= 1.0;
}

// ---------------------------------------------------------------------------
// Criterion 5: the exact random-coding-union bound dominates the simulated
// excess probability (10^4 trials, d=1, B=1, n=20, M=2, p at the capacity
// maximizer) up to 3 Wilson standard errors. Under 5 minutes.
bool criterion5() {
  const auto t0 = Clock::now();
  const ChannelModel ch = reference_bsc();
  const SlotSchedule sched{{20}, 1, 0.05};
  const int M = 2;
  const double p_star = capacity(ch).maximizers.front();

  const double bound =
      achievability_bound(sched, M, p_star, 0.1, ch, AchievabilityMode::RcuExact).total;
  const TrialContext ctx = make_trial_context(sched, M, p_star, ch);
  const PointEstimate est =
      estimate_excess_probability(ctx, 10000, 20260816, StateMode::Uniform, {}, 8, false);
  const double dt = seconds_since(t0);
  std::printf("  p_hat %.6f (%lld/%lld excess, se %.6f) vs bound %.6f; delta=(B+1)/M=%.2f; "
              "%.2f s\n",
              est.ci.p_hat, est.excess_count, est.trials, est.ci.std_err, bound,
              static_cast<double>(sched.slots() + 1) / M, dt);
  if (bound >= 1.0) {
    std::printf("  note: at n=20 the bound itself exceeds 1 (small-horizon penalty terms "
                "dominate), so dominance holds structurally.\n");
  }
  return est.ci.p_hat <= bound + 3.0 * est.ci.std_err && dt < 300.0;
}

// ---------------------------------------------------------------------------
// Criterion 6: the excess-probability phase transition. Analytically the
// curve passes through 1/2 exactly at rate C/(2d), is strictly increasing,
// and sharpens with n; empirically (M swept at n in {16, 24, 32}) the
// simulated curves are monotone up to CI overlap and cross 1/2 within
// 2/sqrt(n) of C/2 in rate units. Under 15 minutes.
bool criterion6() {
  const auto t0 = Clock::now();
  const ChannelModel ch = reference_bsc();
  const CapacityReport cap = capacity(ch);
  const double C = cap.C;
  const double half = C / 2.0;
  bool ok = true;

  // Analytic part: grid r_k = (C/2) * k/20, k = 0..40 (k = 20 is exact).
  std::vector<double> grid;
  for (int k = 0; k <= 40; ++k) grid.push_back(half * (static_cast<double>(k) / 20.0));
  std::vector<PhaseCurve> curves;
  for (int n : {100, 200, 400}) {
    curves.push_back(phase_curve(n, 1, ch, 0.5, grid));
    const PhaseCurve& cu = curves.back();
    const double mid = cu.points[20].epsilon_star;
    bool increasing = true;
    for (std::size_t k = 1; k < cu.points.size(); ++k) {
      increasing = increasing && cu.points[k].epsilon_star > cu.points[k - 1].epsilon_star;
    }
    const bool mid_ok = std::fabs(mid - 0.5) <= 1e-12;
    std::printf("  analytic n=%d: eps*(C/2)=%.15f%s, strictly increasing %s\n", n, mid,
                mid_ok ? "" : "  OFF", increasing ? "yes" : "NO");
    ok = ok && mid_ok && increasing && std::fabs(cu.threshold - half) <= 1e-15;
  }
  // Sharpening: larger n is steeper on both sides of the threshold.
  for (std::size_t i = 1; i < curves.size(); ++i) {
    const bool steeper = curves[i].points[25].epsilon_star > curves[i - 1].points[25].epsilon_star &&
                         curves[i].points[15].epsilon_star < curves[i - 1].points[15].epsilon_star;
    std::printf("  analytic steepening %d -> %d: %s\n", curves[i - 1].n, curves[i].n,
                steeper ? "yes" : "NO");
    ok = ok && steeper;
  }

  // Empirical part.
  struct Sweep {
    int n;
    std::vector<int> Ms;
    long long trials;
  };
  // Trial counts shrink as the candidate sets grow (the host budget is a
  // single core); the Wilson intervals stay narrow enough to certify the
  // bracket around 1/2 at every n.
  const std::vector<Sweep> sweeps = {{16, {3, 4, 6, 8, 10}, 1000},
                                     {24, {4, 6, 8, 12}, 800},
                                     {32, {6, 8, 10, 12}, 500}};
  const double p_star = cap.maximizers.front();
  for (const Sweep& sw : sweeps) {
    const double vp = 1.0 / (static_cast<double>(sw.n) * sw.n);
    const SlotSchedule sched{{sw.n}, 1, vp};
    const double window = 2.0 / std::sqrt(static_cast<double>(sw.n));
    std::vector<double> rates, lo, hi, phat;
    for (int M : sw.Ms) {
      const TrialContext ctx = make_trial_context(sched, M, p_star, ch, 4, 1e10);
      const PointEstimate est = estimate_excess_probability(
          ctx, sw.trials, 20260816 + sw.n, StateMode::Uniform, {}, 8, false);
      rates.push_back(std::log(M / 2.0) / sw.n);
      lo.push_back(est.ci.lo);
      hi.push_back(est.ci.hi);
      phat.push_back(est.ci.p_hat);
      std::printf("  empirical n=%d M=%2d rate=%.4f p_hat=%.3f [%.3f, %.3f] (%zu candidates)\n",
                  sw.n, M, rates.back(), est.ci.p_hat, est.ci.lo, est.ci.hi,
                  ctx.first_slot->size());
    }
    bool monotone = true;
    for (std::size_t k = 1; k < phat.size(); ++k) {
      monotone = monotone && hi[k] >= lo[k - 1];  // no CI-certified decrease
    }
    double below = -HUGE_VAL, above = HUGE_VAL;
    for (std::size_t k = 0; k < phat.size(); ++k) {
      if (hi[k] < 0.5) below = std::fmax(below, rates[k]);
      if (lo[k] > 0.5) above = std::fmin(above, rates[k]);
    }
    const bool bracketed = std::isfinite(below) && std::isfinite(above) && below < above;
    const bool in_window = bracketed && below <= half + window && above >= half - window;
    std::printf("  n=%d: monotone(CI) %s; crossing in (%.4f, %.4f), window C/2 +- %.4f: %s\n",
                sw.n, monotone ? "yes" : "NO", below, above, window,
                in_window ? "inside" : "OUTSIDE");
    ok = ok && monotone && bracketed && in_window;
  }
  const double dt = seconds_since(t0);
  std::printf("  %.1f s\n", dt);
  return ok && dt < 900.0;
}

// ---------------------------------------------------------------------------
// Criterion 7: second-order sandwich. With v_+ = 1/n_B and the remainder
// terms zeroed, the achievable rate never exceeds the converse rate, both
// approach C/((B+1)d) (gap < 2% at n_B = 1e5), and the cold-restart rate is
// exactly half the one-shot rate. The two-slot schedule splits the horizon
// so each slot carries an equal share of the budget: the first slot must
// pin down location and velocity together (its per-step yield is halved),
// so balance puts two thirds of the horizon there (n_1 = 2 n_B / 3).
bool criterion7() {
  const auto t0 = Clock::now();
  const ChannelModel ch = reference_bsc();
  const double eps = 0.5;
  bool ok = true;
  for (int B : {1, 2}) {
    for (int nB : {1000, 10000, 100000}) {
      const int n1 = static_cast<int>(std::llround(2.0 * nB / 3.0));
      SlotSchedule sched;
      sched.dimension = 1;
      sched.max_speed = 1.0 / nB;
      sched.ending_times = B == 1 ? std::vector<int>{nB} : std::vector<int>{n1, nB};
      const RateReport rep = second_order_rates(sched, eps, ch);
      const bool sandwich = rep.achievable_rate <= rep.converse_rate;
      const double gap = (rep.converse_rate - rep.achievable_rate) / rep.converse_rate;
      const double ach_to_limit =
          std::fabs(rep.achievable_rate - rep.corollary1_rate) / rep.corollary1_rate;
      const double conv_to_limit =
          std::fabs(rep.converse_rate - rep.corollary1_rate) / rep.corollary1_rate;
      const bool cold_exact = rep.cold_restart_rate == 0.5 * rep.corollary1_rate;
      std::printf("  B=%d n_B=%6d: ach %.6f <= conv %.6f %s  limit %.6f  gap %.2f%%  "
                  "cold==half %s\n",
                  B, nB, rep.achievable_rate, rep.converse_rate, sandwich ? "ok" : "VIOLATED",
                  rep.corollary1_rate, 100.0 * gap, cold_exact ? "yes" : "NO");
      ok = ok && sandwich && cold_exact;
      if (nB == 100000) {
        const bool tight = gap < 0.02 && ach_to_limit < 0.02 && conv_to_limit < 0.02;
        std::printf("    n_B=1e5 convergence: |ach-limit| %.2f%%, |conv-limit| %.2f%%: %s\n",
                    100.0 * ach_to_limit, 100.0 * conv_to_limit, tight ? "ok" : "TOO WIDE");
        ok = ok && tight;
      }
    }
  }
  const double dt = seconds_since(t0);
  std::printf("  %.2f s\n", dt);
  return ok;
}

// ---------------------------------------------------------------------------
// Criterion 8: the squared-noise large-deviation exponent. The numeric max
// of I(theta, sigma^2) equals (1 - log 2)/2 for every sigma (1e-10), and the
// Monte Carlo tail of the mean of n squared normals stays below the bound
// exp(-n (1 - log 2)/2) with 1e6 draws. Under 30 s.
bool criterion8() {
  const auto t0 = Clock::now();
  const double target = 0.5 * (1.0 - std::log(2.0));
  bool ok = true;
  for (double sigma : {0.5, 1.0, 2.0}) {
    // Golden-section max over the exponent's domain theta in (0, 1/(2 sigma^2)).
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = 1e-12, b = (1.0 - 1e-12) / (2.0 * sigma * sigma);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = chernoff_exponent(x1, sigma), f2 = chernoff_exponent(x2, sigma);
    for (int it = 0; it < 200; ++it) {
      if (f1 < f2) {
        a = x1; x1 = x2; f1 = f2;
        x2 = a + gr * (b - a); f2 = chernoff_exponent(x2, sigma);
      } else {
        b = x2; x2 = x1; f2 = f1;
        x1 = b - gr * (b - a); f1 = chernoff_exponent(x1, sigma);
      }
    }
    const double fmax = std::fmax(f1, f2);
    const double theta_hat = f1 > f2 ? x1 : x2;
    const GaussianTail gt = gaussian_tail(50, sigma);
    const bool max_ok = std::fabs(fmax - target) <= 1e-10;
    const bool arg_ok = std::fabs(theta_hat - 1.0 / (4.0 * sigma * sigma)) <= 1e-6;
    std::printf("  sigma=%.1f: max I = %.12f (target %.12f)%s at theta %.6f; bound(50) %.6e\n",
                sigma, fmax, target, max_ok ? "" : "  OFF", theta_hat, gt.bound);
    ok = ok && max_ok && arg_ok;
  }
  // sigma-independence of the tail bound itself.
  ok = ok && gaussian_tail(10, 0.5).bound == gaussian_tail(10, 2.0).bound;

  // Monte Carlo tails (the event mean(Z^2) >= 2 sigma^2 is sigma-invariant,
  // so sigma = 1 covers all).
  std::mt19937_64 gen(8675309);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int n : {10, 50}) {
    const long long draws = 1000000;
    long long hits = 0;
    for (long long i = 0; i < draws; ++i) {
      double sum = 0.0;
      for (int k = 0; k < n; ++k) {
        const double z = normal(gen);
        sum += z * z;
      }
      if (sum >= 2.0 * n) ++hits;
    }
    const double emp = static_cast<double>(hits) / static_cast<double>(draws);
    const double bound = gaussian_tail(n, 1.0).bound;
    std::printf("  n=%d: empirical tail %.3e <= bound %.3e: %s\n", n, emp, bound,
                emp <= bound ? "ok" : "EXCEEDED");
    ok = ok && emp <= bound;
  }
  const double dt = seconds_since(t0);
  std::printf("  %.2f s\n", dt);
  return ok && dt < 30.0;
}

// ---------------------------------------------------------------------------
// Criterion 9: capacity cross-checks. With a constant size function the
// capacity has the closed form log 2 - H_b(zeta * b) (1e-9); the reference
// configurations match independent dense-grid oracles within 1e-8.
bool criterion9() {
  const auto t0 = Clock::now();
  bool ok = true;
  struct ConstCase {
    double zeta;
    double b;
  };
  for (const ConstCase cc : {ConstCase{0.2, 1.5}, ConstCase{0.3, 1.0}, ConstCase{0.1, 2.0}}) {
    const ChannelModel ch = ChannelModel::bsc(cc.zeta, SizeFunction{0.0, cc.b});
    const double expected = std::log(2.0) - binary_entropy(cc.zeta * cc.b);
    const CapacityReport rep = capacity(ch);
    const double err = std::fabs(rep.C - expected);
    std::printf("  constant f=%.1f, zeta=%.2f: C=%.12f vs closed form %.12f (err %.2e)\n",
                cc.b, cc.zeta, rep.C, expected, err);
    ok = ok && err <= 1e-9;
  }

  // Reference discrete config against an in-process dense-grid oracle built
  // from the closed-form mean H_b(beta) - H_b(e0).
  const ChannelModel bsc = reference_bsc();
  double oracle = 0.0;
  const int grid_n = 2000000;
  for (int i = 1; i < grid_n; ++i) {
    const double p = static_cast<double>(i) / grid_n;
    const double e0 = 0.2 * (2.0 * p + 0.5);
    const double beta = p + e0 - 2.0 * p * e0;
    oracle = std::fmax(oracle, binary_entropy(beta) - binary_entropy(e0));
  }
  const CapacityReport brep = capacity(bsc);
  const double bsc_err = std::fabs(brep.C - oracle);
  // Frozen oracle values for both reference configurations.
  const double bsc_frozen = 0.14764421641661746;
  const double awgn_frozen = 0.024366215536875915;
  const CapacityReport arep = capacity(reference_awgn());
  std::printf("  discrete reference: C=%.15f, dense-grid oracle %.15f (err %.2e), frozen "
              "%.15f (err %.2e)\n",
              brep.C, oracle, bsc_err, bsc_frozen, std::fabs(brep.C - bsc_frozen));
  std::printf("  awgn reference:     C=%.15f, frozen oracle %.15f (err %.2e); maximizer "
              "%.6f\n",
              arep.C, awgn_frozen, std::fabs(arep.C - awgn_frozen),
              arep.maximizers.front());
  ok = ok && bsc_err <= 1e-8 && std::fabs(brep.C - bsc_frozen) <= 1e-8 &&
       std::fabs(arep.C - awgn_frozen) <= 1e-8;
  const double dt = seconds_since(t0);
  std::printf("  %.2f s\n", dt);
  return ok;
}

// ---------------------------------------------------------------------------
// Criterion 10: repeated `simulate` runs with the identical configuration
// produce byte-identical CSV output across 1, 4, and 16 threads.
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool criterion10(const char* cli) {
  const auto t0 = Clock::now();
  if (cli == nullptr) {
    std::printf("  no CLI path supplied (argv[2]); cannot run the simulate subcommand\n");
    return false;
  }
  const fs::path base = fs::temp_directory_path() / "acceptance_thread_determinism";
  std::error_code ec;
  fs::remove_all(base, ec);
  struct Run {
    int threads;
    const char* tag;
  };
  const std::vector<Run> runs = {{1, "t1"}, {4, "t4"}, {16, "t16"}, {1, "t1_repeat"}};
  std::vector<std::string> sweep_texts, trial_texts;
  for (const Run& r : runs) {
    const fs::path dir = base / r.tag;
    fs::create_directories(dir);
    const std::string cmd = std::string("\"") + cli + "\" simulate --threads " +
                            std::to_string(r.threads) + " --set simulation.trials=300 --out " +
                            dir.string() + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    if (rc != 0) {
      std::printf("  simulate run (threads=%d) exited with %d\n", r.threads, rc);
      return false;
    }
    sweep_texts.push_back(slurp(dir / "simulate.csv"));
    trial_texts.push_back(slurp(dir / "simulate_trials.csv"));
  }
  bool ok = !sweep_texts[0].empty() && !trial_texts[0].empty();
  for (std::size_t i = 1; i < runs.size(); ++i) {
    const bool same =
        sweep_texts[i] == sweep_texts[0] && trial_texts[i] == trial_texts[0];
    std::printf("  threads=%d (%s): sweep %zu B, trials %zu B, identical to run 1: %s\n",
                runs[i].threads, runs[i].tag, sweep_texts[i].size(), trial_texts[i].size(),
                same ? "yes" : "NO");
    ok = ok && same;
  }
  fs::remove_all(base, ec);
  const double dt = seconds_since(t0);
  std::printf("  %.2f s\n", dt);
  return ok;
}

struct Criterion {
  const char* name;
  bool (*fn)();
};

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <criterion 1..10> [cli-path]\n");
    return 2;
  }
  const int crit = std::atoi(argv[1]);
  const char* cli = argc > 2 ? argv[2] : nullptr;
  static const Criterion table[] = {
      {"decoder agreement", criterion1},
      {"trajectory enumeration vs finer grid", criterion2},
      {"coincidence cap", criterion3},
      {"density exponential identity", criterion4},
      {"bound dominates simulation", criterion5},
      {"phase transition", criterion6},
      {"rate sandwich", criterion7},
      {"squared-noise tail", criterion8},
      {"capacity cross-check", criterion9},
      {"thread determinism", nullptr},
  };
  if (crit < 1 || crit > 10) {
    std::fprintf(stderr, "criterion must be 1..10\n");
    return 2;
  }
  const Criterion& entry = table[crit - 1];
  bool pass = false;
  try {
    pass = crit == 10 ? criterion10(cli) : entry.fn();
  } catch (const std::exception& ex) {
    std::printf("[FAIL] criterion %d (%s): unexpected exception: %s\n", crit, entry.name,
                ex.what());
    return 1;
  }
  std::printf("[%s] criterion %d (%s)\n", pass ? "PASS" : "FAIL", crit, entry.name);
  return pass ? 0 : 1;
}
