// Python bindings for the search core: kinematics, capacity, bounds, and the
// Monte Carlo trial driver. Reports cross the boundary as plain dicts so the
// Python side stays free of wrapper types.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <vector>

#include "mtsearch/bounds.hpp"
#include "mtsearch/channel.hpp"
#include "mtsearch/info_density.hpp"
#include "mtsearch/kinematics.hpp"
#include "mtsearch/montecarlo.hpp"
#include "mtsearch/search.hpp"
#include "mtsearch/trajectories.hpp"
#include "mtsearch/util.hpp"

namespace py = pybind11;
using namespace mtsearch;

namespace {

ChannelModel make_channel(const std::string& kind, double zeta, double sigma, double f_a,
                          double f_b) {
  const SizeFunction f{f_a, f_b};
  if (kind == "bsc") return ChannelModel::bsc(zeta, f);
  if (kind == "awgn") return ChannelModel::awgn(sigma, f);
  throw ValidationError("channel: kind must be 'bsc' or 'awgn'");
}

py::dict capacity_dict(const ChannelModel& ch, int grid) {
  const CapacityReport rep = capacity(ch, grid);
  py::dict d;
  d["capacity"] = rep.C;
  d["maximizers"] = rep.maximizers;
  d["v_eps_low"] = rep.V_eps_low;
  d["v_eps_high"] = rep.V_eps_high;
  return d;
}

py::dict moments_dict(const ChannelModel& ch, double p) {
  const MomentReport rep = moments(ch, p);
  py::dict d;
  d["p"] = rep.p;
  d["mean"] = rep.mean;
  d["variance"] = rep.variance;
  d["third_abs_moment"] = rep.third_abs_moment;
  return d;
}

py::dict outcome_dict(const SearchOutcome& out) {
  py::dict d;
  d["s_hat"] = out.estimate.s;
  d["v_hat"] = out.estimate.v;
  d["max_error"] = out.max_error;
  d["delta"] = out.delta;
  d["excess"] = out.excess;
  d["slot_scores"] = out.slot_scores;
  d["slot_margins"] = out.slot_margins;
  return d;
}

AchievabilityMode parse_mode(const std::string& mode) {
  if (mode == "literal") return AchievabilityMode::Literal;
  if (mode == "rcu_exact") return AchievabilityMode::RcuExact;
  if (mode == "gaussian_approx") return AchievabilityMode::GaussianApprox;
  throw ValidationError("achievability: unknown mode '" + mode + "'");
}

}  // namespace

PYBIND11_MODULE(mtsearch, m) {
  m.doc() =
      "Non-adaptive noisy search for a moving target: query design, "
      "resolution bounds, and Monte Carlo simulation.";
  m.attr("__version__") = kToolVersion;

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<CapExceeded>(m, "CapExceeded", PyExc_RuntimeError);

  py::class_<SlotSchedule>(m, "SlotSchedule")
      .def(py::init([](std::vector<int> ending_times, int dimension, double max_speed) {
             SlotSchedule s{std::move(ending_times), dimension, max_speed};
             s.validate();
             return s;
           }),
           py::arg("ending_times"), py::arg("dimension") = 1, py::arg("max_speed") = 0.0)
      .def_readonly("ending_times", &SlotSchedule::ending_times)
      .def_readonly("dimension", &SlotSchedule::dimension)
      .def_readonly("max_speed", &SlotSchedule::max_speed)
      .def("slots", &SlotSchedule::slots)
      .def("horizon", &SlotSchedule::horizon)
      .def("slot_length", &SlotSchedule::slot_length, py::arg("j"));

  py::class_<ChannelModel>(m, "ChannelModel")
      .def(py::init(&make_channel), py::arg("kind"), py::arg("zeta") = 0.2,
           py::arg("sigma") = 2.0, py::arg("f_a") = 2.0, py::arg("f_b") = 0.5)
      .def_property_readonly("kind",
                             [](const ChannelModel& ch) {
                               return ch.discrete() ? std::string("bsc") : std::string("awgn");
                             })
      .def("flip_prob", &ChannelModel::flip_prob, py::arg("q"))
      .def("noise_std", &ChannelModel::noise_std, py::arg("q"));

  // kinematics
  m.def("locate", &locate, py::arg("s"), py::arg("v"), py::arg("t"),
        "Location of a target starting at s with speed v after time t on the "
        "reflected unit interval.");
  m.def("quantize_cell", &quantize_cell, py::arg("x"), py::arg("n"), py::arg("M"),
        "1-based cell index of x on the n*M grid.");

  // information density and capacity
  m.def("info_density", &info_density, py::arg("channel"), py::arg("p"), py::arg("q"),
        py::arg("x"), py::arg("y"));
  m.def("exp_neg_info_density_mean",
        [](const ChannelModel& ch, double p, double q) {
          return exp_neg_info_density_mean(ch, p, q);
        },
        py::arg("channel"), py::arg("p"), py::arg("q"));
  m.def("moments", &moments_dict, py::arg("channel"), py::arg("p"));
  m.def("capacity", &capacity_dict, py::arg("channel"), py::arg("grid") = 1001);

  // bounds
  m.def("achievability_bound",
        [](const SlotSchedule& sched, int M, double p, double eta, const ChannelModel& ch,
           const std::string& mode) {
          const AchievabilityResult r = achievability_bound(sched, M, p, eta, ch,
                                                            parse_mode(mode));
          py::dict d;
          d["total"] = r.total;
          d["per_slot"] = r.per_slot;
          d["atypicality"] = r.atypicality;
          d["truncation"] = r.truncation;
          d["vacuous_warning"] = r.vacuous_warning;
          return d;
        },
        py::arg("schedule"), py::arg("M"), py::arg("p"), py::arg("eta"), py::arg("channel"),
        py::arg("mode") = "rcu_exact");
  m.def("converse_bound",
        [](const SlotSchedule& sched, double eps, const ChannelModel& ch, int q_grid,
           double beta, double kappa, bool statement_form) {
          const ConverseResult r = converse_bound(sched, eps, ch, q_grid, beta, kappa,
                                                  statement_form);
          py::dict d;
          d["value"] = r.value;
          d["q_star"] = r.q_star;
          d["beta"] = r.beta;
          d["kappa"] = r.kappa;
          d["stationary"] = r.stationary;
          return d;
        },
        py::arg("schedule"), py::arg("eps"), py::arg("channel"), py::arg("q_grid") = 512,
        py::arg("beta") = -1.0, py::arg("kappa") = -1.0, py::arg("statement_form") = false);
  m.def("second_order_rates",
        [](const SlotSchedule& sched, double eps, const ChannelModel& ch) {
          const RateReport r = second_order_rates(sched, eps, ch);
          py::dict d;
          d["achievable_rate"] = r.achievable_rate;
          d["converse_rate"] = r.converse_rate;
          d["corollary1_rate"] = r.corollary1_rate;
          d["cold_restart_rate"] = r.cold_restart_rate;
          d["capacity"] = r.capacity;
          d["eps_allocation"] = r.eps_allocation;
          d["note"] = r.note;
          return d;
        },
        py::arg("schedule"), py::arg("eps"), py::arg("channel"));
  m.def("phase_curve",
        [](int n, int d, const ChannelModel& ch, double eps, const std::vector<double>& rates,
           bool printed_form) {
          const PhaseCurve c = phase_curve(n, d, ch, eps, rates, printed_form);
          py::dict out;
          out["n"] = c.n;
          out["threshold"] = c.threshold;
          std::vector<double> r, e;
          for (const PhasePoint& pt : c.points) {
            r.push_back(pt.rate);
            e.push_back(pt.epsilon_star);
          }
          out["rate"] = r;
          out["epsilon_star"] = e;
          return out;
        },
        py::arg("n"), py::arg("d"), py::arg("channel"), py::arg("eps") = 0.1, py::arg("rates"),
        py::arg("printed_form") = false);
  m.def("gaussian_tail",
        [](int n, double sigma) {
          const GaussianTail t = gaussian_tail(n, sigma);
          py::dict d;
          d["bound"] = t.bound;
          d["theta_star"] = t.theta_star;
          return d;
        },
        py::arg("n"), py::arg("sigma") = 1.0);

  // trajectory sets
  m.def("first_slot_size",
        [](const SlotSchedule& sched, int M, int resolution_factor, double cap) {
          return enumerate_first_slot(sched, M, resolution_factor, cap).size();
        },
        py::arg("schedule"), py::arg("M"), py::arg("resolution_factor") = 4,
        py::arg("cap") = 1e7);

  // Monte Carlo
  m.def("run_trial",
        [](const SlotSchedule& sched, int M, double p, const ChannelModel& ch, double s,
           std::vector<std::vector<double>> v, uint64_t seed) {
          TargetState state{{s}, std::move(v)};
          return outcome_dict(run_trial(sched, M, p, ch, state, seed));
        },
        py::arg("schedule"), py::arg("M"), py::arg("p"), py::arg("channel"), py::arg("s"),
        py::arg("v"), py::arg("seed"),
        "One end-to-end d=1 search trial; v is one velocity list per slot.");
  m.def("estimate_excess_probability",
        [](const SlotSchedule& sched, int M, double p, const ChannelModel& ch, long long trials,
           uint64_t base_seed, int threads, int resolution_factor, double cap) {
          const TrialContext ctx = make_trial_context(sched, M, p, ch, resolution_factor, cap);
          const PointEstimate est = estimate_excess_probability(
              ctx, trials, base_seed, StateMode::Uniform, {}, threads, false);
          py::dict d;
          d["trials"] = est.trials;
          d["excess_count"] = est.excess_count;
          d["p_hat"] = est.ci.p_hat;
          d["ci_lo"] = est.ci.lo;
          d["ci_hi"] = est.ci.hi;
          d["std_err"] = est.ci.std_err;
          return d;
        },
        py::arg("schedule"), py::arg("M"), py::arg("p"), py::arg("channel"),
        py::arg("trials") = 1000, py::arg("base_seed") = 1, py::arg("threads") = 1,
        py::arg("resolution_factor") = 4, py::arg("cap") = 1e7);
  m.def("wilson_interval",
        [](long long successes, long long trials, double z) {
          const WilsonInterval w = wilson_interval(successes, trials, z);
          py::dict d;
          d["p_hat"] = w.p_hat;
          d["lo"] = w.lo;
          d["hi"] = w.hi;
          d["std_err"] = w.std_err;
          return d;
        },
        py::arg("successes"), py::arg("trials"), py::arg("z") = 1.959963984540054);
}
