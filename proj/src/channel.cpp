#include "mtsearch/channel.hpp"

#include <cmath>

#include "mtsearch/errors.hpp"
#include "mtsearch/util.hpp"

namespace mtsearch {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454836;  // log(2*pi)

void check_size_function(const SizeFunction& f) {
  if (!std::isfinite(f.a) || !std::isfinite(f.b)) {
    throw ValidationError("channel: size function coefficients must be finite");
  }
  if (f.min_on_unit() <= 0.0) {
    throw ValidationError("channel: size function must be positive on [0, 1]");
  }
}

}  // namespace

ChannelModel ChannelModel::bsc(double zeta, SizeFunction f) {
  check_size_function(f);
  // The crossover zeta*f(q) must stay in (0, 1/2] for every measure; f is
  // affine, so its extremes on [0, 1] sit at the endpoints.
  if (!(zeta > 0.0)) {
    throw ValidationError("channel: zeta must be > 0");
  }
  // snap() forgives float noise in the product at the exact 1/2 boundary
  // (e.g. zeta = 0.2 against f(1) = 2.5).
  if (snap(zeta * f.max_on_unit() - 0.5) > 0.0) {
    throw ValidationError("channel: zeta*f(q) must stay <= 1/2 on [0, 1]");
  }
  ChannelModel ch;
  ch.kind = ChannelKind::Bsc;
  ch.zeta = zeta;
  ch.f = f;
  return ch;
}

ChannelModel ChannelModel::awgn(double sigma, SizeFunction f) {
  check_size_function(f);
  if (!(sigma > 0.0)) {
    throw ValidationError("channel: sigma must be > 0");
  }
  ChannelModel ch;
  ch.kind = ChannelKind::Awgn;
  ch.sigma = sigma;
  ch.f = f;
  return ch;
}

double transition_prob(const ChannelModel& ch, double q, int x, double y) {
  if (ch.kind == ChannelKind::Bsc) {
    const double e = ch.flip_prob(q);
    const int yi = y > 0.5 ? 1 : 0;
    return yi == x ? 1.0 - e : e;
  }
  const double s = ch.noise_std(q);
  const double z = (y - static_cast<double>(x)) / s;
  return std::exp(-0.5 * z * z) / (s * std::sqrt(2.0 * M_PI));
}

double log_transition_prob(const ChannelModel& ch, double q, int x, double y) {
  if (ch.kind == ChannelKind::Bsc) {
    const double e = ch.flip_prob(q);
    const int yi = y > 0.5 ? 1 : 0;
    return std::log(yi == x ? 1.0 - e : e);
  }
  const double s = ch.noise_std(q);
  const double z = (y - static_cast<double>(x)) / s;
  return -0.5 * z * z - std::log(s) - 0.5 * kLogTwoPi;
}

double sample_output(const ChannelModel& ch, double q, int x, CounterRng& rng) {
  if (ch.kind == ChannelKind::Bsc) {
    const bool flip = rng.bernoulli(ch.flip_prob(q));
    return static_cast<double>(flip ? 1 - x : x);
  }
  return static_cast<double>(x) + ch.noise_std(q) * rng.normal();
}

double continuity_constant(const ChannelModel& ch, double u, double xi_max) {
  if (ch.kind != ChannelKind::Bsc) {
    // For a Gaussian density the log-ratio grows without bound in |y - x|, so
    // no finite constant works; only the discrete channel admits one.
    throw ValidationError("continuity constant: defined for the binary channel only");
  }
  if (!(xi_max >= 0.0)) {
    throw ValidationError("continuity constant: xi_max must be >= 0");
  }
  if (u - xi_max <= 0.0) {
    throw ValidationError("continuity constant: state range must stay positive");
  }
  if (ch.zeta * (u + xi_max) >= 1.0) {
    throw ValidationError("continuity constant: crossover must stay below 1");
  }
  // |d/du log(zeta u)| = 1/u and |d/du log(1 - zeta u)| = zeta/(1 - zeta u),
  // each maximized at the far end of the state interval [u-xi, u+xi].
  const double c_hit = 1.0 / (u - xi_max);
  const double c_miss = ch.zeta / (1.0 - ch.zeta * (u + xi_max));
  return std::fmax(c_hit, c_miss);
}

}  // namespace mtsearch
