#include <cctype>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "mtsearch/config.hpp"
#include "mtsearch/errors.hpp"

namespace {

using mtsearch::parse_config;
using mtsearch::RunConfig;
using mtsearch::ValidationError;

bool throws_with(const std::string& json_text, const std::vector<std::string>& overrides,
                 const std::string& needle) {
  try {
    (void)parse_config(json_text, overrides);
  } catch (const ValidationError& ex) {
    return std::string(ex.what()).find(needle) != std::string::npos;
  }
  return false;
}

bool validate_rejects(const std::string& json_text, const std::string& needle) {
  try {
    parse_config(json_text).validate();
  } catch (const ValidationError& ex) {
    return std::string(ex.what()).find(needle) != std::string::npos;
  }
  return false;
}

}  // namespace

TEST_CASE("defaults round-trip through JSON and hashing") {
  const RunConfig direct{};
  const RunConfig parsed = parse_config(mtsearch::default_config_json());
  CHECK(parsed.resolved_json() == direct.resolved_json());
  CHECK(parsed.config_hash() == direct.config_hash());

  // Re-parsing a resolved document is a fixed point.
  const RunConfig again = parse_config(parsed.resolved_json());
  CHECK(again.config_hash() == parsed.config_hash());

  // The hash is a 16-digit lowercase hex string.
  const std::string h = direct.config_hash();
  CHECK(h.size() == 16);
  for (char c : h) {
    CHECK((std::isdigit(static_cast<unsigned char>(c)) || (c >= 'a' && c <= 'f')));
  }

  // Spot-check a few defaults survived the trip.
  CHECK(parsed.sched.ending_times == std::vector<int>{20});
  CHECK(parsed.sched.dimension == 1);
  CHECK(parsed.sched.max_speed == doctest::Approx(0.05));
  CHECK(parsed.channel.kind == mtsearch::ChannelKind::Bsc);
  CHECK(parsed.channel.zeta == doctest::Approx(0.2));
  CHECK(parsed.M == 2);
  CHECK(parsed.p_auto);
  CHECK(parsed.trials == 1000);
  CHECK(parsed.base_seed == 20260816ULL);
  CHECK(parsed.state_mode == "uniform");
}

TEST_CASE("dotted overrides match an edited document") {
  const RunConfig via_set =
      parse_config("", {"channel.zeta=0.15", "design.M=4", "schedule.v_plus=0.02"});
  const RunConfig via_json = parse_config(
      R"({"channel":{"zeta":0.15},"design":{"M":4},"schedule":{"v_plus":0.02}})");
  CHECK(via_set.resolved_json() == via_json.resolved_json());
  CHECK(via_set.config_hash() == via_json.config_hash());
  CHECK(via_set.channel.zeta == doctest::Approx(0.15));
  CHECK(via_set.M == 4);

  // Bare words are treated as strings, so enum-like fields work without quotes.
  const RunConfig awgn_set = parse_config("", {"channel.type=awgn", "channel.sigma=2"});
  const RunConfig awgn_json = parse_config(R"({"channel":{"type":"awgn","sigma":2}})");
  CHECK(awgn_set.config_hash() == awgn_json.config_hash());
  CHECK(awgn_set.channel.kind == mtsearch::ChannelKind::Awgn);
  CHECK(awgn_set.channel.sigma == doctest::Approx(2.0));

  const RunConfig auto_p = parse_config("", {"design.p=auto"});
  CHECK(auto_p.p_auto);
  const RunConfig fixed_p = parse_config("", {"design.p=0.3"});
  CHECK_FALSE(fixed_p.p_auto);
  CHECK(fixed_p.p == doctest::Approx(0.3));

  // Array values parse as JSON.
  const RunConfig multi = parse_config("", {"schedule.n=[4,9]"});
  CHECK(multi.sched.ending_times == std::vector<int>{4, 9});

  // Overrides apply after the document, last writer wins.
  const RunConfig layered =
      parse_config(R"({"design":{"M":3}})", {"design.M=5", "design.M=6"});
  CHECK(layered.M == 6);
}

TEST_CASE("unknown keys are rejected with their path") {
  CHECK(throws_with(R"({"design":{"MM":3}})", {}, "unknown key 'design.MM'"));
  CHECK(throws_with(R"({"bogus":{"x":1}})", {}, "unknown key 'bogus'"));
  CHECK(throws_with("", {"design.bogus=1"}, "unknown key 'design.bogus'"));
  CHECK(throws_with("", {"=3"}, "--set expects key.path=value"));
  CHECK(throws_with("", {"novalue"}, "--set expects key.path=value"));
  CHECK(throws_with("{not json", {}, "invalid JSON"));
  CHECK(throws_with(R"([1,2,3])", {}, "expected an object"));
}

TEST_CASE("typed getters name the offending field") {
  CHECK(throws_with(R"({"channel":{"zeta":"hot"}})", {}, "channel.zeta must be a number"));
  CHECK(throws_with(R"({"design":{"M":2.5}})", {}, "design.M must be an integer"));
  CHECK(throws_with(R"({"bounds":{"statement_form":3}})", {},
                    "bounds.statement_form must be a boolean"));
  CHECK(throws_with(R"({"simulation":{"state_mode":7}})", {},
                    "simulation.state_mode must be a string"));
  CHECK(throws_with(R"({"schedule":{"n":"many"}})", {},
                    "schedule.n must be an integer or an integer array"));
  CHECK(throws_with(R"({"schedule":{"n":[4,0.5]}})", {}, "schedule.n entries must be integers"));
  CHECK(throws_with(R"({"channel":{"type":"fiber"}})", {},
                    "channel.type must be 'bsc' or 'awgn'"));
  CHECK(throws_with(R"({"design":{"p":"best"}})", {}, "design.p must be a number or \"auto\""));
  CHECK(throws_with(R"({"bounds":{"mode":"exact"}})", {},
                    "bounds.mode must be literal, rcu_exact, or gaussian_approx"));
}

TEST_CASE("auto design point resolves to the capacity maximizer") {
  RunConfig cfg = parse_config("");
  REQUIRE(cfg.p_auto);
  cfg.resolve_auto_p();
  CHECK(cfg.p == doctest::Approx(0.23018018362131742).epsilon(1e-9));
  const double first = cfg.p;
  cfg.resolve_auto_p();
  CHECK(cfg.p == first);

  RunConfig fixed = parse_config("", {"design.p=0.4"});
  fixed.resolve_auto_p();
  CHECK(fixed.p == doctest::Approx(0.4));
}

TEST_CASE("hashes are stable and distinguish configs") {
  const RunConfig a = parse_config("");
  const RunConfig b = parse_config("");
  CHECK(a.config_hash() == b.config_hash());

  const char* knobs[] = {"channel.zeta=0.1", "design.M=5",       "simulation.trials=7",
                         "simulation.base_seed=1", "schedule.n=[4,9]", "bounds.eps=0.25"};
  std::vector<std::string> hashes{a.config_hash()};
  for (const char* knob : knobs) {
    hashes.push_back(parse_config("", {knob}).config_hash());
  }
  for (std::size_t i = 0; i < hashes.size(); ++i) {
    for (std::size_t j = i + 1; j < hashes.size(); ++j) {
      CHECK(hashes[i] != hashes[j]);
    }
  }
}

TEST_CASE("validation rejects out-of-range settings") {
  CHECK_NOTHROW(parse_config("").validate());
  CHECK(validate_rejects(R"({"design":{"M":0}})", "design.M must be >= 1"));
  CHECK(validate_rejects(R"({"design":{"p":1.5}})", "design.p must lie in (0, 1)"));
  CHECK(validate_rejects(R"({"design":{"eta":-0.1}})", "design.eta must be >= 0"));
  CHECK(validate_rejects(R"({"design":{"resolution_factor":0}})",
                         "design.resolution_factor must be >= 1"));
  CHECK(validate_rejects(R"({"design":{"cap":0}})", "design.cap must be > 0"));
  CHECK(validate_rejects(R"({"bounds":{"eps":0}})", "bounds.eps must lie in (0, 1)"));
  CHECK(validate_rejects(R"({"bounds":{"q_grid":1}})", "bounds.q_grid must be >= 2"));
  CHECK(validate_rejects(R"({"capacity":{"grid":100}})", "capacity.grid must be >= 101"));
  CHECK(validate_rejects(R"({"simulation":{"trials":0}})", "simulation.trials must be >= 1"));
  CHECK(validate_rejects(R"({"simulation":{"state_mode":"chaotic"}})",
                         "state_mode must be 'uniform' or 'adversarial'"));
  CHECK(validate_rejects(R"({"simulation":{"state_mode":"adversarial"}})",
                         "adversarial mode needs at least one state"));
  CHECK(validate_rejects(R"({"simulation":{"sweep_axis":"q"}})",
                         "sweep_axis must be 'M' or 'n'"));
  CHECK(validate_rejects(R"({"phase":{"n":[]}})", "phase.n must be non-empty"));
  CHECK(validate_rejects(R"({"phase":{"rate_points":1}})", "phase.rate_points must be >= 2"));
  CHECK(validate_rejects(R"({"phase":{"rate_max_mult":0}})", "phase.rate_max_mult must be > 0"));
}

TEST_CASE("scalar and array schedule forms agree") {
  const RunConfig scalar = parse_config(R"({"schedule":{"n":20}})");
  const RunConfig array = parse_config(R"({"schedule":{"n":[20]}})");
  CHECK(scalar.config_hash() == array.config_hash());
  CHECK(scalar.config_hash() == RunConfig{}.config_hash());
}

TEST_CASE("adversarial states survive a round trip") {
  const std::string doc = R"({
    "schedule": {"n": [4, 9], "d": 2, "v_plus": 0.1},
    "simulation": {
      "state_mode": "adversarial",
      "adversarial_states": [
        {"s": [0.3, 0.7], "v": [[0.1, -0.05], [0.0, 0.1]]},
        {"s": [0.5, 0.5], "v": [[0.0, 0.0], [0.05, -0.1]]}
      ]
    }
  })";
  const RunConfig cfg = parse_config(doc);
  CHECK_NOTHROW(cfg.validate());
  REQUIRE(cfg.adversarial_states.size() == 2);
  CHECK(cfg.adversarial_states[0].s == std::vector<double>{0.3, 0.7});
  REQUIRE(cfg.adversarial_states[0].v.size() == 2);
  CHECK(cfg.adversarial_states[0].v[1] == std::vector<double>{0.0, 0.1});

  const RunConfig again = parse_config(cfg.resolved_json());
  CHECK(again.config_hash() == cfg.config_hash());
  CHECK(again.adversarial_states.size() == 2);

  // A state with the wrong dimension fails schedule validation.
  CHECK(validate_rejects(
      R"({"schedule":{"d":2},"simulation":{"state_mode":"adversarial",
          "adversarial_states":[{"s":[0.3],"v":[[0.1]]}]}})",
      "state"));
}
