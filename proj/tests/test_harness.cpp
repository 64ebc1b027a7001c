#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "qscl/bench.hpp"
#include "qscl/bytes.hpp"
#include "qscl/codec.hpp"
#include "qscl/simulation.hpp"
#include "support.hpp"

using namespace qscl;

namespace {

Errc scenario_code(std::string_view text) {
  try {
    (void)ScenarioConfig::parse(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected ScenarioError for: " << text);
  return Errc::BadFormat;
}

std::string fleet_script(std::string_view profile, int vehicles, std::string_view body) {
  std::ostringstream s;
  s << "profile = " << profile << "\nvehicles = ";
  for (int i = 0; i < vehicles; ++i) s << (i ? ", " : "") << "v" << i;
  s << "\nrsus = rsu1\n";
  for (int i = 0; i < vehicles; ++i) s << "step = 0 register v" << i << "\n";
  s << body;
  return s.str();
}

// Byte image of a secret vector as the key stores write it.
template <class Tag>
std::vector<std::uint8_t> encode_elements(const ZqArray<Tag>& v) {
  ByteWriter w;
  w.elements(v.elements(), v.modulus());
  return w.take();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("scenario parsing") {
  const auto cfg = ScenarioConfig::parse(slurp(QSCL_SCENARIO_DIR "/highway.scn"));
  CHECK(cfg.profile == Profile::Toy);
  CHECK(cfg.policy.max_age == 300);
  CHECK(cfg.vehicles == std::vector<std::string>{"car1", "car2"});
  CHECK(cfg.rsus == std::vector<std::string>{"rsu1"});
  REQUIRE(cfg.steps.size() == 10);
  CHECK(cfg.steps[3].action == StepAction::Beacon);
  CHECK(cfg.steps[3].count == 5);
  CHECK(cfg.steps[3].payload_len == 16);
  CHECK(cfg.steps[2].payload_len == 32);

  const std::string head = "vehicles = a\nrsus = r\n";
  CHECK(scenario_code("bogus = 1\n") == Errc::Scenario);
  CHECK(scenario_code("profile = huge\n") == Errc::Scenario);
  CHECK(scenario_code("vehicles = a\nstep = 0 register a\n") == Errc::Scenario);  // no RSU
  CHECK(scenario_code(head + "step = 0 register b\n") == Errc::Scenario);
  CHECK(scenario_code(head + "step = 5 register a\nstep = 4 beacon a\n") == Errc::Scenario);
  CHECK(scenario_code(head + "step = 0 teleport a\n") == Errc::Scenario);
  CHECK(scenario_code(head + "step = 0 tamper a payload=0\n") == Errc::Scenario);
  CHECK(scenario_code(head + "drop_probability = 1.5\n") == Errc::Scenario);
  CHECK(scenario_code(head + "step = 0 beacon a count=x\n") == Errc::Scenario);
}

TEST_CASE("sample scenario outcome") {
  const auto report = run_scenario(ScenarioConfig::parse(slurp(QSCL_SCENARIO_DIR "/highway.scn")), 11);
  CHECK(report.count(StepAction::Beacon, Verdict::Accepted) == 12);
  CHECK(report.count(StepAction::Tamper, Verdict::BadSignature) + report.count(StepAction::Tamper, Verdict::Accepted) ==
        3);
  CHECK(report.count(StepAction::Replay, Verdict::Duplicate) == 1);
  CHECK(report.count(StepAction::Replay, Verdict::Stale) == 1);
  CHECK(report.count(StepAction::Forge, Verdict::Accepted) <= 4);
  CHECK(report.messages_sent == 21);
}

// Paper size: at TOY size R only takes 343 values, so honest beacons from one
// pseudonym collide in the (pid, R, T) replay window.
TEST_CASE("honest fleet is fully accepted") {
  const auto cfg = ScenarioConfig::parse(fleet_script("paper123", 10, [] {
    std::string s;
    for (int i = 0; i < 10; ++i) s += "step = 5 beacon v" + std::to_string(i) + " count=20\n";
    return s;
  }()));
  const auto report = run_scenario(cfg, 1);
  CHECK(report.messages_sent == 200);
  CHECK(report.count(Verdict::Accepted) == 200);
}

TEST_CASE("tampered beacons are rejected at paper size") {
  const auto cfg = ScenarioConfig::parse(fleet_script("paper123", 2, "step = 1 tamper v0 count=100\nstep = 1 tamper v1 count=100\n"));
  const auto report = run_scenario(cfg, 2);
  CHECK(report.count(StepAction::Tamper, Verdict::BadSignature) >= 190);
}

TEST_CASE("replay handling") {
  SUBCASE("duplicate within the window") {
    const auto report = run_scenario(ScenarioConfig::parse(fleet_script("toy", 1, "step = 1 beacon v0\nstep = 2 replay v0 count=3\n")), 3);
    CHECK(report.count(StepAction::Replay, Verdict::Duplicate) == 3);
  }
  SUBCASE("stale after max_age") {
    const auto report = run_scenario(
        ScenarioConfig::parse("max_age = 60\n" + fleet_script("toy", 1, "step = 1 beacon v0\nstep = 61 replay v0\n")), 3);
    CHECK(report.count(StepAction::Replay, Verdict::Stale) == 1);
  }
  SUBCASE("window eviction lets an old triple through") {
    const auto report = run_scenario(
        ScenarioConfig::parse("replay_window = 1\n" +
                              fleet_script("toy", 1, "step = 1 beacon v0\nstep = 1 replay v0\nstep = 1 beacon v0\n")),
        3);
    CHECK(report.count(StepAction::Replay, Verdict::Duplicate) == 1);
  }
  SUBCASE("forged pseudonym traffic") {
    const auto report = run_scenario(ScenarioConfig::parse(fleet_script("paper123", 1, "step = 1 forge v0 count=50\n")), 3);
    CHECK(report.count(StepAction::Forge, Verdict::BadSignature) == 50);
  }
  SUBCASE("dropped deliveries") {
    const auto report =
        run_scenario(ScenarioConfig::parse("drop_probability = 1\n" + fleet_script("toy", 1, "step = 1 beacon v0 count=5\n")), 3);
    CHECK(report.count(Verdict::Dropped) == 5);
  }
}

TEST_CASE("simulation is deterministic in the seed") {
  const auto cfg = ScenarioConfig::parse(slurp(QSCL_SCENARIO_DIR "/highway.scn"));
  const auto a = run_scenario(cfg, 99).to_text();
  CHECK(a.rfind("sim-report v1", 0) == 0);
  CHECK(a == run_scenario(cfg, 99).to_text());
  CHECK(a != run_scenario(cfg, 100).to_text());
}

TEST_CASE("secrets stay with their owners") {
  const auto cfg = ScenarioConfig::parse(fleet_script("paper123", 3, "step = 1 beacon v0 count=5\nstep = 1 beacon v1 count=5\n"));
  Simulation sim(cfg, 5);
  sim.run_all();
  const auto& params = sim.params();
  const auto d = encode_elements(sim.ta().master_secret().d);
  const auto ta_state = sim.serialize_ta_state();
  REQUIRE(contains_bytes(ta_state, d));

  for (std::size_t i = 0; i < sim.vehicles().size(); ++i) {
    const auto state = sim.serialize_vehicle_state(i);
    CHECK_FALSE(contains_bytes(state, d));
    const auto& cred = *sim.vehicles()[i].credential;
    const auto sk = encode_elements(cred.sk);
    const auto a = encode_elements(cred.a);
    CHECK(contains_bytes(state, sk));
    CHECK_FALSE(contains_bytes(ta_state, sk));
    CHECK_FALSE(contains_bytes(ta_state, a));
    for (const auto& rsu : sim.rsus()) {
      const auto rsu_state = rsu.serialize_state(params);
      CHECK_FALSE(contains_bytes(rsu_state, sk));
      CHECK_FALSE(contains_bytes(rsu_state, a));
      CHECK_FALSE(contains_bytes(rsu_state, d));
    }
  }
}

TEST_CASE("pseudonyms do not repeat across epochs") {
  const auto cfg = ScenarioConfig::parse(fleet_script("paper123", 1, "step = 10 rekey v0\nstep = 20 rekey v0\n"));
  Simulation sim(cfg, 6);
  std::vector<BitString> seen;
  for (const auto& step : cfg.steps) {
    sim.run_step(step);
    const auto& pid = sim.vehicles()[0].credential->pid.pid;
    CHECK(pid != sim.vehicles()[0].rid);
    for (const auto& prev : seen) CHECK(pid != prev);
    seen.push_back(pid);
  }
  CHECK(seen.size() == 3);
}

TEST_CASE("impersonation probe") {
  SUBCASE("toy random sigma stays near the guessing bound") {
    auto rng = Rng::seeded(7);
    auto fleet = test::make_fleet(Profile::Toy, 2, rng);
    PublicKeyDirectory dir;
    for (const auto& c : fleet.creds) dir.announce(c.pid, c.pk);
    const auto r = impersonation_probe(fleet.params, dir, {}, ForgeryStrategy::RandomSigma, 10'000, rng);
    CHECK(r.attempts == 10'000);
    // A uniform sigma matches a fixed target in Z_7^3 with probability 1/343.
    CHECK(r.accepted <= 10'000 / (6 * 6 * 6));
  }
  SUBCASE("paper size with observed traffic") {
    auto rng = Rng::seeded(8);
    auto fleet = test::make_fleet(Profile::Paper123, 2, rng);
    PublicKeyDirectory dir;
    std::vector<SignedMessage> observed;
    for (const auto& c : fleet.creds) {
      dir.announce(c.pid, c.pk);
      for (int i = 0; i < 4; ++i) observed.push_back(make_message(c, test::random_bytes(16, rng), fleet.params, rng));
    }
    CHECK(impersonation_probe(fleet.params, dir, observed, ForgeryStrategy::RandomSigma, 1000, rng).accepted == 0);
    // A replayed sigma verifies exactly when H3 of the altered payload lands on
    // the same delta, which happens with probability 1/(q-1). Expect ~10 in
    // 1000; 25 is past the binomial 1e-4 tail.
    const auto replayed = impersonation_probe(fleet.params, dir, observed, ForgeryStrategy::ReplayedSigma, 1000, rng);
    CHECK(replayed.accepted <= 25);
    CHECK(impersonation_probe(fleet.params, dir, observed, ForgeryStrategy::LinearCombination, 1000, rng).accepted == 0);
    auto mixed = impersonation_probe(fleet.params, dir, observed, ForgeryStrategy::Mixed, 300, rng);
    CHECK(mixed.accepted_by_strategy[ForgeryStrategy::RandomSigma] == 0);
    CHECK(mixed.accepted_by_strategy[ForgeryStrategy::LinearCombination] == 0);
    CHECK(mixed.accepted_by_strategy[ForgeryStrategy::ReplayedSigma] <= 10);
    CHECK(impersonation_probe(fleet.params, dir, observed, ForgeryStrategy::Mixed, 0, rng).attempts == 0);
  }
}

TEST_CASE("contains_bytes") {
  const std::vector<std::uint8_t> hay{1, 2, 3, 4};
  CHECK(contains_bytes(hay, std::vector<std::uint8_t>{2, 3}));
  CHECK_FALSE(contains_bytes(hay, std::vector<std::uint8_t>{3, 2}));
  CHECK_FALSE(contains_bytes(hay, std::vector<std::uint8_t>{1, 2, 3, 4, 5}));
}

TEST_CASE("bench statistics helpers") {
  CHECK(percentile({3, 1, 2}, 50) == doctest::Approx(2));
  CHECK(percentile({1, 2, 3, 4}, 10) == doctest::Approx(1.3));
  CHECK(percentile({5}, 90) == doctest::Approx(5));

  const std::vector<double> xs{1, 2, 3, 4};
  const std::vector<double> ys{3, 5, 7, 9};
  const auto fit = fit_affine(xs, ys);
  CHECK(fit.intercept == doctest::Approx(1));
  CHECK(fit.slope == doctest::Approx(2));
  CHECK(fit.r_squared == doctest::Approx(1));
  const std::vector<double> one{1, 1};
  CHECK_THROWS_AS(fit_affine(one, one), Error);
}

TEST_CASE("bench report") {
  const std::vector<std::size_t> sizes{10, 20, 40};
  SUBCASE("zero repetitions") {
    const auto r = bench(Profile::Toy, sizes, 0, 1);
    CHECK(r.rows.empty());
    CHECK_FALSE(r.has_fit);
  }
  SUBCASE("rows and csv") {
    const auto r = bench(Profile::Paper123, sizes, 3, 1);
    CHECK(r.rows.size() == 9);
    CHECK(r.find("batch_verify", 40) != nullptr);
    CHECK(r.find("batch_verify", 41) == nullptr);
    CHECK(r.wire_fixed_bytes == 762);
    CHECK(r.to_csv().rfind("phase,N,median_ms,p10_ms,p90_ms\n", 0) == 0);
    for (const auto& row : r.rows) {
      CHECK(row.p10_ms <= row.median_ms);
      CHECK(row.median_ms <= row.p90_ms);
    }
  }
  SUBCASE("bad batch size") {
    const std::vector<std::size_t> bad{0};
    CHECK_THROWS_AS(bench(Profile::Toy, bad, 1, 1), Error);
  }
}
