#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qscl/protocol.hpp"

namespace qscl {

struct FreshnessPolicy {
  std::uint32_t max_age = 300;        // seconds a pseudonym timestamp stays fresh
  std::size_t replay_window = 4096;   // accepted (pid, R, T) triples remembered per RSU
};

enum class StepAction {
  Register,  // P_ID-Gen, psk-Gen, sk-Gen, then announce pk
  Rekey,     // the same for an already registered vehicle: new pseudonym epoch
  Beacon,    // honest signed broadcasts
  Tamper,    // honest broadcasts with one payload bit flipped in transit
  Replay,    // re-delivery of the last captured honest beacon
  Forge,     // random-signature impersonation of the vehicle's pseudonym
};

std::string_view to_string(StepAction a);

struct ScenarioStep {
  Timestamp at = 0;
  StepAction action = StepAction::Beacon;
  std::string actor;
  std::uint32_t count = 1;
  std::size_t payload_len = 32;
};

// Declarative scenario script. Text form, one `key = value` per line, with
// `#` comments:
//
//   profile = toy | paper123
//   max_age = <seconds>
//   replay_window = <count>
//   drop_probability = <0..1>
//   vehicles = v1, v2, ...
//   rsus = r1, ...
//   step = <time> <action> <vehicle> [count=<k>] [payload=<bytes>]
//
// Steps run in file order and their times must not decrease.
struct ScenarioConfig {
  Profile profile = Profile::Toy;
  FreshnessPolicy policy;
  double drop_probability = 0.0;
  std::vector<std::string> vehicles;
  std::vector<std::string> rsus;
  std::vector<ScenarioStep> steps;

  static ScenarioConfig parse(std::string_view text);
  // Throws ScenarioError on undeclared actors, decreasing time, bad knobs.
  void validate() const;
};

}  // namespace qscl
