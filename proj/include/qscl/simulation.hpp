#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qscl/scenario.hpp"
#include "qscl/signing.hpp"

namespace qscl {

enum class Verdict { Accepted, BadSignature, Stale, Duplicate, UnknownSender, Malformed, Dropped };

std::string_view to_string(Verdict v);

struct DeliveryRecord {
  Timestamp at = 0;
  std::string sender;
  std::string receiver;
  StepAction origin = StepAction::Beacon;
  Verdict verdict = Verdict::Accepted;
};

struct SimReport {
  std::uint64_t seed = 0;
  Profile profile = Profile::Toy;
  std::size_t messages_sent = 0;
  std::size_t deliveries = 0;
  std::map<Verdict, std::size_t> verdicts;
  std::map<StepAction, std::map<Verdict, std::size_t>> by_origin;
  std::vector<DeliveryRecord> log;

  std::size_t count(Verdict v) const;
  std::size_t count(StepAction origin, Verdict v) const;
  // Stable text rendering; identical runs produce identical bytes.
  std::string to_text() const;
};

// Road-side unit: verifies broadcasts against the pk directory, the
// freshness policy and a bounded window of accepted (pid, R, T) triples.
class RsuActor {
 public:
  RsuActor(std::string name, FreshnessPolicy policy) : name_(std::move(name)), policy_(policy) {}

  const std::string& name() const noexcept { return name_; }
  void announce(const PseudoId& pid, const ZqRowVec& pk) { directory_.announce(pid, pk); }
  const PublicKeyDirectory& directory() const noexcept { return directory_; }

  Verdict receive(std::span<const std::uint8_t> wire, Timestamp now, const SystemParams& params);
  std::vector<std::uint8_t> serialize_state(const SystemParams& params) const;

 private:
  struct SeenKey {
    PseudoId pid;
    std::vector<std::uint32_t> r;
    friend auto operator<=>(const SeenKey&, const SeenKey&) = default;
  };

  std::string name_;
  FreshnessPolicy policy_;
  PublicKeyDirectory directory_;
  std::deque<SeenKey> seen_order_;
  std::set<SeenKey> seen_;
};

struct VehicleActor {
  std::string name;
  BitString rid;
  std::optional<VehicleCredential> credential;
};

// Single-threaded driver owning the TA, vehicles, RSUs and the in-path
// adversary. Registration uses a direct in-process call as its secure channel.
class Simulation {
 public:
  Simulation(const ScenarioConfig& config, std::uint64_t seed);

  void run_step(const ScenarioStep& step);
  void run_all();
  SimReport report() const { return report_; }

  const SystemParams& params() const noexcept { return ta_->params(); }
  const TrustedAuthority& ta() const noexcept { return *ta_; }
  const std::vector<VehicleActor>& vehicles() const noexcept { return vehicles_; }
  const std::vector<RsuActor>& rsus() const noexcept { return rsus_; }
  Timestamp now() const noexcept { return now_; }

  std::vector<std::uint8_t> serialize_ta_state() const;
  std::vector<std::uint8_t> serialize_vehicle_state(std::size_t index) const;

 private:
  VehicleActor& vehicle(const std::string& name);
  void enroll(VehicleActor& v);
  void broadcast(const std::string& sender, StepAction origin, const std::vector<std::uint8_t>& wire);

  ScenarioConfig config_;
  Rng rng_;
  std::unique_ptr<TrustedAuthority> ta_;
  std::vector<VehicleActor> vehicles_;
  std::vector<RsuActor> rsus_;
  std::map<std::string, std::vector<std::uint8_t>> captured_;
  Timestamp now_ = 0;
  SimReport report_;
};

SimReport run_scenario(const ScenarioConfig& config, std::uint64_t seed);

enum class ForgeryStrategy { RandomSigma, ReplayedSigma, LinearCombination, Mixed };

struct ProbeResult {
  std::size_t attempts = 0;
  std::size_t accepted = 0;
  std::map<ForgeryStrategy, std::size_t> accepted_by_strategy;
};

// Adversary with the public parameters, every announced key and a set of
// observed honest messages, but no secret material, tries `attempts`
// forgeries. Returns how many verify.
ProbeResult impersonation_probe(const SystemParams& params, const PublicKeyDirectory& directory,
                                std::span<const SignedMessage> observed, ForgeryStrategy strategy,
                                std::size_t attempts, Rng& rng);

// True if `needle` occurs as a contiguous subsequence of `haystack`.
bool contains_bytes(std::span<const std::uint8_t> haystack, std::span<const std::uint8_t> needle);

}  // namespace qscl
