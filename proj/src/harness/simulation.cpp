#include "qscl/simulation.hpp"

#include <algorithm>
#include <sstream>

#include "qscl/codec.hpp"
#include "qscl/keystore.hpp"

namespace qscl {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Accepted: return "Accepted";
    case Verdict::BadSignature: return "BadSignature";
    case Verdict::Stale: return "Stale";
    case Verdict::Duplicate: return "Duplicate";
    case Verdict::UnknownSender: return "UnknownSender";
    case Verdict::Malformed: return "Malformed";
    case Verdict::Dropped: return "Dropped";
  }
  return "?";
}

std::size_t SimReport::count(Verdict v) const {
  const auto it = verdicts.find(v);
  return it == verdicts.end() ? 0 : it->second;
}

std::size_t SimReport::count(StepAction origin, Verdict v) const {
  const auto it = by_origin.find(origin);
  if (it == by_origin.end()) return 0;
  const auto jt = it->second.find(v);
  return jt == it->second.end() ? 0 : jt->second;
}

std::string SimReport::to_text() const {
  std::ostringstream out;
  out << "sim-report v1\n";
  out << "seed " << seed << "\n";
  out << "profile " << profile_name(profile) << "\n";
  out << "messages_sent " << messages_sent << "\n";
  out << "deliveries " << deliveries << "\n";
  for (const auto& [v, n] : verdicts) out << "verdict " << to_string(v) << " " << n << "\n";
  for (const auto& [origin, counts] : by_origin) {
    for (const auto& [v, n] : counts) out << "origin " << to_string(origin) << " " << to_string(v) << " " << n << "\n";
  }
  out << "log " << log.size() << "\n";
  for (const auto& rec : log) {
    out << rec.at << " " << rec.sender << " -> " << rec.receiver << " " << to_string(rec.origin) << " "
        << to_string(rec.verdict) << "\n";
  }
  return out.str();
}

Verdict RsuActor::receive(std::span<const std::uint8_t> wire, Timestamp now, const SystemParams& params) {
  std::optional<SignedMessage> msg;
  try {
    msg = decode(wire, params);
  } catch (const Error&) {
    return Verdict::Malformed;
  }
  const auto* pk = directory_.find(msg->pid);
  if (pk == nullptr) return Verdict::UnknownSender;
  if (msg->pid.t > now || now - msg->pid.t > policy_.max_age) return Verdict::Stale;
  if (!verify(*msg, *pk, params)) return Verdict::BadSignature;

  SeenKey key{msg->pid, std::vector<std::uint32_t>(msg->r.elements().begin(), msg->r.elements().end())};
  if (seen_.contains(key)) return Verdict::Duplicate;
  if (policy_.replay_window > 0) {
    seen_.insert(key);
    seen_order_.push_back(std::move(key));
    while (seen_order_.size() > policy_.replay_window) {
      seen_.erase(seen_order_.front());
      seen_order_.pop_front();
    }
  }
  return Verdict::Accepted;
}

std::vector<std::uint8_t> RsuActor::serialize_state(const SystemParams& params) const {
  ByteWriter w;
  w.str(name_).u32(policy_.max_age).u64(policy_.replay_window);
  w.u32(static_cast<std::uint32_t>(directory_.size()));
  for (const auto& [pid, pk] : directory_.entries()) {
    w.bits(pid.pid).u32(pid.t).elements(pk.elements(), params.q());
  }
  w.u32(static_cast<std::uint32_t>(seen_order_.size()));
  for (const auto& k : seen_order_) w.bits(k.pid.pid).u32(k.pid.t).elements(k.r, params.q());
  return w.take();
}

namespace {

BitString random_bits(std::size_t nbits, Rng& rng) {
  BitString out(nbits);
  for (std::size_t i = 0; i < nbits; ++i) out.set_bit(i, rng.next_byte() & 1u);
  return out;
}

std::vector<std::uint8_t> random_payload(std::size_t len, Rng& rng) {
  std::vector<std::uint8_t> out(len);
  rng.fill(out);
  return out;
}

}  // namespace

Simulation::Simulation(const ScenarioConfig& config, std::uint64_t seed) : config_(config), rng_(Rng::seeded(seed)) {
  config_.validate();
  auto [params, secret] = setup(config_.profile, rng_);
  ta_ = std::make_unique<TrustedAuthority>(std::move(params), std::move(secret));
  for (const auto& name : config_.vehicles) {
    vehicles_.push_back(VehicleActor{name, random_bits(ta_->params().l(), rng_), std::nullopt});
  }
  for (const auto& name : config_.rsus) rsus_.emplace_back(name, config_.policy);
  report_.seed = seed;
  report_.profile = config_.profile;
}

VehicleActor& Simulation::vehicle(const std::string& name) {
  for (auto& v : vehicles_) {
    if (v.name == name) return v;
  }
  throw Error(Errc::Scenario, "undeclared vehicle '" + name + "'");
}

void Simulation::enroll(VehicleActor& v) {
  const auto& params = ta_->params();
  auto request = pid_request(params, rng_);
  const auto pid = ta_->issue_pid(request.pk1, v.rid, now_);
  const auto partial = ta_->issue_psk(request.pk1, pid, rng_);
  v.credential = derive_keys(params, request.a, request.pk1, partial, pid);
  for (auto& rsu : rsus_) rsu.announce(v.credential->pid, v.credential->pk);
}

void Simulation::broadcast(const std::string& sender, StepAction origin, const std::vector<std::uint8_t>& wire) {
  ++report_.messages_sent;
  for (auto& rsu : rsus_) {
    Verdict verdict;
    if (config_.drop_probability > 0.0 && rng_.uniform01() < config_.drop_probability) {
      verdict = Verdict::Dropped;
    } else {
      verdict = rsu.receive(wire, now_, ta_->params());
    }
    ++report_.deliveries;
    ++report_.verdicts[verdict];
    ++report_.by_origin[origin][verdict];
    report_.log.push_back(DeliveryRecord{now_, sender, rsu.name(), origin, verdict});
  }
}

void Simulation::run_step(const ScenarioStep& step) {
  if (step.at < now_) throw Error(Errc::Scenario, "clock cannot move backwards");
  now_ = step.at;
  auto& v = vehicle(step.actor);
  const auto& params = ta_->params();

  auto require_credential = [&] {
    if (!v.credential) {
      throw Error(Errc::Scenario, "vehicle '" + v.name + "' must register before " + std::string(to_string(step.action)));
    }
  };

  switch (step.action) {
    case StepAction::Register:
      if (v.credential) throw Error(Errc::Scenario, "vehicle '" + v.name + "' is already registered");
      enroll(v);
      break;
    case StepAction::Rekey:
      require_credential();
      enroll(v);
      break;
    case StepAction::Beacon:
      require_credential();
      for (std::uint32_t i = 0; i < step.count; ++i) {
        const auto msg = make_message(*v.credential, random_payload(step.payload_len, rng_), params, rng_);
        auto wire = encode(msg, params);
        captured_[v.name] = wire;
        broadcast(v.name, StepAction::Beacon, wire);
      }
      break;
    case StepAction::Tamper:
      require_credential();
      for (std::uint32_t i = 0; i < step.count; ++i) {
        const auto msg = make_message(*v.credential, random_payload(step.payload_len, rng_), params, rng_);
        auto wire = encode(msg, params);
        const std::size_t offset = wire.size() - step.payload_len + rng_.uniform_below(step.payload_len);
        wire[offset] ^= static_cast<std::uint8_t>(1u << rng_.uniform_below(8));
        broadcast(v.name, StepAction::Tamper, wire);
      }
      break;
    case StepAction::Replay: {
      const auto it = captured_.find(v.name);
      if (it == captured_.end()) throw Error(Errc::Scenario, "no captured beacon from '" + v.name + "' to replay");
      const auto wire = it->second;
      for (std::uint32_t i = 0; i < step.count; ++i) broadcast(v.name, StepAction::Replay, wire);
      break;
    }
    case StepAction::Forge:
      require_credential();
      for (std::uint32_t i = 0; i < step.count; ++i) {
        auto sigma = sample_uniform_vec(params.m(), params.q(), rng_);
        std::vector<std::uint32_t> r(params.n());
        for (auto& e : r) e = sample_uniform_element(params.q(), rng_);
        const SignedMessage forged{v.credential->pid, ZqRowVec(params.q(), std::move(r)), std::move(sigma),
                                   random_payload(step.payload_len, rng_)};
        broadcast(v.name, StepAction::Forge, encode(forged, params));
      }
      break;
  }
}

void Simulation::run_all() {
  for (const auto& step : config_.steps) run_step(step);
}

std::vector<std::uint8_t> Simulation::serialize_ta_state() const {
  return serialize_store(KeyStore{ta_->params(), TaStore{ta_->master_secret(), std::vector<RegistrationRecord>(
                                                                                   ta_->registrations().begin(),
                                                                                   ta_->registrations().end())}});
}

std::vector<std::uint8_t> Simulation::serialize_vehicle_state(std::size_t index) const {
  const auto& v = vehicles_.at(index);
  ByteWriter w;
  w.str(v.name).bits(v.rid);
  if (v.credential) w.raw(serialize_store(KeyStore{ta_->params(), *v.credential}));
  return w.take();
}

SimReport run_scenario(const ScenarioConfig& config, std::uint64_t seed) {
  Simulation sim(config, seed);
  sim.run_all();
  return sim.report();
}

ProbeResult impersonation_probe(const SystemParams& params, const PublicKeyDirectory& directory,
                                std::span<const SignedMessage> observed, ForgeryStrategy strategy,
                                std::size_t attempts, Rng& rng) {
  ProbeResult result;
  result.attempts = attempts;
  const auto& q = params.q();
  std::vector<std::pair<PseudoId, ZqRowVec>> targets(directory.entries().begin(), directory.entries().end());

  auto random_row = [&] {
    std::vector<std::uint32_t> r(params.n());
    for (auto& e : r) e = sample_uniform_element(q, rng);
    return ZqRowVec(q, std::move(r));
  };

  for (std::size_t i = 0; i < attempts; ++i) {
    ForgeryStrategy s = strategy;
    if (s == ForgeryStrategy::Mixed) s = static_cast<ForgeryStrategy>(i % 3);

    std::optional<SignedMessage> forged;
    switch (s) {
      case ForgeryStrategy::RandomSigma: {
        if (targets.empty()) break;
        const auto& target = targets[rng.uniform_below(targets.size())];
        forged = SignedMessage{target.first, random_row(), sample_uniform_vec(params.m(), q, rng),
                               random_payload(16, rng)};
        break;
      }
      case ForgeryStrategy::ReplayedSigma: {
        if (observed.empty()) break;
        forged = observed[rng.uniform_below(observed.size())];
        if (forged->payload.empty()) {
          forged->payload.push_back(rng.next_byte());
        } else {
          const auto idx = rng.uniform_below(forged->payload.size());
          forged->payload[idx] ^= static_cast<std::uint8_t>(1u << rng.uniform_below(8));
        }
        break;
      }
      case ForgeryStrategy::LinearCombination: {
        if (observed.empty()) break;
        const auto& first = observed[rng.uniform_below(observed.size())];
        const auto& second = observed[rng.uniform_below(observed.size())];
        forged = SignedMessage{first.pid, add(first.r, second.r), add(first.sigma, second.sigma),
                               random_payload(16, rng)};
        break;
      }
      case ForgeryStrategy::Mixed: break;
    }
    if (!forged) continue;
    const auto* pk = directory.find(forged->pid);
    if (pk != nullptr && verify(*forged, *pk, params)) {
      ++result.accepted;
      ++result.accepted_by_strategy[s];
    }
  }
  return result;
}

bool contains_bytes(std::span<const std::uint8_t> haystack, std::span<const std::uint8_t> needle) {
  if (needle.empty()) return true;
  return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) != haystack.end();
}

}  // namespace qscl
