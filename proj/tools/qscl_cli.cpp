// qscl: command-line front end for key lifecycle, signing, verification,
// tracing, scenario runs and benchmarks.
//
// Exit codes: 0 success, 1 verification/trace failure, 2 usage or I/O error.

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qscl/bench.hpp"
#include "qscl/codec.hpp"
#include "qscl/keystore.hpp"
#include "qscl/signing.hpp"
#include "qscl/simulation.hpp"

namespace {

using namespace qscl;

constexpr int kOk = 0;
constexpr int kRejected = 1;
constexpr int kUsage = 2;

struct Options {
  std::string profile = "paper123";
  std::optional<std::uint64_t> seed;
  std::string params, keys, in, out, params_out, pk_out, scenario, rid;
  std::vector<std::string> pks, inputs;
  std::vector<std::size_t> batches{50, 100, 150, 200, 250, 300};
  std::size_t reps = 5;
  std::optional<std::uint32_t> time;
};

Rng make_rng(const Options& o) { return o.seed ? Rng::seeded(*o.seed) : Rng::from_os_entropy(); }

KeyStore load_store(const std::string& path) { return deserialize_store(read_file(path)); }

template <class T>
const T& body_as(const KeyStore& store, const std::string& path, const char* expected) {
  const auto* v = std::get_if<T>(&store.body);
  if (v == nullptr) throw std::runtime_error(path + " is not a " + expected + " store");
  return *v;
}

Timestamp now_or(const Options& o) {
  if (o.time) return *o.time;
  return static_cast<Timestamp>(
      std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch()).count());
}

void save_store(const std::string& path, const KeyStore& store) { write_file(path, serialize_store(store)); }

int cmd_setup(const Options& o) {
  const auto profile = parse_profile(o.profile);
  if (!profile) throw CLI::ValidationError("--profile", "expected paper123 or toy");
  auto rng = make_rng(o);
  auto [params, secret] = setup(*profile, rng);
  save_store(o.out, KeyStore{params, TaStore{std::move(secret), {}}});
  if (!o.params_out.empty()) save_store(o.params_out, KeyStore{params, std::monostate{}});
  std::cout << "setup: profile " << o.profile << ", q=" << params.q().value() << " m=" << params.m()
            << " n=" << params.n() << " l=" << params.l() << "\n";
  return kOk;
}

int cmd_register(const Options& o) {
  auto ta_store = load_store(o.keys);
  auto& ta_state = body_as<TaStore>(ta_store, o.keys, "TA");
  TrustedAuthority ta(ta_store.params, ta_state.secret, ta_state.records);
  auto rng = make_rng(o);

  BitString rid(ta.params().l());
  if (!o.rid.empty()) {
    rid = BitString::from_hex(ta.params().l(), o.rid);
  } else {
    for (std::size_t i = 0; i < rid.bit_length(); ++i) rid.set_bit(i, rng.next_byte() & 1u);
  }
  auto request = pid_request(ta.params(), rng);
  const auto pid = ta.issue_pid(request.pk1, rid, now_or(o));

  save_store(o.out, KeyStore{ta.params(), PendingRegistration{pid, std::move(request)}});
  save_store(o.keys, KeyStore{ta.params(), TaStore{ta.master_secret(), std::vector<RegistrationRecord>(
                                                                          ta.registrations().begin(),
                                                                          ta.registrations().end())}});
  std::cout << "registered: T=" << pid.t << " pid=" << pid.pid.to_hex() << "\n";
  return kOk;
}

int cmd_issue_psk(const Options& o) {
  const auto ta_store = load_store(o.keys);
  const auto& ta_state = body_as<TaStore>(ta_store, o.keys, "TA");
  TrustedAuthority ta(ta_store.params, ta_state.secret, ta_state.records);
  const auto pending_store = load_store(o.in);
  const auto& pending = body_as<PendingRegistration>(pending_store, o.in, "pending registration");
  auto rng = make_rng(o);
  // Only the public half of the request (pk1, pseudonym) is consulted.
  auto partial = ta.issue_psk(pending.request.pk1, pending.pid, rng);
  save_store(o.out, KeyStore{ta.params(), PartialKeyDelivery{pending.pid, std::move(partial)}});
  std::cout << "issued partial key for pid=" << pending.pid.pid.to_hex() << "\n";
  return kOk;
}

int cmd_derive_keys(const Options& o) {
  const auto pending_store = load_store(o.keys);
  const auto& pending = body_as<PendingRegistration>(pending_store, o.keys, "pending registration");
  const auto delivery_store = load_store(o.in);
  const auto& delivery = body_as<PartialKeyDelivery>(delivery_store, o.in, "partial key");
  if (delivery.pid != pending.pid) throw std::runtime_error("partial key was issued for a different pseudonym");
  const auto& params = pending_store.params;
  auto cred = derive_keys(params, pending.request.a, pending.request.pk1, delivery.partial, pending.pid);
  if (!o.pk_out.empty()) save_store(o.pk_out, KeyStore{params, PublicKeyAnnouncement{cred.pid, cred.pk}});
  save_store(o.out, KeyStore{params, std::move(cred)});
  std::cout << "derived full key pair\n";
  return kOk;
}

int cmd_sign(const Options& o) {
  const auto store = load_store(o.keys);
  const auto& cred = body_as<VehicleCredential>(store, o.keys, "vehicle");
  const auto payload = read_file(o.in);
  auto rng = make_rng(o);
  const auto msg = make_message(cred, payload, store.params, rng);
  write_file(o.out, encode_message_file(msg, store.params));
  std::cout << "signed " << payload.size() << " payload bytes\n";
  return kOk;
}

PublicKeyDirectory load_directory(const std::vector<std::string>& paths) {
  PublicKeyDirectory dir;
  for (const auto& path : paths) {
    const auto store = load_store(path);
    if (const auto* ann = std::get_if<PublicKeyAnnouncement>(&store.body)) {
      dir.announce(ann->pid, ann->pk);
    } else if (const auto* cred = std::get_if<VehicleCredential>(&store.body)) {
      dir.announce(cred->pid, cred->pk);
    } else {
      throw std::runtime_error(path + " carries no public key");
    }
  }
  return dir;
}

int reject(const std::string& reason) {
  std::cout << "REJECT: " << reason << "\n";
  return kRejected;
}

int cmd_verify(const Options& o) {
  const auto params = load_store(o.params).params;
  const auto dir = load_directory(o.pks);
  const auto bytes = read_file(o.in);
  std::optional<SignedMessage> msg;
  try {
    msg = decode_message_file(bytes, params);
  } catch (const Error& e) {
    return reject(std::string(to_string(e.code())));
  }
  const auto* pk = dir.find(msg->pid);
  if (pk == nullptr) return reject("UnknownSender");
  if (!verify(*msg, *pk, params)) return reject("BadSignature");
  std::cout << "ACCEPT\n";
  return kOk;
}

int cmd_batch_verify(const Options& o) {
  const auto params = load_store(o.params).params;
  const auto dir = load_directory(o.pks);
  std::vector<SignedMessage> msgs;
  std::vector<ZqRowVec> pks;
  for (const auto& path : o.inputs) {
    try {
      msgs.push_back(decode_message_file(read_file(path), params));
    } catch (const Error& e) {
      return reject(std::string(to_string(e.code())));
    }
    const auto* pk = dir.find(msgs.back().pid);
    if (pk == nullptr) return reject("UnknownSender");
    pks.push_back(*pk);
  }
  auto rng = make_rng(o);
  if (!batch_verify(msgs, pks, params, rng)) return reject("BadSignature");
  std::cout << "ACCEPT\n";
  return kOk;
}

int cmd_trace(const Options& o) {
  const auto ta_store = load_store(o.keys);
  const auto& ta_state = body_as<TaStore>(ta_store, o.keys, "TA");
  TrustedAuthority ta(ta_store.params, ta_state.secret, ta_state.records);
  const auto msg = decode_message_file(read_file(o.in), ta.params());
  try {
    std::cout << "RID " << ta.trace(msg.pid).to_hex() << "\n";
  } catch (const Error& e) {
    if (e.code() != Errc::UnknownPseudonym) throw;
    std::cout << "UNKNOWN: UnknownPseudonym\n";
    return kRejected;
  }
  return kOk;
}

int cmd_simulate(const Options& o) {
  std::ifstream in(o.scenario);
  if (!in) throw std::runtime_error("cannot open " + o.scenario);
  std::stringstream text;
  text << in.rdbuf();
  const auto config = ScenarioConfig::parse(text.str());
  const std::uint64_t seed = o.seed ? *o.seed : Rng::from_os_entropy().next_u64();
  const auto report = run_scenario(config, seed).to_text();
  if (o.out.empty()) {
    std::cout << report;
  } else {
    write_file(o.out, std::span(reinterpret_cast<const std::uint8_t*>(report.data()), report.size()));
  }
  return kOk;
}

int cmd_bench(const Options& o) {
  const auto profile = parse_profile(o.profile);
  if (!profile) throw CLI::ValidationError("--profile", "expected paper123 or toy");
  const std::uint64_t seed = o.seed ? *o.seed : Rng::from_os_entropy().next_u64();
  const auto report = bench(*profile, o.batches, o.reps, seed);
  const auto csv = report.to_csv();
  if (o.out.empty()) {
    std::cout << csv;
  } else {
    write_file(o.out, std::span(reinterpret_cast<const std::uint8_t*>(csv.data()), csv.size()));
  }
  std::cerr << report.summary();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice-based certificateless conditional privacy-preserving authentication for VANETs"};
  app.require_subcommand(1);
  Options o;

  auto seed_opt = [&](CLI::App* c) { c->add_option("--seed", o.seed, "Deterministic seed (default: OS entropy)"); };

  auto* c_setup = app.add_subcommand("setup", "TA: generate system parameters and master secret");
  c_setup->add_option("--profile", o.profile, "paper123 | toy")->check(CLI::IsMember({"paper123", "toy"}));
  c_setup->add_option("--out", o.out, "TA key store")->required();
  c_setup->add_option("--params-out", o.params_out, "Public parameter file");
  seed_opt(c_setup);

  auto* c_register = app.add_subcommand("register", "Vehicle + TA: pseudo-identity generation");
  c_register->add_option("--keys", o.keys, "TA key store (updated in place)")->required();
  c_register->add_option("--rid", o.rid, "Real identity as hex (default: random)");
  c_register->add_option("--time", o.time, "Pseudonym timestamp, seconds (default: now)");
  c_register->add_option("--out", o.out, "Pending vehicle registration")->required();
  seed_opt(c_register);

  auto* c_issue = app.add_subcommand("issue-psk", "TA: issue a partial secret key");
  c_issue->add_option("--keys", o.keys, "TA key store")->required();
  c_issue->add_option("--in", o.in, "Pending vehicle registration")->required();
  c_issue->add_option("--out", o.out, "Partial key delivery")->required();
  seed_opt(c_issue);

  auto* c_derive = app.add_subcommand("derive-keys", "Vehicle: validate the partial key and derive sk/pk");
  c_derive->add_option("--keys", o.keys, "Pending vehicle registration")->required();
  c_derive->add_option("--in", o.in, "Partial key delivery")->required();
  c_derive->add_option("--out", o.out, "Vehicle key store")->required();
  c_derive->add_option("--pk-out", o.pk_out, "Public key announcement");

  auto* c_sign = app.add_subcommand("sign", "Vehicle: sign a payload file");
  c_sign->add_option("--keys", o.keys, "Vehicle key store")->required();
  c_sign->add_option("--in", o.in, "Payload file")->required();
  c_sign->add_option("--out", o.out, "Signed message file")->required();
  seed_opt(c_sign);

  auto* c_verify = app.add_subcommand("verify", "Verify one signed message");
  c_verify->add_option("--params", o.params, "Any key store carrying the system parameters")->required();
  c_verify->add_option("--pk", o.pks, "Public key announcement(s) or vehicle store(s)")->required()->delimiter(',');
  c_verify->add_option("--in", o.in, "Signed message file")->required();

  auto* c_batch = app.add_subcommand("batch-verify", "Batch-verify signed messages");
  c_batch->add_option("--params", o.params, "Any key store carrying the system parameters")->required();
  c_batch->add_option("--pk", o.pks, "Public key announcement(s) or vehicle store(s)")->required()->delimiter(',');
  c_batch->add_option("--in", o.inputs, "Signed message files")->required()->delimiter(',');
  seed_opt(c_batch);

  auto* c_trace = app.add_subcommand("trace", "TA: recover the real identity behind a message");
  c_trace->add_option("--keys", o.keys, "TA key store")->required();
  c_trace->add_option("--in", o.in, "Signed message file")->required();

  auto* c_sim = app.add_subcommand("simulate", "Run a scenario script");
  c_sim->add_option("--scenario", o.scenario, "Scenario file")->required();
  c_sim->add_option("--out", o.out, "Report file (default: stdout)");
  seed_opt(c_sim);

  auto* c_bench = app.add_subcommand("bench", "Time sign / verify / batch verify");
  c_bench->add_option("--profile", o.profile, "paper123 | toy")->check(CLI::IsMember({"paper123", "toy"}));
  c_bench->add_option("--batches", o.batches, "Comma-separated batch sizes")->delimiter(',');
  c_bench->add_option("--reps", o.reps, "Repetitions per batch size");
  c_bench->add_option("--out", o.out, "CSV file (default: stdout)");
  seed_opt(c_bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (c_setup->parsed()) return cmd_setup(o);
    if (c_register->parsed()) return cmd_register(o);
    if (c_issue->parsed()) return cmd_issue_psk(o);
    if (c_derive->parsed()) return cmd_derive_keys(o);
    if (c_sign->parsed()) return cmd_sign(o);
    if (c_verify->parsed()) return cmd_verify(o);
    if (c_batch->parsed()) return cmd_batch_verify(o);
    if (c_trace->parsed()) return cmd_trace(o);
    if (c_sim->parsed()) return cmd_simulate(o);
    if (c_bench->parsed()) return cmd_bench(o);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
