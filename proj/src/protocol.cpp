#include "qscl/protocol.hpp"

#include <algorithm>
#include <string>

namespace qscl {
namespace {

constexpr std::uint8_t kParamsMagic[4] = {'Q', 'S', 'C', 'P'};
constexpr std::uint8_t kParamsVersion = 1;

}  // namespace

ProfileDims profile_dims(Profile p) {
  switch (p) {
    case Profile::Paper123: return {101, 666, 100, 700};
    case Profile::Toy: return {7, 5, 3, 9};
  }
  throw Error(Errc::InvalidParameter, "unknown profile");
}

std::optional<Profile> parse_profile(std::string_view name) {
  if (name == "paper123") return Profile::Paper123;
  if (name == "toy") return Profile::Toy;
  return std::nullopt;
}

std::string_view profile_name(Profile p) { return p == Profile::Paper123 ? "paper123" : "toy"; }

void SystemParams::validate() const {
  hash.validate();
  if (a.modulus() != hash.q || p_pub.modulus() != hash.q) throw Error(Errc::Modulus, "parameter moduli disagree");
  if (a.rows() == 0 || a.cols() == 0) throw Error(Errc::Dimension, "empty public matrix");
  if (hash.m != a.rows() || hash.n != a.cols()) throw Error(Errc::Dimension, "hash config dims differ from A");
  if (p_pub.size() != a.cols()) throw Error(Errc::Dimension, "P_pub length != n");
}

std::vector<std::uint8_t> serialize_params(const SystemParams& params) {
  ByteWriter w;
  w.raw(kParamsMagic).u8(kParamsVersion);
  w.u16(static_cast<std::uint16_t>(params.q().value()));
  w.u32(static_cast<std::uint32_t>(params.m())).u32(static_cast<std::uint32_t>(params.n()));
  w.u32(static_cast<std::uint32_t>(params.l()));
  w.str(params.hash.xof_name);
  w.elements(params.a.elements(), params.q());
  w.elements(params.p_pub.elements(), params.q());
  return w.take();
}

SystemParams read_params(ByteReader& r) {
  const auto magic = r.raw(4);
  if (!std::equal(magic.begin(), magic.end(), kParamsMagic)) throw Error(Errc::BadFormat, "not a parameter blob");
  if (const auto v = r.u8(); v != kParamsVersion) {
    throw Error(Errc::BadFormat, "unsupported parameter version " + std::to_string(v));
  }
  const Modulus q(r.u16());
  const std::size_t m = r.u32();
  const std::size_t n = r.u32();
  HashConfig hash;
  hash.l = r.u32();
  hash.xof_name = r.str();
  hash.q = q;
  hash.m = m;
  hash.n = n;
  if (m == 0 || n == 0 || m > (1u << 20) || n > (1u << 20)) throw Error(Errc::BadFormat, "implausible dimensions");
  ZqMatrix a(q, m, n, r.elements(m * n, q));
  ZqRowVec p_pub(q, r.elements(n, q));
  SystemParams params{std::move(hash), std::move(a), std::move(p_pub)};
  params.validate();
  return params;
}

SystemParams deserialize_params(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  auto params = read_params(r);
  r.expect_end();
  return params;
}

std::pair<SystemParams, MasterSecret> setup_with_secret(Profile profile, Rng& rng, const ZqVec& d) {
  const auto dims = profile_dims(profile);
  const Modulus q(dims.q);
  if (d.modulus() != q) throw Error(Errc::Modulus, "master secret modulus differs from profile");
  if (d.size() != dims.m) throw Error(Errc::Dimension, "master secret length != m");
  HashConfig hash;
  hash.l = dims.l;
  hash.q = q;
  hash.m = dims.m;
  hash.n = dims.n;
  auto a = sample_uniform_matrix(dims.m, dims.n, q, rng);
  auto p_pub = row_mul(d, a);
  SystemParams params{std::move(hash), std::move(a), std::move(p_pub)};
  return {std::move(params), MasterSecret{d}};
}

std::pair<SystemParams, MasterSecret> setup(Profile profile, Rng& rng) {
  const auto dims = profile_dims(profile);
  const Modulus q(dims.q);
  // A is drawn before d so that a fixed seed pins the matrix independently of the secret.
  auto a = sample_uniform_matrix(dims.m, dims.n, q, rng);
  auto d = sample_uniform_vec(dims.m, q, rng);
  HashConfig hash;
  hash.l = dims.l;
  hash.q = q;
  hash.m = dims.m;
  hash.n = dims.n;
  auto p_pub = row_mul(d, a);
  SystemParams params{std::move(hash), std::move(a), std::move(p_pub)};
  return {std::move(params), MasterSecret{std::move(d)}};
}

PidRequest pid_request_with(const SystemParams& params, const ZqVec& a) {
  return PidRequest{a, row_mul(a, params.a)};
}

PidRequest pid_request(const SystemParams& params, Rng& rng) {
  return pid_request_with(params, sample_uniform_vec(params.m(), params.q(), rng));
}

TrustedAuthority::TrustedAuthority(SystemParams params, MasterSecret secret)
    : params_(std::move(params)), secret_(std::move(secret)) {
  params_.validate();
  if (row_mul(secret_.d, params_.a) != params_.p_pub) {
    throw Error(Errc::InvalidParameter, "P_pub does not match the master secret");
  }
}

TrustedAuthority::TrustedAuthority(SystemParams params, MasterSecret secret, std::vector<RegistrationRecord> records)
    : TrustedAuthority(std::move(params), std::move(secret)) {
  for (auto& rec : records) {
    if (h1(params_.hash, rec.pk1, secret_.d, rec.pid.t) != (rec.pid.pid ^ rec.rid)) {
      throw Error(Errc::InvalidParameter, "registration record inconsistent with master secret");
    }
    if (!by_pid_.emplace(rec.pid, records_.size()).second) {
      throw Error(Errc::DuplicateRegistration, "duplicate pseudonym in registration table");
    }
    records_.push_back(std::move(rec));
  }
}

PseudoId TrustedAuthority::issue_pid(const ZqRowVec& pk1, const BitString& rid, Timestamp now) {
  if (rid.bit_length() != params_.l()) throw Error(Errc::Dimension, "real identity must be l bits");
  for (const auto& rec : records_) {
    if (rec.pid.t == now && rec.rid == rid && rec.pk1 == pk1) {
      throw Error(Errc::DuplicateRegistration, "(pk1, rid, T) already registered");
    }
  }
  PseudoId pid{rid ^ h1(params_.hash, pk1, secret_.d, now), now};
  if (by_pid_.contains(pid)) throw Error(Errc::DuplicateRegistration, "pseudonym collision");
  by_pid_.emplace(pid, records_.size());
  records_.push_back(RegistrationRecord{pk1, pid, rid});
  return pid;
}

const RegistrationRecord& TrustedAuthority::lookup(const PseudoId& pid) const {
  const auto it = by_pid_.find(pid);
  if (it == by_pid_.end()) throw Error(Errc::UnknownPseudonym, "no registration for pseudonym");
  return records_[it->second];
}

PartialSecretKey TrustedAuthority::issue_psk_with(const ZqRowVec& pk1, const PseudoId& pid, const ZqVec& x) {
  const auto it = by_pid_.find(pid);
  if (it == by_pid_.end() || records_[it->second].pk1 != pk1) {
    throw Error(Errc::UnregisteredVehicle, "(pk1, pseudonym) is not registered");
  }
  auto big_x = row_mul(x, params_.a);
  const auto gamma = h2(params_.hash, add(pk1, big_x), pid.t);
  auto psk = add(x, scalar_mul(gamma, secret_.d));
  return PartialSecretKey{std::move(psk), std::move(big_x)};
}

PartialSecretKey TrustedAuthority::issue_psk(const ZqRowVec& pk1, const PseudoId& pid, Rng& rng) {
  return issue_psk_with(pk1, pid, sample_uniform_vec(params_.m(), params_.q(), rng));
}

BitString TrustedAuthority::unmask(const ZqRowVec& pk1, const PseudoId& pid) const {
  return pid.pid ^ h1(params_.hash, pk1, secret_.d, pid.t);
}

BitString TrustedAuthority::trace(const PseudoId& pid) const { return unmask(lookup(pid).pk1, pid); }

bool validate_psk(const SystemParams& params, const ZqRowVec& pk1, const PartialSecretKey& partial,
                  const PseudoId& pid) {
  if (partial.psk.size() != params.m() || partial.x.size() != params.n() || pk1.size() != params.n()) return false;
  if (partial.psk.modulus() != params.q() || partial.x.modulus() != params.q() || pk1.modulus() != params.q()) {
    return false;
  }
  const auto gamma = h2(params.hash, add(pk1, partial.x), pid.t);
  return row_mul(partial.psk, params.a) == add(partial.x, scalar_mul(gamma, params.p_pub));
}

VehicleCredential derive_keys(const SystemParams& params, const ZqVec& a, const ZqRowVec& pk1,
                              const PartialSecretKey& partial, const PseudoId& pid) {
  if (!validate_psk(params, pk1, partial, pid)) {
    throw Error(Errc::InvalidPartialKey, "partial secret key fails the issuance identity");
  }
  auto sk = add(partial.psk, a);
  auto pk = add(pk1, partial.x);
  return VehicleCredential{pid, a, pk1, partial, std::move(sk), std::move(pk)};
}

bool credential_consistent(const SystemParams& params, const VehicleCredential& cred) {
  const auto gamma = h2(params.hash, cred.pk, cred.pid.t);
  return row_mul(cred.sk, params.a) == add(cred.pk, scalar_mul(gamma, params.p_pub));
}

}  // namespace qscl
