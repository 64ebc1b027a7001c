#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "qscl/bits.hpp"
#include "qscl/bytes.hpp"
#include "qscl/hashing.hpp"
#include "qscl/rng.hpp"
#include "qscl/zq.hpp"

namespace qscl {

// PAPER123 targets 123-bit SIS/ISIS security: q=101, n=100, m=666, l=700.
// TOY is a tiny profile for hand-checkable tests: q=7, n=3, m=5, l=9.
enum class Profile { Paper123, Toy };

struct ProfileDims {
  std::uint32_t q;
  std::size_t m;
  std::size_t n;
  std::size_t l;
};

ProfileDims profile_dims(Profile p);
std::optional<Profile> parse_profile(std::string_view name);
std::string_view profile_name(Profile p);

// Public parameters distributed to every RSU and vehicle.
struct SystemParams {
  HashConfig hash;
  ZqMatrix a;       // m x n
  ZqRowVec p_pub;   // d^T A

  const Modulus& q() const noexcept { return hash.q; }
  std::size_t m() const noexcept { return a.rows(); }
  std::size_t n() const noexcept { return a.cols(); }
  std::size_t l() const noexcept { return hash.l; }

  // Structural consistency only; p_pub == d^T A can be checked by the TA alone.
  void validate() const;

  friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

std::vector<std::uint8_t> serialize_params(const SystemParams& params);
SystemParams deserialize_params(std::span<const std::uint8_t> bytes);
// Reads one parameter blob from the front of `reader`'s remaining input.
SystemParams read_params(ByteReader& reader);

struct MasterSecret {
  ZqVec d;
};

struct PseudoId {
  BitString pid;
  Timestamp t = 0;

  friend bool operator==(const PseudoId&, const PseudoId&) = default;
  friend auto operator<=>(const PseudoId&, const PseudoId&) = default;
};

struct RegistrationRecord {
  ZqRowVec pk1;
  PseudoId pid;
  BitString rid;
};

struct PartialSecretKey {
  ZqVec psk;
  ZqRowVec x;
};

// Vehicle-side output of the first registration step.
struct PidRequest {
  ZqVec a;       // self-chosen secret, never leaves the vehicle
  ZqRowVec pk1;  // a^T A
};

struct VehicleCredential {
  PseudoId pid;
  ZqVec a;
  ZqRowVec pk1;
  PartialSecretKey partial;
  ZqVec sk;     // psk + a
  ZqRowVec pk;  // pk1 + X
};

std::pair<SystemParams, MasterSecret> setup(Profile profile, Rng& rng);
// Same as setup() but with a caller-chosen master secret.
std::pair<SystemParams, MasterSecret> setup_with_secret(Profile profile, Rng& rng, const ZqVec& d);

PidRequest pid_request(const SystemParams& params, Rng& rng);
PidRequest pid_request_with(const SystemParams& params, const ZqVec& a);

// Holder of the master secret and the registration table. Not internally
// synchronized: concurrent issuance must be serialized by the owner.
class TrustedAuthority {
 public:
  TrustedAuthority(SystemParams params, MasterSecret secret);
  // Rebuild from persisted state; verifies p_pub == d^T A.
  TrustedAuthority(SystemParams params, MasterSecret secret, std::vector<RegistrationRecord> records);

  const SystemParams& params() const noexcept { return params_; }
  const MasterSecret& master_secret() const noexcept { return secret_; }
  std::span<const RegistrationRecord> registrations() const noexcept { return records_; }

  // P_ID = RID xor H1(pk1, d, now); appends a registration record.
  PseudoId issue_pid(const ZqRowVec& pk1, const BitString& rid, Timestamp now);

  // psk = x + gamma * d with X = x^T A and gamma = H2(pk1 + X, T).
  PartialSecretKey issue_psk(const ZqRowVec& pk1, const PseudoId& pid, Rng& rng);
  PartialSecretKey issue_psk_with(const ZqRowVec& pk1, const PseudoId& pid, const ZqVec& x);

  // RID = P_ID xor H1(pk1, d, T) for the registered pk1.
  BitString trace(const PseudoId& pid) const;
  // The same unmasking against an explicit pk1, without a table lookup.
  BitString unmask(const ZqRowVec& pk1, const PseudoId& pid) const;

 private:
  const RegistrationRecord& lookup(const PseudoId& pid) const;

  SystemParams params_;
  MasterSecret secret_;
  std::vector<RegistrationRecord> records_;
  std::map<PseudoId, std::size_t> by_pid_;
};

bool validate_psk(const SystemParams& params, const ZqRowVec& pk1, const PartialSecretKey& partial,
                  const PseudoId& pid);

// Throws InvalidPartialKey when validate_psk fails.
VehicleCredential derive_keys(const SystemParams& params, const ZqVec& a, const ZqRowVec& pk1,
                              const PartialSecretKey& partial, const PseudoId& pid);

// Checks sk^T A == pk + gamma * P_pub with gamma = H2(pk, T).
bool credential_consistent(const SystemParams& params, const VehicleCredential& cred);

}  // namespace qscl
