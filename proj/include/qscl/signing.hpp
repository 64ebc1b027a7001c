#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "qscl/protocol.hpp"

namespace qscl {

struct Signature {
  ZqVec sigma;  // sk + delta * r
  ZqRowVec r;   // r^T A
};

// The broadcast tuple (P_ID, T, R, sigma) plus the payload it covers. The
// sender's public key is not carried; verifiers resolve it by pseudonym.
struct SignedMessage {
  PseudoId pid;
  ZqRowVec r;
  ZqVec sigma;
  std::vector<std::uint8_t> payload;

  friend bool operator==(const SignedMessage&, const SignedMessage&) = default;
};

// Verifier-side pseudonym -> public key table, filled from announcements.
class PublicKeyDirectory {
 public:
  void announce(const PseudoId& pid, const ZqRowVec& pk) { keys_.insert_or_assign(pid, pk); }
  const ZqRowVec* find(const PseudoId& pid) const {
    const auto it = keys_.find(pid);
    return it == keys_.end() ? nullptr : &it->second;
  }
  std::size_t size() const noexcept { return keys_.size(); }
  const std::map<PseudoId, ZqRowVec>& entries() const noexcept { return keys_; }

 private:
  std::map<PseudoId, ZqRowVec> keys_;
};

Signature sign(const VehicleCredential& cred, std::span<const std::uint8_t> payload, const SystemParams& params,
               Rng& rng);
// Deterministic variant with a caller-supplied nonce vector r.
Signature sign_with_nonce(const VehicleCredential& cred, std::span<const std::uint8_t> payload,
                          const SystemParams& params, const ZqVec& r);

SignedMessage make_message(const VehicleCredential& cred, std::span<const std::uint8_t> payload,
                           const SystemParams& params, Rng& rng);

// sigma^T A == pk + H2(pk, T) * P_pub + H3(R, P_ID, msg, T) * R.
// Throws DimensionError on a structurally malformed message.
bool verify(const SignedMessage& msg, const ZqRowVec& pk, const SystemParams& params);

// Small-exponent batch test with fresh coefficients b_i uniform in [1, q).
// Throws EmptyBatch on an empty input.
bool batch_verify(std::span<const SignedMessage> msgs, std::span<const ZqRowVec> pks, const SystemParams& params,
                  Rng& rng);
// Same aggregated identity with caller-supplied coefficients (each nonzero mod q).
bool batch_verify_with(std::span<const SignedMessage> msgs, std::span<const ZqRowVec> pks,
                       const SystemParams& params, std::span<const std::uint32_t> coeffs);

}  // namespace qscl
