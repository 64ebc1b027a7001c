#include "qscl/signing.hpp"

#include <string>

namespace qscl {
namespace {

void check_message(const SignedMessage& msg, const ZqRowVec& pk, const SystemParams& params) {
  if (msg.sigma.size() != params.m()) throw Error(Errc::Dimension, "sigma length != m");
  if (msg.r.size() != params.n()) throw Error(Errc::Dimension, "R length != n");
  if (pk.size() != params.n()) throw Error(Errc::Dimension, "pk length != n");
  if (msg.pid.pid.bit_length() != params.l()) throw Error(Errc::Dimension, "pseudonym length != l");
  if (msg.sigma.modulus() != params.q() || msg.r.modulus() != params.q() || pk.modulus() != params.q()) {
    throw Error(Errc::Modulus, "message modulus differs from parameters");
  }
}

}  // namespace

Signature sign_with_nonce(const VehicleCredential& cred, std::span<const std::uint8_t> payload,
                          const SystemParams& params, const ZqVec& r) {
  auto big_r = row_mul(r, params.a);
  const auto delta = h3(params.hash, big_r, cred.pid.pid, payload, cred.pid.t);
  auto sigma = add(cred.sk, scalar_mul(delta, r));
  return Signature{std::move(sigma), std::move(big_r)};
}

Signature sign(const VehicleCredential& cred, std::span<const std::uint8_t> payload, const SystemParams& params,
               Rng& rng) {
  return sign_with_nonce(cred, payload, params, sample_uniform_vec(params.m(), params.q(), rng));
}

SignedMessage make_message(const VehicleCredential& cred, std::span<const std::uint8_t> payload,
                           const SystemParams& params, Rng& rng) {
  auto sig = sign(cred, payload, params, rng);
  return SignedMessage{cred.pid, std::move(sig.r), std::move(sig.sigma),
                       std::vector<std::uint8_t>(payload.begin(), payload.end())};
}

bool verify(const SignedMessage& msg, const ZqRowVec& pk, const SystemParams& params) {
  check_message(msg, pk, params);
  const auto gamma = h2(params.hash, pk, msg.pid.t);
  const auto delta = h3(params.hash, msg.r, msg.pid.pid, msg.payload, msg.pid.t);
  const auto lhs = row_mul(msg.sigma, params.a);
  const auto rhs = add(add(pk, scalar_mul(gamma, params.p_pub)), scalar_mul(delta, msg.r));
  return lhs == rhs;
}

bool batch_verify_with(std::span<const SignedMessage> msgs, std::span<const ZqRowVec> pks,
                       const SystemParams& params, std::span<const std::uint32_t> coeffs) {
  if (msgs.empty()) throw Error(Errc::EmptyBatch, "batch verification needs at least one message");
  if (pks.size() != msgs.size() || coeffs.size() != msgs.size()) {
    throw Error(Errc::Dimension, "batch has mismatched message/key/coefficient counts");
  }
  const auto& mod = params.q();
  const std::uint64_t q = mod.value();
  const std::size_t m = params.m();
  const std::size_t n = params.n();

  // Accumulate unreduced sums; each step adds at most 2(q-1)^2 < 2^33, so
  // folding every 2^24 items keeps the u64 accumulators exact.
  constexpr std::size_t kFoldEvery = std::size_t{1} << 24;
  std::vector<std::uint64_t> sigma_acc(m, 0);
  std::vector<std::uint64_t> rhs_acc(n, 0);
  std::uint64_t gamma_acc = 0;

  for (std::size_t i = 0; i < msgs.size(); ++i) {
    const auto& msg = msgs[i];
    const auto& pk = pks[i];
    check_message(msg, pk, params);
    const std::uint64_t b = coeffs[i];
    if (b == 0 || b >= q) throw Error(Errc::InvalidParameter, "batch coefficient must lie in [1, q)");

    const std::uint64_t gamma = h2(params.hash, pk, msg.pid.t);
    const std::uint64_t delta = h3(params.hash, msg.r, msg.pid.pid, msg.payload, msg.pid.t);
    const std::uint64_t b_delta = b * delta % q;
    gamma_acc = (gamma_acc + b * gamma) % q;

    for (std::size_t k = 0; k < m; ++k) sigma_acc[k] += b * msg.sigma[k];
    for (std::size_t j = 0; j < n; ++j) rhs_acc[j] += b * pk[j] + b_delta * msg.r[j];

    if ((i + 1) % kFoldEvery == 0) {
      for (auto& x : sigma_acc) x %= q;
      for (auto& x : rhs_acc) x %= q;
    }
  }

  std::vector<std::uint32_t> sigma(m);
  for (std::size_t k = 0; k < m; ++k) sigma[k] = mod.reduce(sigma_acc[k]);
  const auto lhs = row_mul(ZqVec(mod, std::move(sigma)), params.a);

  std::vector<std::uint32_t> rhs(n);
  for (std::size_t j = 0; j < n; ++j) rhs[j] = mod.reduce(rhs_acc[j] + gamma_acc * params.p_pub[j]);
  return lhs == ZqRowVec(mod, std::move(rhs));
}

bool batch_verify(std::span<const SignedMessage> msgs, std::span<const ZqRowVec> pks, const SystemParams& params,
                  Rng& rng) {
  if (msgs.empty()) throw Error(Errc::EmptyBatch, "batch verification needs at least one message");
  std::vector<std::uint32_t> coeffs(msgs.size());
  for (auto& b : coeffs) b = sample_nonzero_element(params.q(), rng);
  return batch_verify_with(msgs, pks, params, coeffs);
}

}  // namespace qscl
