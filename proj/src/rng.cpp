#include "qscl/rng.hpp"

#include <openssl/evp.h>
#include <openssl/rand.h>

#include <memory>
#include <random>
#include <stdexcept>

namespace qscl {
namespace {

constexpr std::size_t kBlockBytes = 4096;
constexpr char kDomain[] = "qscl-drbg-v1";

void shake256(std::span<const std::uint8_t> in, std::span<std::uint8_t> out) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_shake256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), in.data(), in.size()) != 1 ||
      EVP_DigestFinalXOF(ctx.get(), out.data(), out.size()) != 1) {
    throw std::runtime_error("SHAKE256 failure in Rng");
  }
}

}  // namespace

Rng::Rng(const std::array<std::uint8_t, 32>& key) : key_(key), buffer_(kBlockBytes), pos_(kBlockBytes) {}

Rng Rng::seeded(std::uint64_t seed) {
  std::array<std::uint8_t, 32> key{};
  for (int i = 0; i < 8; ++i) key[i] = static_cast<std::uint8_t>(seed >> (56 - 8 * i));
  return Rng(key);
}

Rng Rng::from_os_entropy() {
  std::array<std::uint8_t, 32> key{};
  if (RAND_bytes(key.data(), static_cast<int>(key.size())) != 1) {
    std::random_device rd;
    for (auto& b : key) b = static_cast<std::uint8_t>(rd());
  }
  // Distinguish from every seeded key, whose upper 24 bytes are zero.
  key[31] |= 0x80;
  return Rng(key);
}

void Rng::refill() {
  std::vector<std::uint8_t> input(kDomain, kDomain + sizeof(kDomain) - 1);
  input.insert(input.end(), key_.begin(), key_.end());
  for (int i = 0; i < 8; ++i) input.push_back(static_cast<std::uint8_t>(counter_ >> (56 - 8 * i)));
  ++counter_;
  shake256(input, buffer_);
  pos_ = 0;
}

void Rng::fill(std::span<std::uint8_t> out) {
  for (auto& b : out) b = next_byte();
}

std::uint8_t Rng::next_byte() {
  if (pos_ == buffer_.size()) refill();
  return buffer_[pos_++];
}

std::uint64_t Rng::next_u64() {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | next_byte();
  return v;
}

std::uint64_t Rng::uniform_below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_below: zero bound");
  // 2^64 mod bound; draws in the final partial block are rejected.
  const std::uint64_t rem = (UINT64_MAX % bound + 1) % bound;
  for (;;) {
    const std::uint64_t v = next_u64();
    if (rem == 0 || v <= UINT64_MAX - rem) return v % bound;
  }
}

double Rng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

Rng Rng::fork(std::uint64_t label) {
  std::array<std::uint8_t, 32> child{};
  fill(child);
  for (int i = 0; i < 8; ++i) child[i] ^= static_cast<std::uint8_t>(label >> (56 - 8 * i));
  return Rng(child);
}

}  // namespace qscl
