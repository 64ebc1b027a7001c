#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qscl/bits.hpp"
#include "qscl/zq.hpp"

namespace qscl {

using Timestamp = std::uint32_t;

// Instantiation of the three random oracles. The XOF identifier travels with
// the serialized system parameters so that peers agree on it.
struct HashConfig {
  std::string xof_name = "SHAKE256";
  std::size_t l = 0;        // pseudonym / real-identity bit length
  Modulus q{101};
  std::size_t n = 0;        // row-vector length (pk, R)
  std::size_t m = 0;        // column-vector length (d)

  void validate() const;

  friend bool operator==(const HashConfig&, const HashConfig&) = default;
};

enum class HashTag : std::uint8_t { H1 = 0x01, H2 = 0x02, H3 = 0x03 };

// Canonical oracle input: tag byte, then each field as a 4-byte big-endian
// byte length followed by its content. Z_q elements are big-endian in
// Modulus::bytes() bytes; timestamps are 4-byte big-endian seconds.
class CanonicalEncoder {
 public:
  explicit CanonicalEncoder(HashTag tag) { out_.push_back(static_cast<std::uint8_t>(tag)); }

  template <class Tag>
  CanonicalEncoder& field(const ZqArray<Tag>& v) {
    const unsigned width = v.modulus().bytes();
    begin_field(v.size() * width);
    for (auto e : v.elements()) {
      for (unsigned b = width; b-- > 0;) out_.push_back(static_cast<std::uint8_t>(e >> (8 * b)));
    }
    return *this;
  }
  CanonicalEncoder& field(const BitString& bits);
  CanonicalEncoder& field(std::span<const std::uint8_t> bytes);
  CanonicalEncoder& timestamp(Timestamp t);

  const std::vector<std::uint8_t>& bytes() const noexcept { return out_; }

 private:
  void begin_field(std::size_t len);
  std::vector<std::uint8_t> out_;
};

// Inverse of the framing used by CanonicalEncoder: returns the tag and the
// raw field contents, or throws BadFormat if the framing is inconsistent.
struct DecodedFields {
  std::uint8_t tag = 0;
  std::vector<std::vector<std::uint8_t>> fields;
};
DecodedFields split_canonical(std::span<const std::uint8_t> encoded);

// Raw XOF output of the configured hash over `input`.
std::vector<std::uint8_t> xof(const std::string& xof_name, std::span<const std::uint8_t> input, std::size_t out_len);

// Maps an XOF stream to Z_q^*: consecutive Modulus::bits()-wide chunks,
// rejecting chunks that are zero or >= q.
std::uint32_t xof_to_nonzero(const HashConfig& cfg, std::span<const std::uint8_t> input);

// H1(pk1, d, T) -> {0,1}^l
BitString h1(const HashConfig& cfg, const ZqRowVec& pk1, const ZqVec& d, Timestamp t);
// H2(pk, T) -> Z_q^*
std::uint32_t h2(const HashConfig& cfg, const ZqRowVec& pk, Timestamp t);
// H3(R, P_ID, msg, T) -> Z_q^*
std::uint32_t h3(const HashConfig& cfg, const ZqRowVec& r, const BitString& pid, std::span<const std::uint8_t> msg,
                 Timestamp t);

}  // namespace qscl
