#include "qscl/hashing.hpp"

#include <openssl/evp.h>

#include <memory>

namespace qscl {

void HashConfig::validate() const {
  if (xof_name != "SHAKE256" && xof_name != "SHAKE128") {
    throw Error(Errc::InvalidParameter, "unsupported XOF '" + xof_name + "'");
  }
  if (l == 0) throw Error(Errc::InvalidParameter, "pseudonym length l must be positive");
}

void CanonicalEncoder::begin_field(std::size_t len) {
  if (len > UINT32_MAX) throw Error(Errc::InvalidParameter, "field too long for canonical encoding");
  for (int i = 3; i >= 0; --i) out_.push_back(static_cast<std::uint8_t>(len >> (8 * i)));
}

CanonicalEncoder& CanonicalEncoder::field(const BitString& bits) {
  begin_field(bits.bytes().size());
  out_.insert(out_.end(), bits.bytes().begin(), bits.bytes().end());
  return *this;
}

CanonicalEncoder& CanonicalEncoder::field(std::span<const std::uint8_t> bytes) {
  begin_field(bytes.size());
  out_.insert(out_.end(), bytes.begin(), bytes.end());
  return *this;
}

CanonicalEncoder& CanonicalEncoder::timestamp(Timestamp t) {
  begin_field(4);
  for (int i = 3; i >= 0; --i) out_.push_back(static_cast<std::uint8_t>(t >> (8 * i)));
  return *this;
}

DecodedFields split_canonical(std::span<const std::uint8_t> encoded) {
  if (encoded.empty()) throw Error(Errc::BadFormat, "empty canonical encoding");
  DecodedFields out;
  out.tag = encoded[0];
  std::size_t pos = 1;
  while (pos < encoded.size()) {
    if (encoded.size() - pos < 4) throw Error(Errc::BadFormat, "truncated field length");
    std::size_t len = 0;
    for (int i = 0; i < 4; ++i) len = (len << 8) | encoded[pos++];
    if (encoded.size() - pos < len) throw Error(Errc::BadFormat, "truncated field body");
    out.fields.emplace_back(encoded.begin() + static_cast<std::ptrdiff_t>(pos),
                            encoded.begin() + static_cast<std::ptrdiff_t>(pos + len));
    pos += len;
  }
  return out;
}

std::vector<std::uint8_t> xof(const std::string& xof_name, std::span<const std::uint8_t> input, std::size_t out_len) {
  const EVP_MD* md = nullptr;
  if (xof_name == "SHAKE256") md = EVP_shake256();
  else if (xof_name == "SHAKE128") md = EVP_shake128();
  else throw Error(Errc::InvalidParameter, "unsupported XOF '" + xof_name + "'");

  std::vector<std::uint8_t> out(out_len);
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), md, nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), input.data(), input.size()) != 1 ||
      EVP_DigestFinalXOF(ctx.get(), out.data(), out.size()) != 1) {
    throw std::runtime_error("XOF evaluation failed");
  }
  return out;
}

std::uint32_t xof_to_nonzero(const HashConfig& cfg, std::span<const std::uint8_t> input) {
  const unsigned width = cfg.q.bits();
  const std::uint32_t q = cfg.q.value();
  // An XOF output is a prefix of every longer output, so growing the
  // squeeze length and resuming at the same bit offset reads one stream.
  std::size_t out_len = 64;
  std::size_t bit_pos = 0;
  for (;;) {
    const auto stream = xof(cfg.xof_name, input, out_len);
    BitReader reader(stream);
    reader.skip(bit_pos);
    while (reader.can_read(width)) {
      const auto chunk = static_cast<std::uint32_t>(reader.read(width));
      bit_pos += width;
      if (chunk != 0 && chunk < q) return chunk;
    }
    out_len *= 2;
  }
}

namespace {

void check_row(const HashConfig& cfg, const ZqRowVec& v, const char* what) {
  if (v.modulus() != cfg.q) throw Error(Errc::Modulus, std::string(what) + " modulus differs from hash config");
  if (cfg.n != 0 && v.size() != cfg.n) throw Error(Errc::Dimension, std::string(what) + " has wrong length");
}

}  // namespace

BitString h1(const HashConfig& cfg, const ZqRowVec& pk1, const ZqVec& d, Timestamp t) {
  check_row(cfg, pk1, "pk1");
  if (d.modulus() != cfg.q) throw Error(Errc::Modulus, "d modulus differs from hash config");
  if (cfg.m != 0 && d.size() != cfg.m) throw Error(Errc::Dimension, "d has wrong length");
  CanonicalEncoder enc(HashTag::H1);
  enc.field(pk1).field(d).timestamp(t);
  auto stream = xof(cfg.xof_name, enc.bytes(), (cfg.l + 7) / 8);
  if (cfg.l % 8 != 0) stream.back() &= static_cast<std::uint8_t>(0xFFu << (8 - cfg.l % 8));
  return BitString(cfg.l, std::move(stream));
}

std::uint32_t h2(const HashConfig& cfg, const ZqRowVec& pk, Timestamp t) {
  check_row(cfg, pk, "pk");
  CanonicalEncoder enc(HashTag::H2);
  enc.field(pk).timestamp(t);
  return xof_to_nonzero(cfg, enc.bytes());
}

std::uint32_t h3(const HashConfig& cfg, const ZqRowVec& r, const BitString& pid, std::span<const std::uint8_t> msg,
                 Timestamp t) {
  check_row(cfg, r, "R");
  if (pid.bit_length() != cfg.l) throw Error(Errc::Dimension, "pseudonym has wrong bit length");
  CanonicalEncoder enc(HashTag::H3);
  enc.field(r).field(pid).field(msg).timestamp(t);
  return xof_to_nonzero(cfg, enc.bytes());
}

}  // namespace qscl
