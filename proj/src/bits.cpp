#include "qscl/bits.hpp"

#include <stdexcept>

#include "qscl/error.hpp"

namespace qscl {

BitString::BitString(std::size_t nbits) : nbits_(nbits), bytes_((nbits + 7) / 8, 0) {}

BitString::BitString(std::size_t nbits, std::vector<std::uint8_t> bytes) : nbits_(nbits), bytes_(std::move(bytes)) {
  if (bytes_.size() != (nbits_ + 7) / 8) throw Error(Errc::Dimension, "bit string byte count mismatch");
  if (nbits_ % 8 != 0) {
    const auto mask = static_cast<std::uint8_t>(0xFFu >> (nbits_ % 8));
    if (bytes_.back() & mask) throw Error(Errc::InvalidParameter, "bit string has nonzero padding bits");
  }
}

BitString BitString::from_hex(std::size_t nbits, std::string_view hex) {
  return BitString(nbits, qscl::from_hex(hex));
}

bool BitString::bit(std::size_t i) const {
  if (i >= nbits_) throw std::out_of_range("bit index");
  return (bytes_[i / 8] >> (7 - i % 8)) & 1u;
}

void BitString::set_bit(std::size_t i, bool value) {
  if (i >= nbits_) throw std::out_of_range("bit index");
  const auto mask = static_cast<std::uint8_t>(0x80u >> (i % 8));
  if (value) bytes_[i / 8] |= mask;
  else bytes_[i / 8] &= static_cast<std::uint8_t>(~mask);
}

std::string BitString::to_hex() const { return qscl::to_hex(bytes_); }

BitString operator^(const BitString& a, const BitString& b) {
  if (a.nbits_ != b.nbits_) throw Error(Errc::Dimension, "XOR of bit strings with different lengths");
  BitString out(a.nbits_);
  for (std::size_t i = 0; i < out.bytes_.size(); ++i) out.bytes_[i] = a.bytes_[i] ^ b.bytes_[i];
  return out;
}

void BitWriter::write(std::uint64_t value, unsigned width) {
  for (unsigned i = width; i-- > 0;) {
    if (nbits_ % 8 == 0) bytes_.push_back(0);
    if ((value >> i) & 1u) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (nbits_ % 8));
    ++nbits_;
  }
}

void BitWriter::write_bits(const BitString& bits) {
  for (std::size_t i = 0; i < bits.bit_length(); ++i) write(bits.bit(i) ? 1 : 0, 1);
}

void BitWriter::align() { nbits_ = bytes_.size() * 8; }

std::vector<std::uint8_t> BitWriter::take() {
  nbits_ = 0;
  return std::move(bytes_);
}

std::uint64_t BitReader::read(unsigned width) {
  if (!can_read(width)) throw std::out_of_range("BitReader: read past end");
  std::uint64_t v = 0;
  for (unsigned i = 0; i < width; ++i, ++pos_) {
    v = (v << 1) | ((data_[pos_ / 8] >> (7 - pos_ % 8)) & 1u);
  }
  return v;
}

BitString BitReader::read_bits(std::size_t nbits) {
  BitString out(nbits);
  for (std::size_t i = 0; i < nbits; ++i) out.set_bit(i, read(1) != 0);
  return out;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xF]);
  }
  return out;
}

std::vector<std::uint8_t> from_hex(std::string_view hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  if (hex.size() % 2 != 0) throw Error(Errc::BadFormat, "odd-length hex string");
  std::vector<std::uint8_t> out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int hi = nibble(hex[2 * i]);
    const int lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw Error(Errc::BadFormat, "invalid hex digit");
    out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return out;
}

}  // namespace qscl
