#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qscl {

// Fixed-length bit string, most significant bit first. Bits past the length
// in the final byte are always zero, so byte equality is bit equality.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t nbits);
  BitString(std::size_t nbits, std::vector<std::uint8_t> bytes);

  static BitString from_hex(std::size_t nbits, std::string_view hex);

  std::size_t bit_length() const noexcept { return nbits_; }
  std::span<const std::uint8_t> bytes() const noexcept { return bytes_; }

  bool bit(std::size_t i) const;
  void set_bit(std::size_t i, bool value);
  void flip_bit(std::size_t i) { set_bit(i, !bit(i)); }

  std::string to_hex() const;

  friend BitString operator^(const BitString& a, const BitString& b);
  friend bool operator==(const BitString&, const BitString&) = default;
  friend auto operator<=>(const BitString&, const BitString&) = default;

 private:
  std::size_t nbits_ = 0;
  std::vector<std::uint8_t> bytes_;
};

// Big-endian bit packer: values are appended MSB first into a contiguous stream.
class BitWriter {
 public:
  void write(std::uint64_t value, unsigned width);
  void write_bits(const BitString& bits);
  // Zero-pads the stream to the next byte boundary.
  void align();
  std::size_t bit_count() const noexcept { return nbits_; }
  std::vector<std::uint8_t> take();

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t nbits_ = 0;
};

class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> data) : data_(data) {}

  bool can_read(std::size_t nbits) const noexcept { return pos_ + nbits <= data_.size() * 8; }
  // Caller checks can_read first; reading past the end throws std::out_of_range.
  std::uint64_t read(unsigned width);
  BitString read_bits(std::size_t nbits);
  void align() noexcept { pos_ = (pos_ + 7) / 8 * 8; }
  void skip(std::size_t nbits) noexcept { pos_ += nbits; }
  std::size_t bit_position() const noexcept { return pos_; }

 private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

std::string to_hex(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> from_hex(std::string_view hex);

}  // namespace qscl
