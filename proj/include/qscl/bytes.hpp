#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qscl/bits.hpp"
#include "qscl/error.hpp"
#include "qscl/zq.hpp"

namespace qscl {

// Big-endian byte serializer for key files and parameter blobs.
class ByteWriter {
 public:
  ByteWriter& u8(std::uint8_t v) {
    out_.push_back(v);
    return *this;
  }
  ByteWriter& u16(std::uint16_t v) { return uint(v, 2); }
  ByteWriter& u32(std::uint32_t v) { return uint(v, 4); }
  ByteWriter& u64(std::uint64_t v) { return uint(v, 8); }
  ByteWriter& raw(std::span<const std::uint8_t> bytes) {
    out_.insert(out_.end(), bytes.begin(), bytes.end());
    return *this;
  }
  ByteWriter& str(const std::string& s);
  ByteWriter& bits(const BitString& b);
  // Elements only; length and modulus come from the enclosing context.
  ByteWriter& elements(std::span<const std::uint32_t> elems, const Modulus& mod);

  const std::vector<std::uint8_t>& bytes() const noexcept { return out_; }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  ByteWriter& uint(std::uint64_t v, int width) {
    for (int i = width - 1; i >= 0; --i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    return *this;
  }
  std::vector<std::uint8_t> out_;
};

// Reader counterpart; running out of input throws TruncatedMessage and an
// element >= q throws MalformedElement.
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(uint(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(uint(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(uint(4)); }
  std::uint64_t u64() { return uint(8); }
  std::span<const std::uint8_t> raw(std::size_t n);
  std::string str();
  BitString bits(std::size_t nbits);
  std::vector<std::uint32_t> elements(std::size_t count, const Modulus& mod);

  std::size_t remaining() const noexcept { return data_.size() - pos_; }
  std::size_t position() const noexcept { return pos_; }
  void expect_end() const;

 private:
  std::uint64_t uint(int width);
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

}  // namespace qscl
