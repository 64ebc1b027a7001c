#include "qscl/bytes.hpp"

namespace qscl {

ByteWriter& ByteWriter::str(const std::string& s) {
  if (s.size() > 255) throw Error(Errc::InvalidParameter, "string too long for one-byte length prefix");
  u8(static_cast<std::uint8_t>(s.size()));
  out_.insert(out_.end(), s.begin(), s.end());
  return *this;
}

ByteWriter& ByteWriter::bits(const BitString& b) { return raw(b.bytes()); }

ByteWriter& ByteWriter::elements(std::span<const std::uint32_t> elems, const Modulus& mod) {
  const int width = static_cast<int>(mod.bytes());
  for (auto e : elems) uint(e, width);
  return *this;
}

std::uint64_t ByteReader::uint(int width) {
  if (remaining() < static_cast<std::size_t>(width)) throw Error(Errc::TruncatedMessage, "unexpected end of input");
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) v = (v << 8) | data_[pos_++];
  return v;
}

std::span<const std::uint8_t> ByteReader::raw(std::size_t n) {
  if (remaining() < n) throw Error(Errc::TruncatedMessage, "unexpected end of input");
  auto out = data_.subspan(pos_, n);
  pos_ += n;
  return out;
}

std::string ByteReader::str() {
  const auto len = u8();
  const auto body = raw(len);
  return std::string(body.begin(), body.end());
}

BitString ByteReader::bits(std::size_t nbits) {
  const auto body = raw((nbits + 7) / 8);
  try {
    return BitString(nbits, std::vector<std::uint8_t>(body.begin(), body.end()));
  } catch (const Error&) {
    throw Error(Errc::MalformedElement, "bit string has nonzero padding");
  }
}

std::vector<std::uint32_t> ByteReader::elements(std::size_t count, const Modulus& mod) {
  const int width = static_cast<int>(mod.bytes());
  if (remaining() / static_cast<std::size_t>(width) < count) {
    throw Error(Errc::TruncatedMessage, "unexpected end of input");
  }
  std::vector<std::uint32_t> out(count);
  for (auto& e : out) {
    e = static_cast<std::uint32_t>(uint(width));
    if (e >= mod.value()) throw Error(Errc::MalformedElement, "element " + std::to_string(e) + " >= q");
  }
  return out;
}

void ByteReader::expect_end() const {
  if (remaining() != 0) throw Error(Errc::TrailingBytes, std::to_string(remaining()) + " unexpected trailing bytes");
}

}  // namespace qscl
