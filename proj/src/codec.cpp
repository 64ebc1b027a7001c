#include "qscl/codec.hpp"

#include <stdexcept>
#include <string>

namespace qscl {
namespace {

void write_elements(BitWriter& w, std::span<const std::uint32_t> elems, const Modulus& mod) {
  for (auto e : elems) {
    if (e >= mod.value()) throw Error(Errc::EncodingRange, "element " + std::to_string(e) + " >= q");
    w.write(e, mod.bits());
  }
}

std::vector<std::uint32_t> read_elements(BitReader& r, std::size_t count, const Modulus& mod) {
  std::vector<std::uint32_t> out(count);
  for (auto& e : out) {
    e = static_cast<std::uint32_t>(r.read(mod.bits()));
    if (e >= mod.value()) throw Error(Errc::MalformedElement, "element " + std::to_string(e) + " >= q");
  }
  return out;
}

}  // namespace

std::size_t fixed_portion_bits(const SystemParams& params) {
  return params.l() + 32 + (params.n() + params.m()) * params.q().bits();
}

std::size_t fixed_portion_bytes(const SystemParams& params) { return (fixed_portion_bits(params) + 7) / 8; }

std::vector<std::uint8_t> encode(const SignedMessage& msg, const SystemParams& params) {
  if (msg.pid.pid.bit_length() != params.l() || msg.r.size() != params.n() || msg.sigma.size() != params.m()) {
    throw Error(Errc::Dimension, "message dimensions do not match parameters");
  }
  if (msg.payload.size() > kMaxPayload) throw Error(Errc::EncodingRange, "payload longer than 65535 bytes");

  BitWriter w;
  w.write_bits(msg.pid.pid);
  w.write(msg.pid.t, 32);
  write_elements(w, msg.r.elements(), params.q());
  write_elements(w, msg.sigma.elements(), params.q());
  w.align();
  w.write(msg.payload.size(), 16);
  auto out = w.take();
  out.insert(out.end(), msg.payload.begin(), msg.payload.end());
  return out;
}

SignedMessage decode(std::span<const std::uint8_t> bytes, const SystemParams& params) {
  const std::size_t fixed = fixed_portion_bytes(params);
  if (bytes.size() < fixed + 2) throw Error(Errc::TruncatedMessage, "shorter than fixed portion + length");

  BitReader r(bytes.first(fixed));
  auto pid = r.read_bits(params.l());
  const auto t = static_cast<Timestamp>(r.read(32));
  ZqRowVec big_r(params.q(), read_elements(r, params.n(), params.q()));
  ZqVec sigma(params.q(), read_elements(r, params.m(), params.q()));
  const std::size_t pad = fixed * 8 - r.bit_position();
  if (r.read(static_cast<unsigned>(pad)) != 0) throw Error(Errc::MalformedElement, "nonzero padding bits");

  const std::size_t len = static_cast<std::size_t>(bytes[fixed]) << 8 | bytes[fixed + 1];
  const auto rest = bytes.subspan(fixed + 2);
  if (rest.size() < len) throw Error(Errc::TruncatedMessage, "payload shorter than declared length");
  if (rest.size() > len) throw Error(Errc::TrailingBytes, "bytes after payload");

  return SignedMessage{PseudoId{std::move(pid), t}, std::move(big_r), std::move(sigma),
                       std::vector<std::uint8_t>(rest.begin(), rest.end())};
}

std::vector<std::uint8_t> encode_message_file(const SignedMessage& msg, const SystemParams& params) {
  auto body = encode(msg, params);
  body.insert(body.begin(), kMessageFileTag);
  return body;
}

SignedMessage decode_message_file(std::span<const std::uint8_t> bytes, const SystemParams& params) {
  if (bytes.empty()) throw Error(Errc::TruncatedMessage, "empty message file");
  if (bytes[0] != kMessageFileTag) throw Error(Errc::BadFormat, "not a signed-message file");
  return decode(bytes.subspan(1), params);
}

}  // namespace qscl
