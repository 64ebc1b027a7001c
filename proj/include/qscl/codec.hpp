#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qscl/signing.hpp"

namespace qscl {

// Wire layout of a broadcast message, one contiguous big-endian bitstream:
//
//   pid      l bits
//   T        32 bits, unsigned seconds
//   R        n elements x w bits
//   sigma    m elements x w bits
//   <zero padding to the next byte boundary>
//   len      16 bits, payload byte count
//   payload  len bytes
//
// where w = ceil(log2 q) (7 for q = 101). Everything before the padding
// boundary is the fixed portion: 762 bytes for the paper123 profile.
inline constexpr std::size_t kMaxPayload = 0xFFFF;
// Prefix byte for messages stored in files; not part of the broadcast bytes.
inline constexpr std::uint8_t kMessageFileTag = 0xC1;

std::size_t fixed_portion_bits(const SystemParams& params);
std::size_t fixed_portion_bytes(const SystemParams& params);

std::vector<std::uint8_t> encode(const SignedMessage& msg, const SystemParams& params);
SignedMessage decode(std::span<const std::uint8_t> bytes, const SystemParams& params);

std::vector<std::uint8_t> encode_message_file(const SignedMessage& msg, const SystemParams& params);
SignedMessage decode_message_file(std::span<const std::uint8_t> bytes, const SystemParams& params);

}  // namespace qscl
