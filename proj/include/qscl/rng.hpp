#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace qscl {

// Deterministic byte generator built on SHAKE256 in counter mode. A seeded
// instance reproduces the same stream on every platform; an entropy instance
// is keyed from the OS random source.
class Rng {
 public:
  static Rng seeded(std::uint64_t seed);
  static Rng from_os_entropy();

  Rng(Rng&&) noexcept = default;
  Rng& operator=(Rng&&) noexcept = default;
  Rng(const Rng&) = delete;
  Rng& operator=(const Rng&) = delete;

  void fill(std::span<std::uint8_t> out);
  std::uint8_t next_byte();
  std::uint64_t next_u64();
  // Uniform in [0, bound) by rejection; bound must be nonzero.
  std::uint64_t uniform_below(std::uint64_t bound);
  // Uniform double in [0, 1) with 53 bits of precision.
  double uniform01();

  // Independent child stream; used to give workers their own generator.
  Rng fork(std::uint64_t label);

 private:
  explicit Rng(const std::array<std::uint8_t, 32>& key);
  void refill();

  std::array<std::uint8_t, 32> key_{};
  std::uint64_t counter_ = 0;
  std::vector<std::uint8_t> buffer_;
  std::size_t pos_ = 0;
};

}  // namespace qscl
