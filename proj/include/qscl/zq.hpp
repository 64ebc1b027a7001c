#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qscl/error.hpp"
#include "qscl/rng.hpp"

namespace qscl {

// A prime modulus q with 3 <= q < 2^16.
class Modulus {
 public:
  explicit Modulus(std::uint32_t q);

  std::uint32_t value() const noexcept { return q_; }
  // Bits needed for a canonical representative: ceil(log2 q) for prime q.
  unsigned bits() const noexcept { return static_cast<unsigned>(std::bit_width(q_ - 1)); }
  // Bytes per element in hash encodings and key files.
  unsigned bytes() const noexcept { return (bits() + 7) / 8; }

  std::uint32_t reduce(std::uint64_t x) const noexcept { return static_cast<std::uint32_t>(x % q_); }
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const noexcept {
    const std::uint32_t s = a + b;
    return s >= q_ ? s - q_ : s;
  }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const noexcept {
    return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % q_);
  }

  friend bool operator==(const Modulus&, const Modulus&) = default;

 private:
  std::uint32_t q_;
};

bool is_prime(std::uint32_t x) noexcept;

struct ColumnTag {};
struct RowTag {};

// Fixed-length vector over Z_q. Every element is the canonical representative
// in [0, q). The tag distinguishes column vectors (secrets, signatures) from
// 1 x n row vectors (results of v^T A), so the two never mix silently.
template <class Tag>
class ZqArray {
 public:
  ZqArray(Modulus mod, std::vector<std::uint32_t> elems) : mod_(mod), elems_(std::move(elems)) {
    for (auto e : elems_) {
      if (e >= mod_.value()) throw Error(Errc::InvalidParameter, "element not reduced mod q");
    }
  }

  static ZqArray zeros(Modulus mod, std::size_t len) {
    return ZqArray(mod, std::vector<std::uint32_t>(len, 0));
  }

  // Reduces arbitrary signed integers into [0, q).
  static ZqArray reduce_from(Modulus mod, std::span<const std::int64_t> values) {
    std::vector<std::uint32_t> out;
    out.reserve(values.size());
    const auto q = static_cast<std::int64_t>(mod.value());
    for (auto v : values) out.push_back(static_cast<std::uint32_t>(((v % q) + q) % q));
    return ZqArray(mod, std::move(out));
  }

  const Modulus& modulus() const noexcept { return mod_; }
  std::size_t size() const noexcept { return elems_.size(); }
  std::uint32_t operator[](std::size_t i) const { return elems_[i]; }
  std::span<const std::uint32_t> elements() const noexcept { return elems_; }

  bool is_zero() const noexcept {
    for (auto e : elems_) if (e != 0) return false;
    return true;
  }

  friend bool operator==(const ZqArray&, const ZqArray&) = default;

 private:
  Modulus mod_;
  std::vector<std::uint32_t> elems_;
};

using ZqVec = ZqArray<ColumnTag>;
using ZqRowVec = ZqArray<RowTag>;

// Dense m x n matrix over Z_q, row-major.
class ZqMatrix {
 public:
  ZqMatrix(Modulus mod, std::size_t rows, std::size_t cols, std::vector<std::uint32_t> elems);

  const Modulus& modulus() const noexcept { return mod_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::uint32_t at(std::size_t r, std::size_t c) const { return elems_[r * cols_ + c]; }
  std::span<const std::uint32_t> row(std::size_t r) const {
    return std::span<const std::uint32_t>(elems_).subspan(r * cols_, cols_);
  }
  std::span<const std::uint32_t> elements() const noexcept { return elems_; }

  friend bool operator==(const ZqMatrix&, const ZqMatrix&) = default;

 private:
  Modulus mod_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::uint32_t> elems_;
};

// v^T A: result[j] = sum_i v[i] * A[i][j] mod q.
ZqRowVec row_mul(const ZqVec& v, const ZqMatrix& a);

ZqVec add(const ZqVec& u, const ZqVec& v);
ZqRowVec add(const ZqRowVec& u, const ZqRowVec& v);

ZqVec scalar_mul(std::uint32_t c, const ZqVec& v);
ZqRowVec scalar_mul(std::uint32_t c, const ZqRowVec& v);

// Each element uniform in [0, q) by byte-level rejection sampling.
ZqVec sample_uniform_vec(std::size_t len, Modulus mod, Rng& rng);
ZqMatrix sample_uniform_matrix(std::size_t rows, std::size_t cols, Modulus mod, Rng& rng);
std::uint32_t sample_uniform_element(Modulus mod, Rng& rng);
// Uniform in [1, q).
std::uint32_t sample_nonzero_element(Modulus mod, Rng& rng);

}  // namespace qscl
