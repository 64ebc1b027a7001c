#include "qscl/zq.hpp"

#include <string>

namespace qscl {

bool is_prime(std::uint32_t x) noexcept {
  if (x < 2) return false;
  if (x % 2 == 0) return x == 2;
  for (std::uint32_t d = 3; d * d <= x; d += 2) {
    if (x % d == 0) return false;
  }
  return true;
}

Modulus::Modulus(std::uint32_t q) : q_(q) {
  if (q < 3 || q >= (1u << 16) || !is_prime(q)) {
    throw Error(Errc::InvalidParameter, "modulus must be a prime in [3, 65536), got " + std::to_string(q));
  }
}

ZqMatrix::ZqMatrix(Modulus mod, std::size_t rows, std::size_t cols, std::vector<std::uint32_t> elems)
    : mod_(mod), rows_(rows), cols_(cols), elems_(std::move(elems)) {
  if (elems_.size() != rows_ * cols_) throw Error(Errc::Dimension, "matrix element count != rows * cols");
  for (auto e : elems_) {
    if (e >= mod_.value()) throw Error(Errc::InvalidParameter, "matrix element not reduced mod q");
  }
}

namespace {

template <class Tag>
void check_compatible(const ZqArray<Tag>& u, const ZqArray<Tag>& v) {
  if (u.modulus() != v.modulus()) throw Error(Errc::Modulus, "operands use different moduli");
  if (u.size() != v.size()) {
    throw Error(Errc::Dimension, "length " + std::to_string(u.size()) + " vs " + std::to_string(v.size()));
  }
}

template <class Tag>
ZqArray<Tag> add_impl(const ZqArray<Tag>& u, const ZqArray<Tag>& v) {
  check_compatible(u, v);
  const auto& mod = u.modulus();
  std::vector<std::uint32_t> out(u.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = mod.add(u[i], v[i]);
  return ZqArray<Tag>(mod, std::move(out));
}

template <class Tag>
ZqArray<Tag> scalar_mul_impl(std::uint32_t c, const ZqArray<Tag>& v) {
  const auto& mod = v.modulus();
  if (c >= mod.value()) throw Error(Errc::Modulus, "scalar not reduced mod q");
  std::vector<std::uint32_t> out(v.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = mod.mul(c, v[i]);
  return ZqArray<Tag>(mod, std::move(out));
}

}  // namespace

ZqRowVec row_mul(const ZqVec& v, const ZqMatrix& a) {
  if (v.modulus() != a.modulus()) throw Error(Errc::Modulus, "vector and matrix use different moduli");
  if (v.size() != a.rows()) {
    throw Error(Errc::Dimension,
                "vector length " + std::to_string(v.size()) + " vs matrix rows " + std::to_string(a.rows()));
  }
  const auto& mod = a.modulus();
  const std::uint64_t q = mod.value();
  // Each product is below 2^32; fold the accumulators before they can overflow.
  const std::size_t fold_every = static_cast<std::size_t>((UINT64_MAX / ((q - 1) * (q - 1))) - 1);
  std::vector<std::uint64_t> acc(a.cols(), 0);
  std::size_t pending = 0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const std::uint64_t vi = v[i];
    const auto row = a.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) acc[j] += vi * row[j];
    if (++pending == fold_every) {
      for (auto& x : acc) x %= q;
      pending = 0;
    }
  }
  std::vector<std::uint32_t> out(a.cols());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = mod.reduce(acc[j]);
  return ZqRowVec(mod, std::move(out));
}

ZqVec add(const ZqVec& u, const ZqVec& v) { return add_impl(u, v); }
ZqRowVec add(const ZqRowVec& u, const ZqRowVec& v) { return add_impl(u, v); }
ZqVec scalar_mul(std::uint32_t c, const ZqVec& v) { return scalar_mul_impl(c, v); }
ZqRowVec scalar_mul(std::uint32_t c, const ZqRowVec& v) { return scalar_mul_impl(c, v); }

std::uint32_t sample_uniform_element(Modulus mod, Rng& rng) {
  const unsigned nbytes = mod.bytes();
  const std::uint32_t space = 1u << (8 * nbytes);
  const std::uint32_t limit = space - space % mod.value();
  for (;;) {
    std::uint32_t x = 0;
    for (unsigned b = 0; b < nbytes; ++b) x = (x << 8) | rng.next_byte();
    if (x < limit) return x % mod.value();
  }
}

std::uint32_t sample_nonzero_element(Modulus mod, Rng& rng) {
  for (;;) {
    const auto x = sample_uniform_element(mod, rng);
    if (x != 0) return x;
  }
}

ZqVec sample_uniform_vec(std::size_t len, Modulus mod, Rng& rng) {
  std::vector<std::uint32_t> out(len);
  for (auto& e : out) e = sample_uniform_element(mod, rng);
  return ZqVec(mod, std::move(out));
}

ZqMatrix sample_uniform_matrix(std::size_t rows, std::size_t cols, Modulus mod, Rng& rng) {
  std::vector<std::uint32_t> out(rows * cols);
  for (auto& e : out) e = sample_uniform_element(mod, rng);
  return ZqMatrix(mod, rows, cols, std::move(out));
}

}  // namespace qscl
