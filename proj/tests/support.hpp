#pragma once

#include <boost/math/distributions/chi_squared.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qscl/protocol.hpp"
#include "qscl/signing.hpp"

namespace qscl::test {

// Plain-integer reference arithmetic, deliberately independent of the
// library's accumulation strategy.
inline std::vector<std::int64_t> naive_row_mul(const std::vector<std::int64_t>& v,
                                               const std::vector<std::vector<std::int64_t>>& a, std::int64_t q) {
  std::vector<std::int64_t> out(a.empty() ? 0 : a[0].size(), 0);
  for (std::size_t j = 0; j < out.size(); ++j) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * a[i][j];
    out[j] = ((s % q) + q) % q;
  }
  return out;
}

inline std::vector<std::int64_t> naive_add(const std::vector<std::int64_t>& u, const std::vector<std::int64_t>& v,
                                           std::int64_t q) {
  std::vector<std::int64_t> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = (u[i] + v[i]) % q;
  return out;
}

inline std::vector<std::int64_t> naive_scale(std::int64_t c, const std::vector<std::int64_t>& v, std::int64_t q) {
  std::vector<std::int64_t> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = c * v[i] % q;
  return out;
}

template <class Tag>
std::vector<std::int64_t> ints(const ZqArray<Tag>& v) {
  return std::vector<std::int64_t>(v.elements().begin(), v.elements().end());
}

inline std::vector<std::vector<std::int64_t>> ints(const ZqMatrix& a) {
  std::vector<std::vector<std::int64_t>> out(a.rows(), std::vector<std::int64_t>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out[i][j] = a.at(i, j);
  return out;
}

// Upper-tail p-value of Pearson's chi-squared statistic for uniform counts.
inline double chi_squared_uniform_p(const std::vector<std::size_t>& counts) {
  std::size_t total = 0;
  for (auto c : counts) total += c;
  const double expected = static_cast<double>(total) / static_cast<double>(counts.size());
  double stat = 0;
  for (auto c : counts) stat += (static_cast<double>(c) - expected) * (static_cast<double>(c) - expected) / expected;
  boost::math::chi_squared dist(static_cast<double>(counts.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

inline BitString random_rid(std::size_t l, Rng& rng) {
  BitString rid(l);
  for (std::size_t i = 0; i < l; ++i) rid.set_bit(i, rng.next_byte() & 1u);
  return rid;
}

// A TA plus `count` registered vehicles, all from one seeded stream.
struct Fleet {
  SystemParams params;
  TrustedAuthority ta;
  std::vector<VehicleCredential> creds;
  std::vector<BitString> rids;
};

inline Fleet make_fleet(Profile profile, std::size_t count, Rng& rng, Timestamp t = 1000) {
  auto [params, secret] = setup(profile, rng);
  Fleet fleet{params, TrustedAuthority(params, std::move(secret)), {}, {}};
  for (std::size_t i = 0; i < count; ++i) {
    auto req = pid_request(fleet.params, rng);
    auto rid = random_rid(fleet.params.l(), rng);
    std::optional<PseudoId> pid;
    while (!pid) {
      // TOY pseudonyms are 9 bits and collide; the TA refuses, so redraw.
      try {
        pid = fleet.ta.issue_pid(req.pk1, rid, t);
      } catch (const Error& e) {
        if (e.code() != Errc::DuplicateRegistration) throw;
        rid = random_rid(fleet.params.l(), rng);
      }
    }
    const auto partial = fleet.ta.issue_psk(req.pk1, *pid, rng);
    fleet.creds.push_back(derive_keys(fleet.params, req.a, req.pk1, partial, *pid));
    fleet.rids.push_back(std::move(rid));
  }
  return fleet;
}

inline std::vector<std::uint8_t> random_bytes(std::size_t n, Rng& rng) {
  std::vector<std::uint8_t> out(n);
  rng.fill(out);
  return out;
}

}  // namespace qscl::test
