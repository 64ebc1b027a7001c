#include "qscl/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "qscl/codec.hpp"
#include "qscl/signing.hpp"

namespace qscl {

LinearFit fit_affine(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw Error(Errc::InvalidParameter, "fit needs >= 2 paired points");
  const auto n = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0) throw Error(Errc::InvalidParameter, "fit needs distinct x values");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

double percentile(std::vector<double> sample, double p) {
  if (sample.empty()) throw Error(Errc::InvalidParameter, "percentile of empty sample");
  std::sort(sample.begin(), sample.end());
  const double rank = std::clamp(p, 0.0, 100.0) / 100.0 * static_cast<double>(sample.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = static_cast<std::size_t>(std::ceil(rank));
  return sample[lo] + (sample[hi] - sample[lo]) * (rank - static_cast<double>(lo));
}

const BenchRow* BenchReport::find(const std::string& phase, std::size_t n) const {
  for (const auto& r : rows) {
    if (r.phase == phase && r.n == n) return &r;
  }
  return nullptr;
}

std::string BenchReport::to_csv() const {
  std::ostringstream out;
  out << "phase,N,median_ms,p10_ms,p90_ms\n";
  out << std::fixed << std::setprecision(4);
  for (const auto& r : rows) {
    out << r.phase << ',' << r.n << ',' << r.median_ms << ',' << r.p10_ms << ',' << r.p90_ms << '\n';
  }
  return out.str();
}

std::string BenchReport::summary() const {
  std::ostringstream out;
  out << "profile " << profile_name(profile) << ", repetitions " << repetitions << "\n";
  out << "wire: broadcast tuple " << wire_fixed_bytes << " bytes, file form (empty payload) " << wire_file_bytes
      << " bytes\n";
  if (has_fit) {
    out << std::setprecision(6) << "batch_verify fit: " << batch_fit.intercept << " + " << batch_fit.slope
        << " * N ms (R^2 = " << batch_fit.r_squared << ")\n";
  }
  return out.str();
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

BenchRow summarize(std::string phase, std::size_t n, const std::vector<double>& times) {
  return BenchRow{std::move(phase), n, percentile(times, 50), percentile(times, 10), percentile(times, 90)};
}

}  // namespace

BenchReport bench(Profile profile, std::span<const std::size_t> batch_sizes, std::size_t repetitions,
                  std::uint64_t seed) {
  for (const auto n : batch_sizes) {
    if (n == 0) throw Error(Errc::InvalidParameter, "batch sizes must be positive");
  }
  BenchReport report;
  report.profile = profile;
  report.repetitions = repetitions;

  Rng rng = Rng::seeded(seed);
  auto [params, secret] = setup(profile, rng);
  TrustedAuthority ta(params, std::move(secret));

  constexpr std::size_t kVehicles = 8;
  std::vector<VehicleCredential> fleet;
  for (std::size_t i = 0; i < kVehicles; ++i) {
    auto req = pid_request(params, rng);
    BitString rid(params.l());
    for (std::size_t b = 0; b < rid.bit_length(); ++b) rid.set_bit(b, rng.next_byte() & 1u);
    const auto pid = ta.issue_pid(req.pk1, rid, 1000);
    const auto partial = ta.issue_psk(req.pk1, pid, rng);
    fleet.push_back(derive_keys(params, req.a, req.pk1, partial, pid));
  }

  {
    SignedMessage empty = make_message(fleet[0], {}, params, rng);
    report.wire_fixed_bytes = fixed_portion_bytes(params);
    report.wire_file_bytes = encode_message_file(empty, params).size();
  }
  if (repetitions == 0 || batch_sizes.empty()) return report;

  const std::size_t max_n = *std::max_element(batch_sizes.begin(), batch_sizes.end());
  std::vector<std::vector<std::uint8_t>> payloads(max_n, std::vector<std::uint8_t>(32));
  for (auto& p : payloads) rng.fill(p);

  std::vector<SignedMessage> msgs;
  std::vector<ZqRowVec> pks;
  for (std::size_t i = 0; i < max_n; ++i) {
    const auto& cred = fleet[i % kVehicles];
    msgs.push_back(make_message(cred, payloads[i], params, rng));
    pks.push_back(cred.pk);
  }

  std::vector<double> batch_x, batch_y;
  for (const auto n : batch_sizes) {
    std::vector<double> sign_t, verify_t, batch_t;
    const std::span<const SignedMessage> batch(msgs.data(), n);
    const std::span<const ZqRowVec> batch_pks(pks.data(), n);
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
      auto start = Clock::now();
      for (std::size_t i = 0; i < n; ++i) {
        const auto sig = sign(fleet[i % kVehicles], payloads[i], params, rng);
        if (sig.sigma.size() != params.m()) throw std::logic_error("bench: bad signature shape");
      }
      sign_t.push_back(elapsed_ms(start));

      start = Clock::now();
      std::size_t ok = 0;
      for (std::size_t i = 0; i < n; ++i) ok += verify(batch[i], batch_pks[i], params) ? 1 : 0;
      verify_t.push_back(elapsed_ms(start));
      if (ok != n) throw std::logic_error("bench: honest signature rejected");

      start = Clock::now();
      const bool batch_ok = batch_verify(batch, batch_pks, params, rng);
      batch_t.push_back(elapsed_ms(start));
      if (!batch_ok) throw std::logic_error("bench: honest batch rejected");
    }
    report.rows.push_back(summarize("sign", n, sign_t));
    report.rows.push_back(summarize("verify", n, verify_t));
    report.rows.push_back(summarize("batch_verify", n, batch_t));
    batch_x.push_back(static_cast<double>(n));
    batch_y.push_back(report.rows.back().median_ms);
  }

  std::vector<double> distinct = batch_x;
  std::sort(distinct.begin(), distinct.end());
  if (std::unique(distinct.begin(), distinct.end()) - distinct.begin() >= 2) {
    report.batch_fit = fit_affine(batch_x, batch_y);
    report.has_fit = true;
  }
  return report;
}

}  // namespace qscl
