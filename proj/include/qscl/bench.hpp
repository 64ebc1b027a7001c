#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qscl/protocol.hpp"

namespace qscl {

struct BenchRow {
  std::string phase;  // sign | verify | batch_verify
  std::size_t n = 0;  // messages processed in one timed run
  double median_ms = 0;
  double p10_ms = 0;
  double p90_ms = 0;
};

struct LinearFit {
  double intercept = 0;  // a
  double slope = 0;      // b
  double r_squared = 0;
};

// Ordinary least squares y = a + b x. Needs at least two distinct x values.
LinearFit fit_affine(std::span<const double> xs, std::span<const double> ys);

// Linear-interpolated percentile of an unsorted sample, p in [0, 100].
double percentile(std::vector<double> sample, double p);

struct BenchReport {
  Profile profile = Profile::Paper123;
  std::size_t repetitions = 0;
  std::vector<BenchRow> rows;
  // Fit of batch_verify median time against N; valid when has_fit.
  bool has_fit = false;
  LinearFit batch_fit;
  std::size_t wire_fixed_bytes = 0;   // broadcast tuple (pid, T, R, sigma)
  std::size_t wire_file_bytes = 0;    // same message as stored in a file, empty payload

  const BenchRow* find(const std::string& phase, std::size_t n) const;
  // Header "phase,N,median_ms,p10_ms,p90_ms" followed by one line per row.
  std::string to_csv() const;
  std::string summary() const;
};

// For every N: times N signatures, N single verifications and one batch
// verification of N messages, `repetitions` times each.
BenchReport bench(Profile profile, std::span<const std::size_t> batch_sizes, std::size_t repetitions,
                  std::uint64_t seed);

}  // namespace qscl
