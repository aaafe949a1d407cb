#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mgs {

struct AsymVarEstimate {
  double gamma0 = 0.0;      ///< lag-0 autocovariance (variance estimate)
  double asym_var = 0.0;    ///< (gamma0 + 2 sum_{k<=M} gamma_k) * thinning_factor
  long truncation_lag = 0;  ///< M
  long thinning_factor = 1; ///< 1 for unthinned traces, n for thinned
  bool clamped = false;     ///< true if a negative estimate was floored at 0
};

/// Autocovariances gamma_0..gamma_maxlag with the 1/N normalization and
/// the sample mean plugged in.  Direct O(N*maxlag) sum.
/// Throws std::invalid_argument if maxlag >= trace length.
std::vector<double> autocovariance(std::span<const double> trace, long maxlag);

/// Same values computed with a zero-padded FFT; used for long traces.
std::vector<double> autocovariance_fft(std::span<const double> trace, long maxlag);

/// Asymptotic variance of the mean estimate from a trace.  The
/// truncation lag M is the first lag at which |gamma_k| < 0.005*gamma_0
/// has held for 5 consecutive lags, capped at N/100.  Negative results
/// are clamped to 0.  Throws if the trace is shorter than 1000.
AsymVarEstimate asymptotic_variance(std::span<const double> trace,
                                    long thinning_factor);

/// Monte Carlo standard error sqrt(asym_var / N).
double mcse(const AsymVarEstimate& est, std::int64_t n_samples);

/// Streaming accumulator for traces too long to store: keeps cross
/// products up to a fixed lag window in a ring buffer.
class StreamingAutocov {
 public:
  explicit StreamingAutocov(long maxlag);
  void add(double x);
  std::int64_t count() const { return n_; }
  long maxlag() const { return maxlag_; }
  /// gamma_0..gamma_maxlag with the same conventions as autocovariance()
  std::vector<double> autocovariances() const;
  AsymVarEstimate asymptotic_variance(long thinning_factor) const;
  double mean() const { return n_ ? sum_ / static_cast<double>(n_) : 0.0; }

 private:
  long maxlag_;
  std::int64_t n_ = 0;
  double sum_ = 0.0;
  std::vector<double> cross_;  // sum of x_t * x_{t+k}
  std::vector<double> head_;   // sum of the first k values, k = 0..maxlag
  std::vector<double> ring_;
};

}  // namespace mgs
