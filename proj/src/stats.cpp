#include "mgs/stats.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace mgs {

namespace {

// fftw plan creation/destruction is not thread-safe
std::mutex fftw_mutex;

double mean_of(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

long truncation_lag(const std::vector<double>& gamma, long cap) {
  const double g0 = gamma[0];
  if (g0 <= 0.0) return 0;
  const double thresh = 0.005 * g0;
  int quiet = 0;
  for (long k = 1; k <= cap; k++) {
    if (std::abs(gamma[k]) < thresh) {
      quiet++;
      if (quiet >= 5) return k;
    } else {
      quiet = 0;
    }
  }
  return cap;
}

AsymVarEstimate estimate_from_gammas(const std::vector<double>& gamma, long cap,
                                     long thinning_factor) {
  AsymVarEstimate est;
  est.gamma0 = gamma[0];
  est.thinning_factor = thinning_factor;
  est.truncation_lag = truncation_lag(gamma, cap);
  // half weight on the final lag, so estimates of strongly antithetic
  // (alternating-sign) traces do not depend on the parity of the cap
  double v = gamma[0];
  for (long k = 1; k < est.truncation_lag; k++) v += 2.0 * gamma[k];
  if (est.truncation_lag >= 1) v += gamma[est.truncation_lag];
  v *= static_cast<double>(thinning_factor);
  if (v < 0.0) {
    est.clamped = true;
    v = 0.0;
  }
  est.asym_var = v;
  return est;
}

}  // namespace

std::vector<double> autocovariance(std::span<const double> trace, long maxlag) {
  const long n = static_cast<long>(trace.size());
  if (maxlag >= n) throw std::invalid_argument("maxlag must be below trace length");
  const double mu = mean_of(trace);
  std::vector<double> gamma(maxlag + 1, 0.0);
  for (long k = 0; k <= maxlag; k++) {
    double s = 0.0;
    for (long t = 0; t + k < n; t++)
      s += (trace[t] - mu) * (trace[t + k] - mu);
    gamma[k] = s / static_cast<double>(n);
  }
  return gamma;
}

std::vector<double> autocovariance_fft(std::span<const double> trace, long maxlag) {
  const long n = static_cast<long>(trace.size());
  if (maxlag >= n) throw std::invalid_argument("maxlag must be below trace length");
  const double mu = mean_of(trace);
  // zero-pad so circular correlation has no wrap-around up to maxlag
  long len = 1;
  while (len < n + maxlag + 1) len <<= 1;
  std::vector<double> in(len, 0.0);
  for (long t = 0; t < n; t++) in[t] = trace[t] - mu;
  std::vector<fftw_complex> freq(len / 2 + 1);
  std::vector<double> out(len);
  fftw_plan fwd, bwd;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex);
    fwd = fftw_plan_dft_r2c_1d(static_cast<int>(len), in.data(), freq.data(),
                               FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_1d(static_cast<int>(len), freq.data(), out.data(),
                               FFTW_ESTIMATE);
  }
  fftw_execute(fwd);
  for (auto& c : freq) {
    c[0] = c[0] * c[0] + c[1] * c[1];
    c[1] = 0.0;
  }
  fftw_execute(bwd);
  {
    std::lock_guard<std::mutex> lock(fftw_mutex);
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }
  std::vector<double> gamma(maxlag + 1);
  const double scale = 1.0 / (static_cast<double>(len) * static_cast<double>(n));
  for (long k = 0; k <= maxlag; k++) gamma[k] = out[k] * scale;
  return gamma;
}

AsymVarEstimate asymptotic_variance(std::span<const double> trace,
                                    long thinning_factor) {
  const long n = static_cast<long>(trace.size());
  if (n < 1000) throw std::invalid_argument("trace too short");
  const long cap = n / 100;
  auto gamma = autocovariance_fft(trace, cap);
  return estimate_from_gammas(gamma, cap, thinning_factor);
}

double mcse(const AsymVarEstimate& est, std::int64_t n_samples) {
  if (n_samples <= 0) throw std::invalid_argument("need a positive sample count");
  return std::sqrt(est.asym_var / static_cast<double>(n_samples));
}

StreamingAutocov::StreamingAutocov(long maxlag)
    : maxlag_(maxlag),
      cross_(maxlag + 1, 0.0),
      head_(maxlag + 1, 0.0),
      ring_(maxlag + 1, 0.0) {}

void StreamingAutocov::add(double x) {
  const long w = maxlag_ + 1;
  for (long k = 0; k <= maxlag_; k++) {
    if (k > n_) break;
    double past = (k == 0) ? x : ring_[(n_ - k) % w];
    cross_[k] += past * x;
  }
  ring_[n_ % w] = x;
  n_++;
  sum_ += x;
  // head_[k]: sum of the first k values
  for (long k = 1; k <= maxlag_; k++)
    if (n_ <= k) head_[k] += x;
}

std::vector<double> StreamingAutocov::autocovariances() const {
  const long w = maxlag_ + 1;
  const double mu = mean();
  std::vector<double> gamma(maxlag_ + 1, 0.0);
  // tail_k: sum of the last k values, recovered from the ring
  std::vector<double> tail(maxlag_ + 1, 0.0);
  for (long k = 1; k <= maxlag_ && k <= n_; k++)
    tail[k] = tail[k - 1] + ring_[(n_ - k) % w];
  for (long k = 0; k <= maxlag_ && k < n_; k++) {
    double a = sum_ - tail[k];  // sum of x_1..x_{N-k}
    double b = sum_ - head_[k]; // sum of x_{k+1}..x_N
    double nk = static_cast<double>(n_ - k);
    gamma[k] = (cross_[k] - mu * (a + b) + nk * mu * mu) /
               static_cast<double>(n_);
  }
  return gamma;
}

AsymVarEstimate StreamingAutocov::asymptotic_variance(long thinning_factor) const {
  if (n_ < 1000) throw std::invalid_argument("trace too short");
  auto gamma = autocovariances();
  long cap = std::min<long>(maxlag_, n_ / 100);
  return estimate_from_gammas(gamma, cap, thinning_factor);
}

}  // namespace mgs
