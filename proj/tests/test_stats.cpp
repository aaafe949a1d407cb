#include <cmath>

#include "doctest.h"
#include "mgs/rng.hpp"
#include "mgs/stats.hpp"
#include "test_util.hpp"

using namespace mgs;

TEST_CASE("autocovariance: constant trace") {
  std::vector<double> trace(5000, 3.25);
  auto gamma = autocovariance(trace, 10);
  for (double g : gamma) CHECK(g == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("autocovariance: perfect alternation") {
  std::vector<double> trace(10000);
  for (std::size_t t = 0; t < trace.size(); t++) trace[t] = (t % 2 == 0) ? 1.0 : -1.0;
  auto gamma = autocovariance(trace, 4);
  CHECK(gamma[0] == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(gamma[1] == doctest::Approx(-1.0).epsilon(1e-3));
  CHECK(gamma[2] == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("autocovariance: iid uniform moments") {
  Rng rng(42);
  const int n = 1000000;
  std::vector<double> trace(n);
  for (auto& x : trace) x = rng.uniform();
  auto gamma = autocovariance_fft(trace, 5);
  double se0 = std::sqrt(2.0 / n) * (1.0 / 12);  // rough scale for var of var
  CHECK(std::abs(gamma[0] - 1.0 / 12) <= 4 * se0 + 1e-4);
  for (int k = 1; k <= 5; k++) CHECK(std::abs(gamma[k]) <= 4.0 / 12 / std::sqrt(n));
}

TEST_CASE("autocovariance: errors") {
  std::vector<double> trace(10, 1.0);
  CHECK_THROWS(autocovariance(trace, 10));
  CHECK_THROWS(autocovariance_fft(trace, 12));
}

TEST_CASE("fft path matches the direct sum") {
  Rng rng(7);
  std::vector<double> trace(4321);
  double prev = 0.0;
  for (auto& x : trace) {
    prev = 0.8 * prev + rng.normal();
    x = prev;
  }
  auto direct = autocovariance(trace, 60);
  auto fft = autocovariance_fft(trace, 60);
  for (int k = 0; k <= 60; k++)
    CHECK(fft[k] == doctest::Approx(direct[k]).epsilon(1e-10));
}

TEST_CASE("asymptotic_variance: iid trace is close to gamma0") {
  Rng rng(10);
  std::vector<double> trace(200000);
  for (auto& x : trace) x = rng.uniform();
  auto est = asymptotic_variance(trace, 1);
  CHECK(std::abs(est.asym_var - est.gamma0) / est.gamma0 < 0.05);
}

TEST_CASE("asymptotic_variance: two-state chain closed form") {
  // symmetric chain staying with probability q; f = state indicator;
  // v = (1/4) q / (1-q)
  Rng rng(11);
  for (double q : {0.3, 0.6}) {
    const int n = 2000000;
    std::vector<double> trace(n);
    int s = 0;
    for (int t = 0; t < n; t++) {
      if (rng.uniform() >= q) s = 1 - s;
      trace[t] = s;
    }
    auto est = asymptotic_variance(trace, 1);
    double want = 0.25 * q / (1 - q);
    CHECK(std::abs(est.asym_var - want) / want < 0.1);
  }
}

TEST_CASE("asymptotic_variance: antithetic alternation is near zero") {
  std::vector<double> trace(100000);
  for (std::size_t t = 0; t < trace.size(); t++) trace[t] = (t % 2 == 0) ? 1.0 : -1.0;
  auto est = asymptotic_variance(trace, 1);
  CHECK(est.asym_var <= 1e-6);
}

TEST_CASE("asymptotic_variance: shift and scale invariances") {
  Rng rng(12);
  std::vector<double> trace(50000);
  double prev = 0.0;
  for (auto& x : trace) {
    prev = 0.5 * prev + rng.normal();
    x = prev;
  }
  auto base = asymptotic_variance(trace, 1);
  std::vector<double> shifted(trace), scaled(trace);
  for (auto& x : shifted) x += 123.0;
  for (auto& x : scaled) x *= 3.0;
  auto sh = asymptotic_variance(shifted, 1);
  auto sc = asymptotic_variance(scaled, 1);
  CHECK(sh.asym_var == doctest::Approx(base.asym_var).epsilon(1e-9));
  CHECK(sc.asym_var == doctest::Approx(9.0 * base.asym_var).epsilon(1e-9));
}

TEST_CASE("asymptotic_variance: trace too short") {
  std::vector<double> trace(100, 1.0);
  CHECK_THROWS(asymptotic_variance(trace, 1));
}

TEST_CASE("mcse") {
  AsymVarEstimate est;
  est.asym_var = 4.0;
  CHECK(mcse(est, 1000000) == doctest::Approx(0.002));
  est.asym_var = 0.0;
  CHECK(mcse(est, 100) == 0.0);
}

TEST_CASE("streaming accumulator matches batch autocovariance") {
  Rng rng(13);
  std::vector<double> trace(30000);
  double prev = 1.0;
  for (auto& x : trace) {
    prev = 0.7 * prev + rng.uniform();
    x = prev;
  }
  StreamingAutocov acc(64);
  for (double x : trace) acc.add(x);
  auto batch = autocovariance(trace, 64);
  auto stream = acc.autocovariances();
  for (int k = 0; k <= 64; k++)
    CHECK(stream[k] == doctest::Approx(batch[k]).epsilon(1e-9));
  auto est = acc.asymptotic_variance(1);
  CHECK(est.gamma0 == doctest::Approx(batch[0]).epsilon(1e-9));
}

TEST_CASE("mcse of an iid uniform trace") {
  Rng rng(44);
  const int n = 200000;
  std::vector<double> trace(n);
  for (auto& x : trace) x = rng.uniform();
  auto est = asymptotic_variance(trace, 1);
  double want = std::sqrt(1.0 / 12 / n);
  CHECK(mcse(est, n) == doctest::Approx(want).epsilon(0.05));
}
