#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "doctest.h"
#include "mgs/rng.hpp"

namespace testutil {

inline void check_close(std::span<const double> got,
                        std::span<const double> want, double tol = 1e-12) {
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); i++) {
    INFO("index ", i);
    CHECK(std::abs(got[i] - want[i]) <= tol);
  }
}

// random normalized vector from independent exponential weights
inline std::vector<double> random_pi(mgs::Rng& rng, int m) {
  std::vector<double> w(m);
  double sum = 0.0;
  for (int i = 0; i < m; i++) {
    w[i] = -std::log(1.0 - rng.uniform());
    sum += w[i];
  }
  for (int i = 0; i < m; i++) w[i] /= sum;
  return w;
}

}  // namespace testutil
