#include "mgs/prob.hpp"

#include <algorithm>
#include <stdexcept>

namespace mgs {

ProbVec normalize(std::span<const double> raw) {
  if (raw.empty()) throw std::invalid_argument("invalid unnormalized probabilities");
  double sum = 0.0;
  for (double x : raw) {
    if (x < 0.0) throw std::invalid_argument("invalid unnormalized probabilities");
    sum += x;
  }
  if (sum <= 0.0) throw std::invalid_argument("invalid unnormalized probabilities");
  ProbVec out;
  out.p.resize(raw.size());
  for (std::size_t i = 0; i < raw.size(); i++)
    out.p[i] = std::clamp(raw[i] / sum, 0.0, 1.0);
  return out;
}

bool validate(std::span<const double> p, double tol) {
  double sum = 0.0;
  for (double x : p) {
    if (x < -tol || x > 1.0 + tol) return false;
    sum += x;
  }
  return std::abs(sum - 1.0) <= tol;
}

void clamp_roundoff(std::span<double> p) {
  for (double& x : p)
    if (x < 0.0 && x >= -1e-15) x = 0.0;
}

int sample_categorical(std::span<const double> p, double u) {
  double cum = 0.0;
  int last = -1;
  for (std::size_t j = 0; j < p.size(); j++) {
    if (p[j] > 0.0) {
      cum += p[j];
      last = static_cast<int>(j);
      if (cum > u) return last;
    }
  }
  // u beyond the accumulated total (round-off): last positive entry
  return last;
}

}  // namespace mgs
