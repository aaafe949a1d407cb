#pragma once

#include <span>
#include <vector>

namespace mgs {

/// Normalized probability vector over m values (the conditional
/// distribution a kernel update consumes).  Entries are in [0,1] and
/// sum to 1 up to round-off.
struct ProbVec {
  std::vector<double> p;

  int size() const { return static_cast<int>(p.size()); }
  double operator[](int i) const { return p[static_cast<std::size_t>(i)]; }
  operator std::span<const double>() const { return {p.data(), p.size()}; }
};

/// One row of a transition matrix: probabilities of moving from value
/// `current` to each of the m values.  Indices are 0-based internally;
/// external formats use 1-based values.
struct TransitionRow {
  std::vector<double> p;
  int current = 0;

  int size() const { return static_cast<int>(p.size()); }
  double operator[](int i) const { return p[static_cast<std::size_t>(i)]; }
};

/// Divide raw non-negative weights by their sum, clamping entries to [0,1].
/// Throws std::invalid_argument on empty, negative, or all-zero input.
ProbVec normalize(std::span<const double> raw);

/// True iff all entries lie in [-tol, 1+tol] and the sum is within tol of 1.
bool validate(std::span<const double> p, double tol);

/// Replace tiny negative round-off entries (in [-1e-15, 0)) by exact 0.
void clamp_roundoff(std::span<double> p);

/// Smallest index j whose cumulative sum over positive-probability
/// entries exceeds u.  Never returns an index with probability <= 0.
int sample_categorical(std::span<const double> p, double u);

}  // namespace mgs
