#pragma once

#include <span>
#include <vector>

#include "mgs/prob.hpp"

namespace mgs {

/// One antithetic modification: shift probability flow of size delta
/// between two disjoint index sets A and B.
struct AMSpec {
  std::vector<int> A, B;
  double delta = 0.0;
};

using Matrix = std::vector<std::vector<double>>;

/// Apply the five-case antithetic update to a transition matrix that is
/// reversible with respect to pi.  Throws std::invalid_argument with
/// message "antithetic modification infeasible" if delta exceeds the
/// feasibility bound (tolerance 1e-12), and on malformed A/B.
Matrix am_modify(const Matrix& P, std::span<const double> pi, const AMSpec& spec);

/// Row from the recursive binary-halving scheme: repeatedly flip between
/// the two halves of the current block with maximal delta, descending
/// into the half whose internal transitions were not zeroed.  Requires m
/// to be a power of two.
void binary_antithetic_row(std::span<const double> pi, int k,
                           std::span<double> out);

std::vector<double> binary_antithetic_row(std::span<const double> pi, int k);

}  // namespace mgs
