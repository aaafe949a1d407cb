#pragma once

#include <span>
#include <vector>

#include "mgs/antithetic.hpp"  // Matrix

namespace mgs {

struct SpectrumReport {
  std::vector<double> eigenvalues;  // sorted ascending
  bool has_unit_eigenvalue = false;
};

/// |pi^T P - pi^T|_inf <= tol.  Throws on dimension mismatch.
bool check_invariance(const Matrix& P, std::span<const double> pi, double tol);

/// |pi(u) P(u->v) - pi(v) P(v->u)| <= tol for all u, v.
bool check_detailed_balance(const Matrix& P, std::span<const double> pi,
                            double tol);

/// Every off-diagonal entry of Pstar >= the corresponding entry of P - tol.
bool peskun_dominates(const Matrix& Pstar, const Matrix& P, double tol);

/// Eigenvalues of a reversible kernel, via the sqrt(pi) similarity
/// transform.  Zero-probability values are dropped before analysis.
/// Throws std::invalid_argument("spectrum requires reversible kernel")
/// if P is not reversible w.r.t. pi (tolerance 1e-9).
SpectrumReport spectrum(const Matrix& P, std::span<const double> pi);

/// Eigenvalues of Q - P symmetrized by sqrt(pi); both inputs must be
/// reversible w.r.t. pi.
std::vector<double> difference_eigenvalues(const Matrix& P, const Matrix& Q,
                                           std::span<const double> pi);

/// True iff all eigenvalues of Q - P are >= -tol, i.e. P improves the
/// asymptotic variance of every function's mean estimate relative to Q.
bool efficiency_dominates(const Matrix& P, const Matrix& Q,
                          std::span<const double> pi, double tol);

/// Closed-form eigenvalues of the nested-modification kernel for focal
/// order sigma: the single 1 plus one term per focal step (zeros after
/// early termination).  Sorted ascending.
std::vector<double> nam_spectrum_closed_form(std::span<const double> pi,
                                             std::span<const int> sigma);

/// Closed-form eigenvalues of the zero-self variant, including the
/// special two-step pair.  Sorted ascending.
std::vector<double> zdnam_spectrum_closed_form(std::span<const double> pi);

}  // namespace mgs
