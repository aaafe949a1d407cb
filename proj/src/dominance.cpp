#include "mgs/dominance.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mgs/kernels.hpp"

namespace mgs {

namespace {

void require_square(const Matrix& P, std::size_t m) {
  if (P.size() != m) throw std::invalid_argument("dimension mismatch");
  for (const auto& row : P)
    if (row.size() != m) throw std::invalid_argument("dimension mismatch");
}

// restrict to positive-probability values, then form D^1/2 P D^-1/2
Eigen::MatrixXd symmetrize(const Matrix& P, std::span<const double> pi,
                           std::vector<int>& keep) {
  keep.clear();
  for (std::size_t i = 0; i < pi.size(); i++)
    if (pi[i] > 0.0) keep.push_back(static_cast<int>(i));
  const int n = static_cast<int>(keep.size());
  Eigen::MatrixXd S(n, n);
  for (int a = 0; a < n; a++)
    for (int b = 0; b < n; b++)
      S(a, b) = std::sqrt(pi[keep[a]] / pi[keep[b]]) * P[keep[a]][keep[b]];
  return S;
}

std::vector<double> sym_eigenvalues(const Eigen::MatrixXd& S) {
  Eigen::MatrixXd sym = 0.5 * (S + S.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  std::vector<double> ev(solver.eigenvalues().data(),
                         solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace

bool check_invariance(const Matrix& P, std::span<const double> pi, double tol) {
  require_square(P, pi.size());
  const int m = static_cast<int>(pi.size());
  for (int v = 0; v < m; v++) {
    double s = 0.0;
    for (int u = 0; u < m; u++) s += pi[u] * P[u][v];
    if (std::abs(s - pi[v]) > tol) return false;
  }
  return true;
}

bool check_detailed_balance(const Matrix& P, std::span<const double> pi,
                            double tol) {
  require_square(P, pi.size());
  const int m = static_cast<int>(pi.size());
  for (int u = 0; u < m; u++)
    for (int v = u + 1; v < m; v++)
      if (std::abs(pi[u] * P[u][v] - pi[v] * P[v][u]) > tol) return false;
  return true;
}

bool peskun_dominates(const Matrix& Pstar, const Matrix& P, double tol) {
  if (Pstar.size() != P.size()) throw std::invalid_argument("dimension mismatch");
  const int m = static_cast<int>(P.size());
  require_square(Pstar, P.size());
  require_square(P, P.size());
  for (int u = 0; u < m; u++)
    for (int v = 0; v < m; v++)
      if (u != v && Pstar[u][v] < P[u][v] - tol) return false;
  return true;
}

SpectrumReport spectrum(const Matrix& P, std::span<const double> pi) {
  require_square(P, pi.size());
  if (!check_detailed_balance(P, pi, 1e-9))
    throw std::invalid_argument("spectrum requires reversible kernel");
  std::vector<int> keep;
  Eigen::MatrixXd S = symmetrize(P, pi, keep);
  SpectrumReport rep;
  rep.eigenvalues = sym_eigenvalues(S);
  for (double l : rep.eigenvalues)
    if (std::abs(l - 1.0) <= 1e-9) rep.has_unit_eigenvalue = true;
  return rep;
}

std::vector<double> difference_eigenvalues(const Matrix& P, const Matrix& Q,
                                           std::span<const double> pi) {
  require_square(P, pi.size());
  require_square(Q, pi.size());
  if (!check_detailed_balance(P, pi, 1e-9) || !check_detailed_balance(Q, pi, 1e-9))
    throw std::invalid_argument("spectrum requires reversible kernel");
  const int m = static_cast<int>(pi.size());
  Matrix D(m, std::vector<double>(m));
  for (int u = 0; u < m; u++)
    for (int v = 0; v < m; v++) D[u][v] = Q[u][v] - P[u][v];
  std::vector<int> keep;
  Eigen::MatrixXd S = symmetrize(D, pi, keep);
  return sym_eigenvalues(S);
}

bool efficiency_dominates(const Matrix& P, const Matrix& Q,
                          std::span<const double> pi, double tol) {
  auto ev = difference_eigenvalues(P, Q, pi);
  for (double l : ev)
    if (l < -tol) return false;
  return true;
}

std::vector<double> nam_spectrum_closed_form(std::span<const double> pi,
                                             std::span<const int> sigma) {
  const int m = static_cast<int>(pi.size());
  std::vector<double> out{1.0};
  double s = 1.0, f = 1.0;
  for (int i = 0; i < m - 1; i++) {
    if (f <= 0.0) {
      out.push_back(0.0);
      continue;
    }
    double q = pi[sigma[i]];
    s -= q;
    if (q >= s) {
      out.push_back(-f * s / q);
      f = 0.0;
    } else {
      out.push_back(-q * f / s);
      f -= (q / s) * f;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> zdnam_spectrum_closed_form(std::span<const double> pi) {
  const int m = static_cast<int>(pi.size());
  std::vector<int> sigma = order_permutation(pi, Direction::NonIncreasing);
  double pmax = pi[sigma[0]];
  std::vector<double> out{1.0};
  if (pmax >= 0.5) {
    // forced matrix: one antithetic eigenvalue, the rest zero
    out.push_back(-(1.0 - pmax) / pmax);
    while (static_cast<int>(out.size()) < m) out.push_back(0.0);
    std::sort(out.begin(), out.end());
    return out;
  }
  double s = 1.0, f = 1.0;
  int i = 0;
  while (f > 0.0 && i < m - 1 &&
         pi[sigma[i + 1]] < s - pi[sigma[i]] - pi[sigma[i + 1]]) {
    double q = pi[sigma[i]];
    s -= q;
    out.push_back(-q * f / s);
    f -= (q / s) * f;
    i++;
  }
  if (i < m - 1) {
    double q = pi[sigma[i]];
    s -= q;
    double q2 = pi[sigma[i + 1]];
    double s2 = std::max(0.0, s - q2);
    if (s2 <= 0.0) {
      // degenerate two-value tail: a pure flip of the remaining mass
      out.push_back(-f);
      out.push_back(0.0);
    } else {
      double disc = 1.0 - (q - q2 + s2) * (q2 * q2 - (q - s2) * (q - s2)) /
                              (q * q2 * s2);
      disc = std::sqrt(std::max(0.0, disc));
      out.push_back(-(f / 2.0) * (1.0 + disc));
      out.push_back(-(f / 2.0) * (1.0 - disc));
    }
  }
  while (static_cast<int>(out.size()) < m) out.push_back(0.0);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace mgs
