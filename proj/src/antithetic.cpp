#include "mgs/antithetic.hpp"

#include <algorithm>
#include <stdexcept>

namespace mgs {

namespace {

double set_prob(std::span<const double> pi, const std::vector<int>& s) {
  double t = 0.0;
  for (int i : s) t += pi[i];
  return t;
}

}  // namespace

Matrix am_modify(const Matrix& P, std::span<const double> pi, const AMSpec& spec) {
  const int m = static_cast<int>(pi.size());
  if (spec.A.empty() || spec.B.empty())
    throw std::invalid_argument("antithetic modification needs nonempty A and B");
  std::vector<char> inA(m, 0), inB(m, 0);
  for (int a : spec.A) inA[a] = 1;
  for (int b : spec.B) {
    if (inA[b]) throw std::invalid_argument("antithetic modification sets overlap");
    inB[b] = 1;
  }
  const double piA = set_prob(pi, spec.A);
  const double piB = set_prob(pi, spec.B);
  if (piA <= 0.0 || piB <= 0.0)
    throw std::invalid_argument("antithetic modification needs positive-mass sets");
  const double d = spec.delta;
  const double ftol = 1e-12;
  for (int a : spec.A)
    for (int a2 : spec.A)
      if (P[a][a2] < d * pi[a2] * piB / piA - ftol)
        throw std::invalid_argument("antithetic modification infeasible");
  for (int b : spec.B)
    for (int b2 : spec.B)
      if (P[b][b2] < d * pi[b2] * piA / piB - ftol)
        throw std::invalid_argument("antithetic modification infeasible");
  Matrix Q = P;
  for (int u = 0; u < m; u++) {
    for (int v = 0; v < m; v++) {
      if (inA[u] && inA[v])
        Q[u][v] = P[u][v] - d * pi[v] * piB / piA;
      else if (inA[u] && inB[v])
        Q[u][v] = P[u][v] + d * pi[v];
      else if (inB[u] && inB[v])
        Q[u][v] = P[u][v] - d * pi[v] * piA / piB;
      else if (inB[u] && inA[v])
        Q[u][v] = P[u][v] + d * pi[v];
      if (Q[u][v] < 0.0 && Q[u][v] >= -1e-15) Q[u][v] = 0.0;
    }
  }
  return Q;
}

void binary_antithetic_row(std::span<const double> pi, int k,
                           std::span<double> out) {
  const int m = static_cast<int>(pi.size());
  if (m < 1 || (m & (m - 1)) != 0)
    throw std::invalid_argument("binary antithetic scheme needs a power-of-two size");
  for (int i = 0; i < m; i++) out[i] = 0.0;
  int lo = 0, hi = m;
  double c = 1.0;  // current within-block scale: P(k -> v) = c*pi(v)
  while (hi - lo > 1) {
    int mid = (lo + hi) / 2;
    double pa = 0.0, pb = 0.0;
    for (int i = lo; i < mid; i++) pa += pi[i];
    for (int i = mid; i < hi; i++) pb += pi[i];
    if (pa <= 0.0 || pb <= 0.0) {
      // no flow possible at this level; descend toward k unchanged
      if (k < mid) hi = mid; else lo = mid;
      continue;
    }
    double tot = pa + pb;
    if (k < mid) {
      if (pa >= pb) {
        // within-B transitions zeroed; k's block continues as A
        for (int v = mid; v < hi; v++) out[v] = pi[v] * c * tot / pa;
        c = c * tot * (pa - pb) / (pa * pa);
        hi = mid;
      } else {
        // within-A zeroed: all of k's remaining mass flows to B
        for (int v = mid; v < hi; v++) out[v] = pi[v] * c * tot / pb;
        return;
      }
    } else {
      if (pb > pa) {
        for (int v = lo; v < mid; v++) out[v] = pi[v] * c * tot / pb;
        c = c * tot * (pb - pa) / (pb * pb);
        lo = mid;
      } else {
        for (int v = lo; v < mid; v++) out[v] = pi[v] * c * tot / pa;
        return;
      }
    }
  }
  out[lo] = c * pi[lo];
}

std::vector<double> binary_antithetic_row(std::span<const double> pi, int k) {
  std::vector<double> out(pi.size());
  binary_antithetic_row(pi, k, out);
  return out;
}

}  // namespace mgs
