#include "mgs/kernels.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mgs {

namespace {

int argmax(std::span<const double> pi) {
  int j = 0;
  for (int i = 1; i < static_cast<int>(pi.size()); i++)
    if (pi[i] > pi[j]) j = i;
  return j;
}

// Row of the unique minimal-self matrix when some value has probability
// one half or more: everything moves to that value, which keeps the
// (2p-1)/p surplus for itself.
void forced_row(std::span<const double> pi, int k, int x1, std::span<double> out) {
  const int m = static_cast<int>(pi.size());
  if (k == x1) {
    for (int i = 0; i < m; i++)
      out[i] = (i == k) ? (2.0 * pi[k] - 1.0) / pi[k] : std::min(1.0, pi[i] / pi[k]);
  } else {
    for (int i = 0; i < m; i++) out[i] = 0.0;
    out[x1] = 1.0;
  }
}

void identity_perm(int m, std::vector<int>& sigma) {
  sigma.resize(m);
  std::iota(sigma.begin(), sigma.end(), 0);
}

// UST order into su (most probable value, then non-decreasing tail);
// DST order into sd (the exact reversal of UST's tail)
void ust_dst_orders(std::span<const double> pi, std::vector<int>& su,
                    std::vector<int>& sd) {
  const int m = static_cast<int>(pi.size());
  int x1 = argmax(pi);
  su.clear();
  for (int i = 0; i < m; i++)
    if (i != x1) su.push_back(i);
  std::stable_sort(su.begin(), su.end(),
                   [&](int a, int b) { return pi[a] < pi[b]; });
  sd.assign(su.rbegin(), su.rend());
  su.insert(su.begin(), x1);
  sd.insert(sd.begin(), x1);
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::GS: return "GS";
    case Method::MHGS: return "MHGS";
    case Method::UNAM: return "UNAM";
    case Method::DNAM: return "DNAM";
    case Method::UDNAM: return "UDNAM";
    case Method::ZDNAM: return "ZDNAM";
    case Method::ST: return "ST";
    case Method::UST: return "UST";
    case Method::DST: return "DST";
    case Method::UDST: return "UDST";
    case Method::HST: return "HST";
    case Method::OHST: return "OHST";
    case Method::FSS: return "FSS";
    case Method::ZFSS: return "ZFSS";
  }
  return "?";
}

std::optional<Method> parse_method(const std::string& name) {
  for (Method m : kAllMethods)
    if (name == method_name(m)) return m;
  return std::nullopt;
}

bool is_reversible(Method m) {
  switch (m) {
    case Method::GS: case Method::MHGS: case Method::UNAM: case Method::DNAM:
    case Method::UDNAM: case Method::ZDNAM: case Method::UDST:
    case Method::HST: case Method::OHST:
      return true;
    default:
      return false;
  }
}

bool is_minimal_self(Method m) {
  switch (m) {
    case Method::ZDNAM: case Method::ST: case Method::UST: case Method::DST:
    case Method::UDST: case Method::HST: case Method::OHST: case Method::ZFSS:
      return true;
    default:
      return false;
  }
}

std::vector<int> order_permutation(std::span<const double> pi, Direction dir) {
  std::vector<int> sigma(pi.size());
  std::iota(sigma.begin(), sigma.end(), 0);
  std::stable_sort(sigma.begin(), sigma.end(),
                   [&](int a, int b) { return pi[a] < pi[b]; });
  if (dir == Direction::NonIncreasing)
    std::reverse(sigma.begin(), sigma.end());
  return sigma;
}

double min_self_probability(std::span<const double> pi) {
  double p = pi[argmax(pi)];
  return p <= 0.5 ? 0.0 : (2.0 * p - 1.0) / p;
}

void gs_row(std::span<const double> pi, int k, std::span<double> out) {
  (void)k;
  std::copy(pi.begin(), pi.end(), out.begin());
}

void mhgs_row(std::span<const double> pi, int k, std::span<double> out) {
  const int m = static_cast<int>(pi.size());
  for (int i = 0; i < m; i++) {
    if (1.0 - pi[i] <= 0.0) {  // revert to GS when a probability is 1
      gs_row(pi, k, out);
      return;
    }
  }
  double s = 0.0;
  for (int i = 0; i < m; i++) {
    if (i != k) {
      out[i] = std::min({1.0, pi[i] / (1.0 - pi[k]), pi[i] / (1.0 - pi[i])});
      s += out[i];
    }
  }
  out[k] = (1.0 - s < 0.0) ? 0.0 : 1.0 - s;
}

void nam_row(std::span<const double> pi, std::span<const int> sigma, int k,
             std::span<double> out) {
  const int m = static_cast<int>(pi.size());
  double s = 1.0, f = 1.0;
  int i = 0;
  // transition probabilities from k to successive focal values
  while (sigma[i] != k) {
    if (f <= 0.0) {
      out[sigma[i]] = 0.0;
    } else {
      double q = pi[sigma[i]];
      s -= q;
      if (q >= s) {
        out[sigma[i]] = f;
        f = 0.0;
      } else {
        out[sigma[i]] = (q / s) * f;
        f -= out[sigma[i]];
      }
    }
    i++;
  }
  // k is now focal: probabilities to the values not yet focal
  if (f <= 0.0) {
    out[k] = 0.0;
    for (int j = i + 1; j < m; j++) out[sigma[j]] = 0.0;
  } else {
    double q = pi[k];
    s -= q;
    if (q > s) {
      out[k] = ((q - s) / q) * f;
      for (int j = i + 1; j < m; j++)
        out[sigma[j]] = std::min(f, (pi[sigma[j]] / q) * f);
    } else {
      out[k] = 0.0;
      for (int j = i + 1; j < m; j++)
        out[sigma[j]] = std::min(f, (pi[sigma[j]] / s) * f);
    }
  }
}

void unam_row(std::span<const double> pi, int k, std::span<double> out) {
  const int m = static_cast<int>(pi.size());
  std::vector<int> sigma = order_permutation(pi, Direction::NonDecreasing);
  double s = 1.0, f = 1.0;
  int i = 0;
  while (sigma[i] != k) {
    double q = pi[sigma[i]];
    s -= q;
    out[sigma[i]] = std::min(f, (q / s) * f);
    f -= out[sigma[i]];
    i++;
  }
  if (i == m - 1) {
    out[k] = f;
  } else {
    s -= pi[k];
    out[k] = 0.0;
    for (int j = i + 1; j < m; j++)
      out[sigma[j]] = std::min(f, (pi[sigma[j]] / s) * f);
  }
}

void dnam_row(std::span<const double> pi, int k, std::span<double> out) {
  const int m = static_cast<int>(pi.size());
  if (pi[k] >= 0.5) {
    for (int i = 0; i < m; i++)
      if (i != k) out[i] = std::min(1.0, pi[i] / pi[k]);
    out[k] = (2.0 * pi[k] - 1.0) / pi[k];
    return;
  }
  std::vector<int> sigma = order_permutation(pi, Direction::NonIncreasing);
  nam_row(pi, sigma, k, out);
}

void udnam_row(std::span<const double> pi, int k, std::span<double> out) {
  const int m = static_cast<int>(pi.size());
  std::vector<double> d(pi.size());
  unam_row(pi, k, out);
  dnam_row(pi, k, d);
  for (int i = 0; i < m; i++) out[i] = 0.5 * (out[i] + d[i]);
}

void zdnam_row(std::span<const double> pi, int k, std::span<double> out) {
  const int m = static_cast<int>(pi.size());
  if (pi[k] >= 0.5) {
    forced_row(pi, k, k, out);
    return;
  }
  std::vector<int> sigma = order_permutation(pi, Direction::NonIncreasing);
  if (pi[sigma[0]] >= 0.5) {
    // a value (not the current one) has probability half or more
    for (int i = 0; i < m; i++) out[i] = 0.0;
    out[sigma[0]] = 1.0;
    return;
  }
  double s = 1.0, f = 1.0;
  int i = 0;
  // downward focal steps, with a forward check for whether the next
  // step needs the special zero-self construction
  while (f > 0.0 && sigma[i] != k &&
         pi[sigma[i + 1]] < s - pi[sigma[i]] - pi[sigma[i + 1]]) {
    double q = pi[sigma[i]];
    s -= q;
    out[sigma[i]] = (q / s) * f;
    f -= out[sigma[i]];
    i++;
  }
  double q = pi[sigma[i]];
  s -= q;
  if (f > 0.0 && s > 0.0 && i < m - 1) {
    double q2 = pi[sigma[i + 1]];
    double s2 = std::max(0.0, s - q2);
    if (q2 >= s2) {
      // special two-focal construction
      double A = (q + q2 - s2) / 2.0;
      if (k == sigma[i]) {
        out[sigma[i]] = 0.0;
        out[sigma[i + 1]] = f * A / q;
      } else if (k == sigma[i + 1]) {
        out[sigma[i]] = f * A / q2;
        out[sigma[i + 1]] = 0.0;
      }
      if (s2 <= 0.0) {
        i += 2;
      } else {
        double B = (q - q2 + s2) / (2.0 * s2);
        double C = (s2 + q2 - q) / (2.0 * s2);
        if (k == sigma[i]) {
          i += 2;
          while (i < m) {
            out[sigma[i]] = f * B * pi[sigma[i]] / q;
            i++;
          }
        } else if (k == sigma[i + 1]) {
          i += 2;
          while (i < m) {
            out[sigma[i]] = f * C * pi[sigma[i]] / q2;
            i++;
          }
        } else {
          out[sigma[i]] = f * B;
          out[sigma[i + 1]] = f * C;
          i += 2;
        }
      }
    } else {
      // k is focal here with pi(k) < s: plain downward step
      out[sigma[i]] = 0.0;
      i++;
      while (i < m) {
        out[sigma[i]] = (pi[sigma[i]] / s) * f;
        i++;
      }
    }
  }
  while (i < m) {
    out[sigma[i]] = 0.0;
    i++;
  }
}

void shifted_tower_row(std::span<const double> pi, int k, double shift,
                       std::span<const int> sigma, std::span<double> out) {
  const int m = static_cast<int>(pi.size());
  int x1 = argmax(pi);
  if (pi[x1] >= 0.5) {
    // forced regime ignores the shift (which is 1 when pi is degenerate
    // and the shift is max pi)
    forced_row(pi, k, x1, out);
    return;
  }
  if (!(shift > 0.0 && shift < 1.0))
    throw std::invalid_argument("shift must be in (0,1)");
  // cumulative probabilities in sigma order, stored by value
  std::vector<double> C(pi.size());
  double S = 0.0;
  for (int i = 0; i < m; i++) {
    C[sigma[i]] = S;
    S += pi[sigma[i]];
  }
  // flows from k to each value
  double t = 0.0;
  for (int i = 0; i < m; i++) {
    double d1 = pi[k] - shift + C[k] - C[i];
    double d2 = d1 + S;
    double v = std::max(0.0, std::min({d1, pi[k] + pi[i] - d1, pi[k], pi[i]})) +
               std::max(0.0, std::min({d2, pi[k] + pi[i] - d2, pi[k], pi[i]}));
    out[i] = v;
    t += v;
  }
  if (t == 0.0) {
    for (int i = 0; i < m; i++) out[i] = 0.0;
    out[x1] = 1.0;
    return;
  }
  for (int i = 0; i < m; i++) out[i] /= t;
}

int shifted_tower_sample(std::span<const double> pi, int k, double shift,
                         std::span<const int> sigma, double u01) {
  const int m = static_cast<int>(pi.size());
  int x1 = argmax(pi);
  if (pi[x1] >= 0.5) {
    // forced-matrix regime (shift unused); a variate is needed only
    // when sampling from x1 itself
    if (k != x1) return x1;
    double cum = 0.0;
    int j = x1;
    for (int ii = 0; ii < m && u01 >= cum; ii++) {
      double pr = (ii == k) ? (2.0 * pi[k] - 1.0) / pi[k]
                            : std::min(1.0, pi[ii] / pi[k]);
      if (pr > 0.0) {
        cum += pr;
        j = ii;
      }
    }
    return j;
  }
  if (!(shift > 0.0 && shift < 1.0))
    throw std::invalid_argument("shift must be in (0,1)");
  // position of k's region in the tower; the open-top variate (0,1]
  // keeps boundary draws inside k's region under the (C_j, C_j+pi_j]
  // arc convention
  double u = 0.0;
  int i = 0;
  while (sigma[i] != k) {
    u += pi[sigma[i]];
    i++;
  }
  u += (1.0 - u01) * pi[k] - shift;
  if (u <= 0.0) u += 1.0;
  // walk the tower to find the region containing u
  i = 0;
  double s = 0.0;
  int j = k;
  while (i < m && u > s) {
    if (pi[sigma[i]] > 0.0) {
      s += pi[sigma[i]];
      j = sigma[i];
    }
    i++;
  }
  return j;
}

void udst_row(std::span<const double> pi, int k, std::span<double> out) {
  const int m = static_cast<int>(pi.size());
  double shift = pi[argmax(pi)];
  std::vector<int> su, sd;
  ust_dst_orders(pi, su, sd);
  std::vector<double> d(pi.size());
  shifted_tower_row(pi, k, shift, su, out);
  shifted_tower_row(pi, k, shift, sd, d);
  for (int i = 0; i < m; i++) out[i] = 0.5 * (out[i] + d[i]);
}

void fss_row(std::span<const double> pi, int k, bool zero_flag,
             std::span<double> out) {
  const int m = static_cast<int>(pi.size());
  if (pi[k] <= 0.0) {  // transition from a zero-probability value
    gs_row(pi, k, out);
    return;
  }
  int x1 = argmax(pi);
  double pi1 = pi[x1];
  if (pi1 >= 0.5 || m <= 2) {
    forced_row(pi, k, x1, out);
    return;
  }
  double pi2 = 0.0;
  for (int i = 0; i < m; i++)
    if (i != x1 && pi[i] > pi2) pi2 = pi[i];
  // x0: the value before x1, or for ZFSS the first value before x1 that
  // blocks leftward movement from re-entering a piece of x1
  int x0 = x1;
  double f;
  do {
    x0 = (x0 == 0) ? m - 1 : x0 - 1;
    double pistar = (0.5 - pi1) + (0.5 - pi[x0]);
    f = (pi1 - pi2) / pistar;
  } while (zero_flag && pi[x0] < f * pi2);
  // flow from distributing the excess of x1's probability
  for (int i = 0; i < m; i++)
    out[i] = (k == x1 && i != x1 && i != x0) ? f * pi[i] : 0.0;
  // flow from slice movement
  double l = 0.0;
  double u = (k == x1) ? pi2 : pi[k];
  int i = k;
  while (l < u) {
    // step left: x1 -> x0 -> value before x1, skipping x0 elsewhere
    if (i == x1) {
      i = x0;
    } else {
      if (i == x0)
        i = (x1 == 0) ? m - 1 : x1 - 1;
      else
        i = (i == 0) ? m - 1 : i - 1;
      if (i == x0) i = (x0 == 0) ? m - 1 : x0 - 1;
    }
    if (l < pi[i]) {
      if (i != x1 && i != x0) {
        double t = std::min(u, f * pi[i]);
        if (l < t) {
          out[x1] += t - l;
          l = t;
        }
      }
      double t = std::min(u, pi[i]);
      out[i] += t - l;
      l = t;
    }
  }
  for (int j = 0; j < m; j++) out[j] /= pi[k];
}

int fss_sample(std::span<const double> pi, int k, bool zero_flag, double u01) {
  const int m = static_cast<int>(pi.size());
  int j = k;
  if (pi[k] <= 0.0) {
    // sample from pi restricted to positive values
    double s = 0.0;
    int i = 0;
    while (i < m && u01 >= s) {
      if (pi[i] > 0.0) {
        s += pi[i];
        j = i;
      }
      i++;
    }
    return j;
  }
  int x1 = argmax(pi);
  double pi1 = pi[x1];
  if (pi1 >= 0.5 || m <= 2) {
    if (k != x1) return x1;
    double s = 0.0;
    int i = 0;
    while (i < m && u01 >= s) {
      if (pi[i] > 0.0) {
        s += (i == k) ? (2.0 * pi1 - 1.0) / pi1 : pi[i] / pi1;
        j = i;
      }
      i++;
    }
    return j;
  }
  double pi2 = 0.0;
  for (int i = 0; i < m; i++)
    if (i != x1 && pi[i] > pi2) {
      pi2 = pi[i];
      j = i;
    }
  double r = u01 * pi[k];
  int x0 = x1;
  double f;
  do {
    x0 = (x0 == 0) ? m - 1 : x0 - 1;
    double pistar = (0.5 - pi1) + (0.5 - pi[x0]);
    f = (pi1 - pi2) / pistar;
  } while (zero_flag && pi[x0] < f * pi2);
  if (k == x1 && r >= pi2) {
    // region distributed among values other than x1 and x0
    r -= pi2;
    double s = 0.0;
    int i = 0;
    while (i < m && r >= s) {
      if (i != x1 && i != x0 && pi[i] > 0.0) {
        s += f * pi[i];
        j = i;
      }
      i++;
    }
    return j;
  }
  // slice movement
  double l = 0.0;
  double u = (k == x1) ? pi2 : pi[k];
  int i = k;
  double s = 0.0;
  while (l < u && r >= s) {
    if (i == x1) {
      i = x0;
    } else {
      if (i == x0)
        i = (x1 == 0) ? m - 1 : x1 - 1;
      else
        i = (i == 0) ? m - 1 : i - 1;
      if (i == x0) i = (x0 == 0) ? m - 1 : x0 - 1;
    }
    if (l < pi[i]) {
      if (i != x1 && i != x0) {
        double t = std::min(u, f * pi[i]);
        if (l < t) {
          s += t - l;
          j = x1;
          l = t;
        }
      }
      if (r >= s) {
        double t = std::min(u, pi[i]);
        s += t - l;
        j = i;
        l = t;
      }
    }
  }
  return j;
}

void slice_row(std::span<const double> pi, int k, std::span<double> out) {
  const int m = static_cast<int>(pi.size());
  for (int i = 0; i < m; i++) out[i] = 0.0;
  double l = 0.0, u = pi[k];
  int i = k;
  while (l < u) {
    i = (i == 0) ? m - 1 : i - 1;
    if (l < pi[i]) {
      double t = std::min(u, pi[i]);
      out[i] += t - l;
      l = t;
    }
  }
  for (int j = 0; j < m; j++) out[j] /= pi[k];
}

void kernel_row(Method method, std::span<const double> pi, int k,
                std::span<double> out, KernelScratch& ws) {
  const int m = static_cast<int>(pi.size());
  switch (method) {
    case Method::GS: gs_row(pi, k, out); break;
    case Method::MHGS: mhgs_row(pi, k, out); break;
    case Method::UNAM: unam_row(pi, k, out); break;
    case Method::DNAM: dnam_row(pi, k, out); break;
    case Method::UDNAM: udnam_row(pi, k, out); break;
    case Method::ZDNAM: zdnam_row(pi, k, out); break;
    case Method::ST:
      identity_perm(m, ws.sigma);
      shifted_tower_row(pi, k, pi[argmax(pi)], ws.sigma, out);
      break;
    case Method::UST:
      ust_dst_orders(pi, ws.sigma, ws.sigma2);
      shifted_tower_row(pi, k, pi[argmax(pi)], ws.sigma, out);
      break;
    case Method::DST:
      ust_dst_orders(pi, ws.sigma, ws.sigma2);
      shifted_tower_row(pi, k, pi[argmax(pi)], ws.sigma2, out);
      break;
    case Method::UDST: {
      ust_dst_orders(pi, ws.sigma, ws.sigma2);
      double shift = pi[argmax(pi)];
      ws.row2.resize(pi.size());
      shifted_tower_row(pi, k, shift, ws.sigma, out);
      shifted_tower_row(pi, k, shift, ws.sigma2, ws.row2);
      for (int i = 0; i < m; i++) out[i] = 0.5 * (out[i] + ws.row2[i]);
      break;
    }
    case Method::HST:
      identity_perm(m, ws.sigma);
      shifted_tower_row(pi, k, 0.5, ws.sigma, out);
      break;
    case Method::OHST:
      ws.sigma = order_permutation(pi, Direction::NonIncreasing);
      shifted_tower_row(pi, k, 0.5, ws.sigma, out);
      break;
    case Method::FSS: fss_row(pi, k, false, out); break;
    case Method::ZFSS: fss_row(pi, k, true, out); break;
  }
  clamp_roundoff(out);
}

int kernel_step(Method method, std::span<const double> pi, int k, Rng& rng,
                KernelScratch& ws, bool use_direct_sampler) {
  const int m = static_cast<int>(pi.size());
  if (use_direct_sampler) {
    switch (method) {
      case Method::ST:
        identity_perm(m, ws.sigma);
        return shifted_tower_sample(pi, k, pi[argmax(pi)], ws.sigma, rng.uniform());
      case Method::UST:
        ust_dst_orders(pi, ws.sigma, ws.sigma2);
        return shifted_tower_sample(pi, k, pi[argmax(pi)], ws.sigma, rng.uniform());
      case Method::DST:
        ust_dst_orders(pi, ws.sigma, ws.sigma2);
        return shifted_tower_sample(pi, k, pi[argmax(pi)], ws.sigma2, rng.uniform());
      case Method::UDST: {
        // random choice between the UST and DST parents
        ust_dst_orders(pi, ws.sigma, ws.sigma2);
        double u = rng.uniform();
        const std::vector<int>& s = (u < 0.5) ? ws.sigma : ws.sigma2;
        double uu = (u < 0.5) ? 2.0 * u : 2.0 * (u - 0.5);
        return shifted_tower_sample(pi, k, pi[argmax(pi)], s, uu);
      }
      case Method::HST:
        identity_perm(m, ws.sigma);
        return shifted_tower_sample(pi, k, 0.5, ws.sigma, rng.uniform());
      case Method::OHST:
        ws.sigma = order_permutation(pi, Direction::NonIncreasing);
        return shifted_tower_sample(pi, k, 0.5, ws.sigma, rng.uniform());
      case Method::FSS:
        return fss_sample(pi, k, false, rng.uniform());
      case Method::ZFSS:
        return fss_sample(pi, k, true, rng.uniform());
      default:
        break;
    }
  }
  ws.cum.resize(pi.size());
  kernel_row(method, pi, k, ws.cum, ws);
  return sample_categorical(ws.cum, rng.uniform());
}

TransitionRow kernel_row(Method method, const ProbVec& pi, int k) {
  KernelScratch ws;
  TransitionRow row;
  row.current = k;
  row.p.resize(pi.p.size());
  kernel_row(method, pi.p, k, row.p, ws);
  return row;
}

std::vector<std::vector<double>> kernel_matrix(Method method,
                                               std::span<const double> pi) {
  KernelScratch ws;
  const int m = static_cast<int>(pi.size());
  std::vector<std::vector<double>> P(m, std::vector<double>(m));
  for (int k = 0; k < m; k++) kernel_row(method, pi, k, P[k], ws);
  return P;
}

}  // namespace mgs
