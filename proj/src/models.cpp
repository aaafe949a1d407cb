#include "mgs/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mgs {

void Model::init_random(Rng& rng) {
  std::vector<int> s(n_vars());
  for (int i = 0; i < n_vars(); i++)
    s[i] = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_values(i))));
  set_state(s);
}

// --- Potts ---------------------------------------------------------------

PottsModel::PottsModel(const PottsConfig& cfg) : cfg_(cfg) {
  if (cfg.rows < 2 || cfg.cols < 2 || cfg.n_colors < 2)
    throw std::invalid_argument("potts lattice needs rows, cols >= 2 and m >= 2");
  set_state(std::vector<int>(n_vars(), 0));
}

std::unique_ptr<Model> PottsModel::clone() const {
  return std::make_unique<PottsModel>(*this);
}

std::string PottsModel::name() const {
  return "potts" + std::to_string(cfg_.rows) + "x" + std::to_string(cfg_.cols);
}

void PottsModel::neighbors_of(int i, int out[4]) const {
  const int R = cfg_.rows, C = cfg_.cols;
  int r = i / C, c = i % C;
  out[0] = ((r + 1) % R) * C + c;
  out[1] = ((r + R - 1) % R) * C + c;
  out[2] = r * C + (c + 1) % C;
  out[3] = r * C + (c + C - 1) % C;
}

void PottsModel::set_state(const std::vector<int>& state) {
  state_ = state;
  value_counts_.assign(cfg_.n_colors, 0);
  for (int v : state_) value_counts_[v]++;
  equal_pairs_ = 0;
  const int R = cfg_.rows, C = cfg_.cols;
  for (int r = 0; r < R; r++)
    for (int c = 0; c < C; c++) {
      int v = state_[r * C + c];
      if (v == state_[((r + 1) % R) * C + c]) equal_pairs_++;
      if (v == state_[r * C + (c + 1) % C]) equal_pairs_++;
    }
}

void PottsModel::conditional(int i, std::vector<double>& out) const {
  const int m = cfg_.n_colors;
  out.assign(m, 0.0);
  int nb[4];
  neighbors_of(i, nb);
  for (int d = 0; d < 4; d++) out[state_[nb[d]]] += 1.0;
  double total = 0.0;
  for (int v = 0; v < m; v++) {
    out[v] = std::exp(cfg_.coupling * out[v]);
    total += out[v];
  }
  for (int v = 0; v < m; v++) out[v] /= total;
}

void PottsModel::set_value(int i, int v) {
  int old = state_[i];
  if (old == v) return;
  int nb[4];
  neighbors_of(i, nb);
  for (int d = 0; d < 4; d++) {
    if (state_[nb[d]] == old) equal_pairs_--;
    if (state_[nb[d]] == v) equal_pairs_++;
  }
  value_counts_[old]--;
  value_counts_[v]++;
  state_[i] = v;
}

std::vector<std::string> PottsModel::function_names() const {
  return {"count_of_1s", "sum_sq_counts", "equal_neighbor_pairs"};
}

void PottsModel::functions(std::vector<double>& out) const {
  out.resize(3);
  out[0] = static_cast<double>(value_counts_[0]);
  double ss = 0.0;
  for (long c : value_counts_) ss += static_cast<double>(c) * static_cast<double>(c);
  out[1] = ss;
  out[2] = static_cast<double>(equal_pairs_);
}

void PottsModel::functions_fresh(const std::vector<int>& state,
                                 std::vector<double>& out) const {
  PottsModel tmp(cfg_);
  tmp.set_state(state);
  tmp.functions(out);
}

double PottsModel::log_weight(const std::vector<int>& state) const {
  const int R = cfg_.rows, C = cfg_.cols;
  long eq = 0;
  for (int r = 0; r < R; r++)
    for (int c = 0; c < C; c++) {
      int v = state[r * C + c];
      if (v == state[((r + 1) % R) * C + c]) eq++;
      if (v == state[r * C + (c + 1) % C]) eq++;
    }
  return cfg_.coupling * static_cast<double>(eq);
}

// --- mixture ---------------------------------------------------------------

const std::array<std::array<int, kMixtureBits>, kMixtureObs>& mixture_data() {
  static const std::array<std::array<int, kMixtureBits>, kMixtureObs> data{{
      {1, 1, 1, 1, 0, 0, 0, 0, 1, 0},
      {1, 1, 1, 1, 0, 0, 0, 0, 0, 0},
      {1, 1, 1, 1, 0, 0, 0, 0, 1, 0},
      {1, 0, 1, 1, 0, 0, 0, 0, 1, 0},
      {1, 1, 1, 1, 0, 0, 0, 0, 0, 1},
      {1, 1, 1, 1, 0, 0, 1, 0, 1, 1},
      {0, 1, 1, 1, 0, 0, 0, 0, 0, 0},
      {0, 0, 0, 0, 1, 1, 1, 1, 1, 0},
      {0, 0, 0, 0, 1, 1, 1, 1, 1, 0},
      {0, 0, 0, 0, 1, 1, 1, 1, 1, 1},
      {0, 0, 0, 1, 1, 1, 1, 1, 0, 0},
      {0, 0, 0, 0, 0, 1, 1, 1, 1, 1},
      {0, 0, 1, 0, 1, 1, 1, 0, 1, 0},
      {1, 0, 1, 1, 0, 0, 1, 1, 0, 1},
      {0, 0, 1, 1, 0, 0, 1, 1, 1, 1},
      {0, 0, 1, 1, 0, 0, 1, 1, 1, 0},
      {0, 0, 1, 1, 0, 1, 1, 1, 1, 0},
      {0, 0, 1, 1, 0, 0, 1, 1, 0, 0},
      {0, 0, 1, 1, 0, 0, 1, 1, 0, 1},
      {1, 1, 0, 0, 1, 1, 0, 0, 0, 0},
      {1, 1, 0, 0, 1, 1, 0, 0, 1, 1},
      {1, 1, 0, 0, 1, 1, 0, 0, 1, 0},
      {1, 1, 0, 0, 1, 1, 0, 0, 0, 1},
      {1, 1, 1, 0, 1, 1, 0, 0, 1, 1},
      {1, 1, 0, 0, 1, 1, 0, 0, 1, 0},
      {1, 0, 0, 0, 1, 0, 0, 0, 0, 0},
      {0, 0, 0, 0, 0, 1, 0, 0, 0, 1},
      {0, 0, 0, 1, 0, 0, 0, 0, 0, 0},
      {0, 1, 0, 0, 0, 0, 0, 0, 1, 0},
      {0, 0, 0, 0, 0, 0, 1, 0, 0, 0},
  }};
  return data;
}

MixtureModel::MixtureModel(const MixtureConfig& cfg) {
  data_ = mixture_data();
  // the published row order carries the hand-made clustering; run with a
  // randomized observation order so it cannot matter
  std::vector<int> perm(kMixtureObs);
  std::iota(perm.begin(), perm.end(), 0);
  Rng prng(mix_seed(cfg.obs_order_seed, 0x6d69785fULL));
  prng.shuffle(perm);
  auto orig = data_;
  for (int i = 0; i < kMixtureObs; i++) data_[i] = orig[perm[i]];
  for (int t = 0; t < kMixtureObs + 3; t++)
    logt_[t] = t > 0 ? std::log(static_cast<double>(t)) : 0.0;
  set_state(std::vector<int>(kMixtureObs, 0));
}

std::unique_ptr<Model> MixtureModel::clone() const {
  return std::make_unique<MixtureModel>(*this);
}

void MixtureModel::set_state(const std::vector<int>& state) {
  state_ = state;
  counts_.assign(kMixtureComponents, 0);
  sums_.assign(kMixtureComponents, {});
  for (int i = 0; i < kMixtureObs; i++) {
    int x = state_[i];
    counts_[x]++;
    for (int h = 0; h < kMixtureBits; h++) sums_[x][h] += data_[i][h];
  }
}

void MixtureModel::conditional(int i, std::vector<double>& out) const {
  out.resize(kMixtureComponents);
  const int xi = state_[i];
  double maxlog = -1e300;
  for (int x = 0; x < kMixtureComponents; x++) {
    long c = counts_[x] - (x == xi ? 1 : 0);
    double lp = logt_[c + 1] - kMixtureBits * logt_[c + 2];
    for (int h = 0; h < kMixtureBits; h++) {
      long s = sums_[x][h] - (x == xi ? data_[i][h] : 0);
      lp += data_[i][h] ? logt_[s + 1] : logt_[c - s + 1];
    }
    out[x] = lp;
    maxlog = std::max(maxlog, lp);
  }
  double total = 0.0;
  for (int x = 0; x < kMixtureComponents; x++) {
    out[x] = std::exp(out[x] - maxlog);
    total += out[x];
  }
  for (int x = 0; x < kMixtureComponents; x++) out[x] /= total;
}

void MixtureModel::set_value(int i, int v) {
  int old = state_[i];
  if (old == v) return;
  counts_[old]--;
  counts_[v]++;
  for (int h = 0; h < kMixtureBits; h++) {
    sums_[old][h] -= data_[i][h];
    sums_[v][h] += data_[i][h];
  }
  state_[i] = v;
}

std::vector<std::string> MixtureModel::function_names() const {
  return {"obs1_in_cluster1", "obs10_cluster_size", "obs30_cluster_size"};
}

void MixtureModel::functions(std::vector<double>& out) const {
  out.resize(3);
  out[0] = state_[0] == 0 ? 1.0 : 0.0;
  out[1] = static_cast<double>(counts_[state_[9]]);
  out[2] = static_cast<double>(counts_[state_[29]]);
}

void MixtureModel::functions_fresh(const std::vector<int>& state,
                                   std::vector<double>& out) const {
  out.resize(3);
  out[0] = state[0] == 0 ? 1.0 : 0.0;
  long s10 = 0, s30 = 0;
  for (int i = 0; i < kMixtureObs; i++) {
    if (state[i] == state[9]) s10++;
    if (state[i] == state[29]) s30++;
  }
  out[1] = static_cast<double>(s10);
  out[2] = static_cast<double>(s30);
}

double MixtureModel::log_weight(const std::vector<int>& state) const {
  // log of the collapsed joint, dropping the state-independent
  // (m-1)!/(n+m-1)! factor
  std::vector<long> counts(kMixtureComponents, 0);
  std::vector<std::array<long, kMixtureBits>> sums(kMixtureComponents,
                                                   std::array<long, kMixtureBits>{});
  for (int i = 0; i < kMixtureObs; i++) {
    counts[state[i]]++;
    for (int h = 0; h < kMixtureBits; h++) sums[state[i]][h] += data_[i][h];
  }
  double lp = 0.0;
  for (int x = 0; x < kMixtureComponents; x++) {
    lp += std::lgamma(static_cast<double>(counts[x] + 1));
    for (int h = 0; h < kMixtureBits; h++)
      lp += std::lgamma(static_cast<double>(sums[x][h] + 1)) +
            std::lgamma(static_cast<double>(counts[x] - sums[x][h] + 1)) -
            std::lgamma(static_cast<double>(counts[x] + 2));
  }
  return lp;
}

void MixtureModel::recompute_stats(
    std::vector<long>& counts,
    std::vector<std::array<long, kMixtureBits>>& sums) const {
  counts.assign(kMixtureComponents, 0);
  sums.assign(kMixtureComponents, {});
  for (int i = 0; i < kMixtureObs; i++) {
    counts[state_[i]]++;
    for (int h = 0; h < kMixtureBits; h++) sums[state_[i]][h] += data_[i][h];
  }
}

// --- belief network ---------------------------------------------------------

namespace {

inline void log_softmax(double* x, int n) {
  double mx = x[0];
  for (int i = 1; i < n; i++) mx = std::max(mx, x[i]);
  double total = 0.0;
  for (int i = 0; i < n; i++) total += std::exp(x[i] - mx);
  double lz = mx + std::log(total);
  for (int i = 0; i < n; i++) x[i] -= lz;
}

}  // namespace

BeliefNetModel::BeliefNetModel(const BeliefNetConfig& cfg) : cfg_(cfg) {
  Rng prng(mix_seed(cfg.param_seed, 0x626e6574ULL));
  for (auto& row : alpha_)
    for (auto& x : row) x = cfg.param_scale * prng.student_t4();
  for (auto& a : beta_)
    for (auto& b : a)
      for (auto& c : b)
        for (auto& x : c) x = cfg.param_scale * prng.student_t4();
  for (auto& a : gamma_)
    for (auto& b : a)
      for (auto& c : b)
        for (auto& x : c) x = cfg.param_scale * prng.student_t4();
  set_state(std::vector<int>(10, 0));
}

std::unique_ptr<Model> BeliefNetModel::clone() const {
  return std::make_unique<BeliefNetModel>(*this);
}

int BeliefNetModel::n_values(int i) const {
  if (i < kTop) return kTopVals;
  if (i < kTop + kMid) return kMidVals;
  return kBotVals;
}

void BeliefNetModel::set_state(const std::vector<int>& state) { state_ = state; }

void BeliefNetModel::top_log_marginal(int i, double out[kTopVals]) const {
  for (int u = 0; u < kTopVals; u++) out[u] = alpha_[i][u];
  log_softmax(out, kTopVals);
}

void BeliefNetModel::mid_log_conditional(int j, const int* top_vals,
                                         double out[kMidVals]) const {
  for (int v = 0; v < kMidVals; v++) {
    double s = 0.0;
    if (cfg_.double_exp_input)
      for (int i = 0; i < kTop; i++) s += std::exp(beta_[i][j][top_vals[i]][v]);
    else
      for (int i = 0; i < kTop; i++) s += beta_[i][j][top_vals[i]][v];
    out[v] = s;
  }
  log_softmax(out, kMidVals);
}

void BeliefNetModel::bot_log_conditional(int k, const int* mid_vals,
                                         double out[kBotVals]) const {
  for (int w = 0; w < kBotVals; w++) {
    double s = 0.0;
    if (cfg_.double_exp_input)
      for (int j = 0; j < kMid; j++) s += std::exp(gamma_[j][k][mid_vals[j]][w]);
    else
      for (int j = 0; j < kMid; j++) s += gamma_[j][k][mid_vals[j]][w];
    out[w] = s;
  }
  log_softmax(out, kBotVals);
}

void BeliefNetModel::conditional(int i, std::vector<double>& out) const {
  int tops[kTop] = {state_[0], state_[1]};
  int mids[kMid];
  for (int j = 0; j < kMid; j++) mids[j] = state_[kTop + j];
  double logp[kTopVals];  // largest layer size
  if (i < kTop) {
    double lm[kTopVals], mid[kMidVals];
    top_log_marginal(i, lm);
    for (int v = 0; v < kTopVals; v++) {
      tops[i] = v;
      double lp = lm[v];
      for (int j = 0; j < kMid; j++) {
        mid_log_conditional(j, tops, mid);
        lp += mid[state_[kTop + j]];
      }
      logp[v] = lp;
    }
    tops[i] = state_[i];
    log_softmax(logp, kTopVals);
    out.resize(kTopVals);
    for (int v = 0; v < kTopVals; v++) out[v] = std::exp(logp[v]);
  } else if (i < kTop + kMid) {
    int j = i - kTop;
    double mid[kMidVals], bot[kBotVals];
    mid_log_conditional(j, tops, mid);
    for (int v = 0; v < kMidVals; v++) {
      mids[j] = v;
      double lp = mid[v];
      for (int k = 0; k < kBot; k++) {
        bot_log_conditional(k, mids, bot);
        lp += bot[state_[kTop + kMid + k]];
      }
      logp[v] = lp;
    }
    mids[j] = state_[i];
    log_softmax(logp, kMidVals);
    out.resize(kMidVals);
    for (int v = 0; v < kMidVals; v++) out[v] = std::exp(logp[v]);
  } else {
    int k = i - kTop - kMid;
    double bot[kBotVals];
    bot_log_conditional(k, mids, bot);
    out.resize(kBotVals);
    for (int w = 0; w < kBotVals; w++) out[w] = std::exp(bot[w]);
  }
}

std::vector<std::string> BeliefNetModel::function_names() const {
  return {"mid1_is_1", "bot1_is_1", "top1_and_bot1_are_1"};
}

void BeliefNetModel::functions(std::vector<double>& out) const {
  functions_fresh(state_, out);
}

void BeliefNetModel::functions_fresh(const std::vector<int>& state,
                                     std::vector<double>& out) const {
  out.resize(3);
  out[0] = state[kTop] == 0 ? 1.0 : 0.0;
  out[1] = state[kTop + kMid] == 0 ? 1.0 : 0.0;
  out[2] = (state[0] == 0 && state[kTop + kMid] == 0) ? 1.0 : 0.0;
}

double BeliefNetModel::log_weight(const std::vector<int>& state) const {
  int tops[kTop] = {state[0], state[1]};
  int mids[kMid];
  for (int j = 0; j < kMid; j++) mids[j] = state[kTop + j];
  double lp = 0.0;
  double buf[kTopVals];
  for (int i = 0; i < kTop; i++) {
    top_log_marginal(i, buf);
    lp += buf[state[i]];
  }
  for (int j = 0; j < kMid; j++) {
    mid_log_conditional(j, tops, buf);
    lp += buf[state[kTop + j]];
  }
  for (int k = 0; k < kBot; k++) {
    bot_log_conditional(k, mids, buf);
    lp += buf[state[kTop + kMid + k]];
  }
  return lp;
}

// --- exact enumeration -------------------------------------------------------

std::vector<MomentPair> brute_force_expectations(const Model& model) {
  const int n = model.n_vars();
  double log_states = 0.0;
  for (int i = 0; i < n; i++) log_states += std::log(model.n_values(i));
  if (log_states > std::log(1e8))
    throw std::invalid_argument("enumeration infeasible");

  std::vector<int> state(n, 0);
  auto advance = [&]() {
    for (int i = n - 1; i >= 0; i--) {
      if (++state[i] < model.n_values(i)) return true;
      state[i] = 0;
    }
    return false;
  };

  // pass 1: max log weight for stable exponentiation
  double maxlw = -1e300;
  do {
    maxlw = std::max(maxlw, model.log_weight(state));
  } while (advance());

  const int nf = model.n_functions();
  std::vector<double> f(nf), sum1(nf, 0.0), sum2(nf, 0.0);
  double z = 0.0;
  state.assign(n, 0);
  do {
    double w = std::exp(model.log_weight(state) - maxlw);
    z += w;
    model.functions_fresh(state, f);
    for (int j = 0; j < nf; j++) {
      sum1[j] += w * f[j];
      sum2[j] += w * f[j] * f[j];
    }
  } while (advance());

  std::vector<MomentPair> out(nf);
  for (int j = 0; j < nf; j++) {
    out[j].mean = sum1[j] / z;
    out[j].variance = sum2[j] / z - out[j].mean * out[j].mean;
  }
  return out;
}

std::unique_ptr<Model> make_model(const std::string& spec, std::uint64_t aux_seed) {
  if (spec == "potts8") return std::make_unique<PottsModel>(PottsConfig{8, 8, 4, 0.85});
  if (spec == "potts5") return std::make_unique<PottsModel>(PottsConfig{5, 5, 4, -0.4});
  if (spec == "mixture") return std::make_unique<MixtureModel>(MixtureConfig{aux_seed});
  if (spec == "beliefnet") return std::make_unique<BeliefNetModel>(BeliefNetConfig{aux_seed});
  throw std::invalid_argument("unknown model: " + spec);
}

}  // namespace mgs
