#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mgs/rng.hpp"

namespace mgs {

/// A target distribution exposing full conditionals for single-variable
/// updates and the monitored functions of state.  An instance owns the
/// chain-local state (and any cached sufficient statistics), so each
/// chain uses its own copy.
class Model {
 public:
  virtual ~Model() = default;
  virtual std::unique_ptr<Model> clone() const = 0;
  virtual std::string name() const = 0;

  virtual int n_vars() const = 0;
  virtual int n_values(int i) const = 0;
  /// Row-major lattice dimensions if the variables form one.
  virtual bool lattice_shape(int& rows, int& cols) const {
    (void)rows, (void)cols;
    return false;
  }
  /// False when there is no meaningful predefined variable order
  /// (rules out the sequential scan).
  virtual bool has_natural_order() const { return true; }

  /// Install a full state (recomputing cached statistics).
  virtual void set_state(const std::vector<int>& state) = 0;
  const std::vector<int>& state() const { return state_; }
  void init_random(Rng& rng);

  /// Normalized conditional distribution of variable i given the rest.
  virtual void conditional(int i, std::vector<double>& out) const = 0;
  /// Assign variable i (updating cached statistics incrementally).
  virtual void set_value(int i, int v) = 0;

  virtual int n_functions() const = 0;
  virtual std::vector<std::string> function_names() const = 0;
  /// Monitored functions of the current state (may use cached statistics).
  virtual void functions(std::vector<double>& out) const = 0;
  /// The same functions recomputed from scratch for an arbitrary state.
  virtual void functions_fresh(const std::vector<int>& state,
                               std::vector<double>& out) const = 0;

  /// Unnormalized log probability of a state (for exact enumeration).
  virtual double log_weight(const std::vector<int>& state) const = 0;

 protected:
  std::vector<int> state_;
};

// --- Potts lattice -----------------------------------------------------

struct PottsConfig {
  int rows = 8, cols = 8;
  int n_colors = 4;
  double coupling = 0.85;
};

class PottsModel final : public Model {
 public:
  explicit PottsModel(const PottsConfig& cfg);
  std::unique_ptr<Model> clone() const override;
  std::string name() const override;
  int n_vars() const override { return cfg_.rows * cfg_.cols; }
  int n_values(int) const override { return cfg_.n_colors; }
  bool lattice_shape(int& rows, int& cols) const override {
    rows = cfg_.rows, cols = cfg_.cols;
    return true;
  }
  void set_state(const std::vector<int>& state) override;
  void conditional(int i, std::vector<double>& out) const override;
  void set_value(int i, int v) override;
  int n_functions() const override { return 3; }
  std::vector<std::string> function_names() const override;
  void functions(std::vector<double>& out) const override;
  void functions_fresh(const std::vector<int>& state,
                       std::vector<double>& out) const override;
  double log_weight(const std::vector<int>& state) const override;

  const PottsConfig& config() const { return cfg_; }

 private:
  void neighbors_of(int i, int out[4]) const;
  PottsConfig cfg_;
  std::vector<long> value_counts_;
  long equal_pairs_ = 0;
};

// --- Bayesian mixture indicators ---------------------------------------

struct MixtureConfig {
  std::uint64_t obs_order_seed = 0;  ///< permutes the observation order once
};

inline constexpr int kMixtureObs = 30;
inline constexpr int kMixtureBits = 10;
inline constexpr int kMixtureComponents = 9;

/// The 30x10 binary observation matrix, in its published order.
const std::array<std::array<int, kMixtureBits>, kMixtureObs>& mixture_data();

class MixtureModel final : public Model {
 public:
  explicit MixtureModel(const MixtureConfig& cfg);
  std::unique_ptr<Model> clone() const override;
  std::string name() const override { return "mixture"; }
  int n_vars() const override { return kMixtureObs; }
  int n_values(int) const override { return kMixtureComponents; }
  bool has_natural_order() const override { return false; }
  void set_state(const std::vector<int>& state) override;
  void conditional(int i, std::vector<double>& out) const override;
  void set_value(int i, int v) override;
  int n_functions() const override { return 3; }
  std::vector<std::string> function_names() const override;
  void functions(std::vector<double>& out) const override;
  void functions_fresh(const std::vector<int>& state,
                       std::vector<double>& out) const override;
  double log_weight(const std::vector<int>& state) const override;

  /// Component counts C_x and per-bit sums S_xh recomputed from scratch
  /// (for checking the incrementally maintained ones).
  void recompute_stats(std::vector<long>& counts,
                       std::vector<std::array<long, kMixtureBits>>& sums) const;
  const std::vector<long>& counts() const { return counts_; }
  const std::vector<std::array<long, kMixtureBits>>& sums() const { return sums_; }

 private:
  std::array<std::array<int, kMixtureBits>, kMixtureObs> data_;  // permuted rows
  std::vector<long> counts_;
  std::vector<std::array<long, kMixtureBits>> sums_;
  std::array<double, kMixtureObs + 3> logt_;  // log(1..n+2) lookup
};

// --- three-layer belief network -----------------------------------------

struct BeliefNetConfig {
  std::uint64_t param_seed = 1;
  double param_scale = 1.0;  ///< 0 gives the all-parameters-zero network
  /// Exponentiate the parameters inside the summed softmax input
  /// (s = sum_i exp(b)) instead of the standard logit sum (s = sum_i b).
  /// The published description reads as the former, but the published
  /// self-transition frequencies are only reproduced by the latter.
  bool double_exp_input = false;
};

class BeliefNetModel final : public Model {
 public:
  explicit BeliefNetModel(const BeliefNetConfig& cfg);
  std::unique_ptr<Model> clone() const override;
  std::string name() const override { return "beliefnet"; }
  int n_vars() const override { return 10; }
  int n_values(int i) const override;
  void set_state(const std::vector<int>& state) override;
  void conditional(int i, std::vector<double>& out) const override;
  void set_value(int i, int v) override { state_[i] = v; }
  int n_functions() const override { return 3; }
  std::vector<std::string> function_names() const override;
  void functions(std::vector<double>& out) const override;
  void functions_fresh(const std::vector<int>& state,
                       std::vector<double>& out) const override;
  double log_weight(const std::vector<int>& state) const override;

  static constexpr int kTop = 2, kMid = 5, kBot = 3;
  static constexpr int kTopVals = 5, kMidVals = 4, kBotVals = 3;

 private:
  // log conditional probability tables, recomputed on demand
  void top_log_marginal(int i, double out[kTopVals]) const;
  void mid_log_conditional(int j, const int* top_vals, double out[kMidVals]) const;
  void bot_log_conditional(int k, const int* mid_vals, double out[kBotVals]) const;

  BeliefNetConfig cfg_;
  double alpha_[kTop][kTopVals];
  double beta_[kTop][kMid][kTopVals][kMidVals];
  double gamma_[kMid][kBot][kMidVals][kBotVals];
};

// --- exact enumeration ---------------------------------------------------

struct MomentPair {
  double mean = 0.0;
  double variance = 0.0;
};

/// Exact expectations/variances of the monitored functions by full
/// enumeration of the state space, weighted by the unnormalized joint.
/// Throws std::invalid_argument("enumeration infeasible") beyond 1e8
/// configurations.
std::vector<MomentPair> brute_force_expectations(const Model& model);

/// Factory: "potts8", "potts5", "mixture", "beliefnet".
std::unique_ptr<Model> make_model(const std::string& spec, std::uint64_t aux_seed);

}  // namespace mgs
