#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "mgs/kernels.hpp"
#include "mgs/models.hpp"
#include "mgs/scans.hpp"
#include "mgs/stats.hpp"

namespace mgs {

struct ChainConfig {
  Method method = Method::GS;
  Scan scan = Scan::ShuffledSequential;
  long n_scans = 1000;            ///< K
  std::uint64_t seed = 1;
  std::uint64_t shuffle_seed = 1; ///< shared across runs of one experiment
  bool record_unthinned = true;
  bool use_direct_sampler = true; ///< row-construction path kept for checks
  long stream_maxlag = 0;         ///< >0: accumulate autocovariances, drop traces
};

struct RunResult {
  // per monitored function
  std::vector<std::vector<double>> unthinned;  ///< length n*K each (if stored)
  std::vector<std::vector<double>> thinned;    ///< length K each
  std::vector<StreamingAutocov> stream_unthinned;  ///< when streaming
  std::int64_t self_transitions = 0;
  std::int64_t max_ge_half = 0;  ///< updates whose conditional max was >= 1/2
  std::int64_t n_updates = 0;
  double wall_time_s = 0.0;

  double self_frequency() const {
    return n_updates ? static_cast<double>(self_transitions) / n_updates : 0.0;
  }
  double max_ge_half_frequency() const {
    return n_updates ? static_cast<double>(max_ge_half) / n_updates : 0.0;
  }
};

/// Simulate K scans of single-variable updates on a fresh copy of the
/// model.  The RNG draw order is: initial state, then per scan any
/// schedule draws followed by exactly one draw per variable update.
/// Deterministic given (config, model).
RunResult run_chain(const Model& model_proto, const ChainConfig& cfg);

}  // namespace mgs
