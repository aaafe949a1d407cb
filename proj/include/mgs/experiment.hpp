#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mgs/chain.hpp"
#include "mgs/kernels.hpp"
#include "mgs/scans.hpp"

namespace mgs {

/// Method groups of the study design: (1) Gibbs sampling and its
/// derivatives, (2) shifted-tower methods, (3) the best of both plus the
/// slice methods.
std::vector<Method> method_group(int group);

/// Scan orders a model supports (no sequential scan without a natural
/// variable order; checkerboard only on lattices).
bool scan_valid_for(const Model& model, Scan scan);

struct ExperimentConfig {
  std::string experiment_id = "exp";
  std::string model = "potts8";
  int group = 1;
  std::vector<Scan> scans{Scan::Random, Scan::ShuffledSequential};
  long n_scans = 2000;  ///< K
  int replicates = 4;
  std::uint64_t base_seed = 1;
  std::string out_dir = ".";
  int threads = 1;
  bool timing = false;          ///< write measured wall time into the CSV
  bool use_direct_sampler = true;
  long stream_maxlag = 0;       ///< >0 drops traces, streams autocovariances
};

inline constexpr const char* kCsvHeader =
    "experiment_id,model,method,scan,replicate,seed,function,thinned,K,n,"
    "asym_var,gamma0,M,self_freq,max_ge_half_freq,mean_estimate,mcse,"
    "wall_time_s";

struct ExperimentOutput {
  std::string csv_path;
  std::string manifest_path;
};

/// Run the full grid (method x scan x replicate), computing thinned and
/// unthinned asymptotic-variance estimates per monitored function, and
/// write one CSV plus a JSON manifest.  Validates the model/scan
/// combinations before any run.
ExperimentOutput run_experiment(const ExperimentConfig& cfg);

struct SummaryRow {
  std::string experiment_id, function, scan, method;
  bool thinned = false;
  int n_replicates = 0;
  double mean_asym_var = 0.0, min_asym_var = 0.0, max_asym_var = 0.0;
  double mean_estimate = 0.0;
  double mean_self_freq = 0.0;
};

/// Aggregate result CSVs over replicates, keyed by
/// (experiment_id, function, scan, method, thinned), so mixed
/// experiments stay separate.  Throws on a schema mismatch.
std::vector<SummaryRow> summarize(const std::vector<std::string>& csv_paths);

/// Render a summary as an aligned text table.
std::string format_summary(const std::vector<SummaryRow>& rows);

}  // namespace mgs
