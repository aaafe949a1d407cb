#include "mgs/chain.hpp"

#include <chrono>

namespace mgs {

RunResult run_chain(const Model& model_proto, const ChainConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  auto model = model_proto.clone();
  const int n = model->n_vars();
  const int nf = model->n_functions();

  int rows = 0, cols = 0;
  model->lattice_shape(rows, cols);
  ScanScheduler scheduler(cfg.scan, n, cfg.shuffle_seed, rows, cols);

  Rng rng(cfg.seed);
  model->init_random(rng);

  RunResult res;
  res.thinned.assign(nf, {});
  const bool streaming = cfg.stream_maxlag > 0;
  if (cfg.record_unthinned) {
    if (streaming) {
      res.stream_unthinned.assign(nf, StreamingAutocov(cfg.stream_maxlag));
    } else {
      res.unthinned.assign(nf, {});
      for (auto& tr : res.unthinned)
        tr.reserve(static_cast<std::size_t>(cfg.n_scans) * n);
    }
  }
  for (auto& tr : res.thinned) tr.reserve(cfg.n_scans);

  KernelScratch ws;
  std::vector<int> schedule;
  std::vector<double> cond, fvals;
  for (long scan = 0; scan < cfg.n_scans; scan++) {
    scheduler.schedule(scan, rng, schedule);
    for (int idx : schedule) {
      model->conditional(idx, cond);
      int old = model->state()[idx];
      int next = kernel_step(cfg.method, cond, old, rng, ws,
                             cfg.use_direct_sampler);
      double cmax = 0.0;
      for (double p : cond) cmax = std::max(cmax, p);
      if (cmax >= 0.5) res.max_ge_half++;
      if (next == old) res.self_transitions++;
      model->set_value(idx, next);
      res.n_updates++;
      if (cfg.record_unthinned) {
        model->functions(fvals);
        if (streaming)
          for (int j = 0; j < nf; j++) res.stream_unthinned[j].add(fvals[j]);
        else
          for (int j = 0; j < nf; j++) res.unthinned[j].push_back(fvals[j]);
      }
    }
    model->functions(fvals);
    for (int j = 0; j < nf; j++) res.thinned[j].push_back(fvals[j]);
  }

  res.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace mgs
