#include "mgs/experiment.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "mgs/stats.hpp"

namespace mgs {

namespace {

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Cell {
  Method method;
  Scan scan;
  int replicate;
  std::uint64_t seed;
};

struct CellResult {
  RunResult run;
  // per function, [0] = unthinned, [1] = thinned
  std::vector<std::array<AsymVarEstimate, 2>> est;
  std::vector<std::array<double, 2>> mean;
};

double trace_mean(const std::vector<double>& t) {
  double s = 0.0;
  for (double x : t) s += x;
  return t.empty() ? 0.0 : s / static_cast<double>(t.size());
}

}  // namespace

std::vector<Method> method_group(int group) {
  switch (group) {
    case 1:
      return {Method::GS, Method::MHGS, Method::UNAM,
              Method::DNAM, Method::UDNAM, Method::ZDNAM};
    case 2:
      return {Method::ST, Method::DST, Method::UST,
              Method::UDST, Method::HST, Method::OHST};
    case 3:
      return {Method::UNAM, Method::ZDNAM, Method::ST,
              Method::UDST, Method::FSS, Method::ZFSS};
    default:
      throw std::invalid_argument("method group must be 1, 2, or 3");
  }
}

bool scan_valid_for(const Model& model, Scan scan) {
  if (scan == Scan::Sequential && !model.has_natural_order()) return false;
  if (scan == Scan::Checkerboard) {
    int r, c;
    return model.lattice_shape(r, c);
  }
  return true;
}

ExperimentOutput run_experiment(const ExperimentConfig& cfg) {
  if (cfg.replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  if (cfg.n_scans < 1) throw std::invalid_argument("K must be >= 1");
  const std::uint64_t aux_seed = mix_seed(cfg.base_seed, 0x6d6f64656cULL);
  auto model = make_model(cfg.model, aux_seed);
  for (Scan s : cfg.scans)
    if (!scan_valid_for(*model, s))
      throw std::invalid_argument(std::string("scan '") + scan_name(s) +
                                  "' is not valid for model " + cfg.model);

  const auto methods = method_group(cfg.group);
  const std::uint64_t shuffle_seed = mix_seed(cfg.base_seed, 0x73687566ULL);

  std::vector<Cell> cells;
  for (Method m : methods) {
    int mi = static_cast<int>(std::find(std::begin(kAllMethods), std::end(kAllMethods), m) -
                              std::begin(kAllMethods));
    for (std::size_t si = 0; si < cfg.scans.size(); si++)
      for (int rep = 0; rep < cfg.replicates; rep++) {
        std::uint64_t seed =
            mix_seed(mix_seed(mix_seed(cfg.base_seed, static_cast<std::uint64_t>(mi)),
                              static_cast<std::uint64_t>(si)),
                     static_cast<std::uint64_t>(rep) + 1);
        cells.push_back({m, cfg.scans[si], rep, seed});
      }
  }

  const int nf = model->n_functions();
  const int n = model->n_vars();
  std::vector<CellResult> results(cells.size());
  std::atomic<long> clamped{0};

  auto run_cell = [&](std::size_t ci) {
    const Cell& cell = cells[ci];
    ChainConfig cc;
    cc.method = cell.method;
    cc.scan = cell.scan;
    cc.n_scans = cfg.n_scans;
    cc.seed = cell.seed;
    cc.shuffle_seed = shuffle_seed;
    cc.use_direct_sampler = cfg.use_direct_sampler;
    cc.stream_maxlag = cfg.stream_maxlag;
    CellResult out;
    out.run = run_chain(*model, cc);
    out.est.resize(nf);
    out.mean.resize(nf);
    for (int j = 0; j < nf; j++) {
      if (cfg.stream_maxlag > 0) {
        out.est[j][0] = out.run.stream_unthinned[j].asymptotic_variance(1);
        out.mean[j][0] = out.run.stream_unthinned[j].mean();
      } else {
        out.est[j][0] = asymptotic_variance(out.run.unthinned[j], 1);
        out.mean[j][0] = trace_mean(out.run.unthinned[j]);
      }
      out.est[j][1] = asymptotic_variance(out.run.thinned[j], n);
      out.mean[j][1] = trace_mean(out.run.thinned[j]);
      if (out.est[j][0].clamped) clamped.fetch_add(1);
      if (out.est[j][1].clamped) clamped.fetch_add(1);
    }
    // traces are no longer needed; free the memory before other cells run
    out.run.unthinned.clear();
    out.run.thinned.clear();
    out.run.stream_unthinned.clear();
    results[ci] = std::move(out);
  };

  if (cfg.threads <= 1) {
    for (std::size_t ci = 0; ci < cells.size(); ci++) run_cell(ci);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      for (;;) {
        std::size_t ci = next.fetch_add(1);
        if (ci >= cells.size()) return;
        run_cell(ci);
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < cfg.threads; t++) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  if (clamped.load() > 0)
    std::fprintf(stderr,
                 "warning: %ld negative asymptotic-variance estimates clamped to 0\n",
                 clamped.load());

  std::filesystem::create_directories(cfg.out_dir);
  ExperimentOutput paths;
  paths.csv_path = cfg.out_dir + "/" + cfg.experiment_id + ".csv";
  paths.manifest_path = cfg.out_dir + "/" + cfg.experiment_id + ".manifest.json";

  auto fnames = model->function_names();
  std::ofstream csv(paths.csv_path);
  if (!csv) throw std::runtime_error("cannot write " + paths.csv_path);
  csv << kCsvHeader << "\n";
  // cells are already in deterministic (method, scan, replicate) order
  for (std::size_t ci = 0; ci < cells.size(); ci++) {
    const Cell& cell = cells[ci];
    const CellResult& r = results[ci];
    for (int j = 0; j < nf; j++) {
      for (int th = 0; th < 2; th++) {
        const AsymVarEstimate& e = r.est[j][th];
        double se = mcse(e, static_cast<std::int64_t>(cfg.n_scans) * n);
        csv << cfg.experiment_id << ',' << cfg.model << ','
            << method_name(cell.method) << ',' << scan_name(cell.scan) << ','
            << cell.replicate << ',' << cell.seed << ',' << fnames[j] << ','
            << (th ? 1 : 0) << ',' << cfg.n_scans << ',' << n << ','
            << fmt_double(e.asym_var) << ',' << fmt_double(e.gamma0) << ','
            << e.truncation_lag << ',' << fmt_double(r.run.self_frequency())
            << ',' << fmt_double(r.run.max_ge_half_frequency()) << ','
            << fmt_double(r.mean[j][th]) << ',' << fmt_double(se) << ','
            << fmt_double(cfg.timing ? r.run.wall_time_s : 0.0) << "\n";
      }
    }
  }
  csv.close();

  nlohmann::json manifest;
  manifest["experiment_id"] = cfg.experiment_id;
  manifest["model"] = cfg.model;
  manifest["group"] = cfg.group;
  manifest["K"] = cfg.n_scans;
  manifest["n"] = n;
  manifest["replicates"] = cfg.replicates;
  manifest["base_seed"] = cfg.base_seed;
  manifest["model_aux_seed"] = aux_seed;
  manifest["shuffle_seed"] = shuffle_seed;
  manifest["use_direct_sampler"] = cfg.use_direct_sampler;
  manifest["stream_maxlag"] = cfg.stream_maxlag;
  manifest["functions"] = fnames;
  manifest["format"] = 1;
  {
    std::vector<std::string> sc;
    for (Scan s : cfg.scans) sc.push_back(scan_name(s));
    manifest["scans"] = sc;
    std::vector<std::string> ms;
    for (Method m : methods) ms.push_back(method_name(m));
    manifest["methods"] = ms;
  }
  {
    nlohmann::json jcells = nlohmann::json::array();
    for (std::size_t ci = 0; ci < cells.size(); ci++) {
      nlohmann::json jc;
      jc["method"] = method_name(cells[ci].method);
      jc["scan"] = scan_name(cells[ci].scan);
      jc["replicate"] = cells[ci].replicate;
      jc["seed"] = cells[ci].seed;
      jc["wall_time_s"] = results[ci].run.wall_time_s;
      jc["self_freq"] = results[ci].run.self_frequency();
      jcells.push_back(jc);
    }
    manifest["cells"] = jcells;
  }
  std::ofstream mf(paths.manifest_path);
  mf << manifest.dump(2) << "\n";
  return paths;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::vector<SummaryRow> summarize(const std::vector<std::string>& csv_paths) {
  struct Acc {
    int n = 0;
    double sum_av = 0, min_av = 0, max_av = 0, sum_mean = 0, sum_self = 0;
  };
  std::map<std::tuple<std::string, std::string, std::string, std::string, int>, Acc>
      acc;
  for (const auto& path : csv_paths) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
      throw std::runtime_error("schema mismatch in " + path);
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto f = split_csv_line(line);
      if (f.size() != 18) throw std::runtime_error("schema mismatch in " + path);
      std::string id = f[0], function = f[6], scan = f[3], method = f[2];
      int thinned = std::stoi(f[7]);
      double av = std::stod(f[10]);
      double mean = std::stod(f[15]);
      double self = std::stod(f[13]);
      auto& a = acc[{id, function, scan, method, thinned}];
      if (a.n == 0) {
        a.min_av = a.max_av = av;
      } else {
        a.min_av = std::min(a.min_av, av);
        a.max_av = std::max(a.max_av, av);
      }
      a.n++;
      a.sum_av += av;
      a.sum_mean += mean;
      a.sum_self += self;
    }
  }
  std::vector<SummaryRow> rows;
  for (const auto& [key, a] : acc) {
    SummaryRow r;
    r.experiment_id = std::get<0>(key);
    r.function = std::get<1>(key);
    r.scan = std::get<2>(key);
    r.method = std::get<3>(key);
    r.thinned = std::get<4>(key) != 0;
    r.n_replicates = a.n;
    r.mean_asym_var = a.sum_av / a.n;
    r.min_asym_var = a.min_av;
    r.max_asym_var = a.max_av;
    r.mean_estimate = a.sum_mean / a.n;
    r.mean_self_freq = a.sum_self / a.n;
    rows.push_back(r);
  }
  return rows;
}

std::string format_summary(const std::vector<SummaryRow>& rows) {
  std::ostringstream out;
  char buf[300];
  std::snprintf(buf, sizeof buf,
                "%-14s %-22s %-20s %-6s %-8s %4s %14s %14s %14s %12s\n",
                "experiment", "function", "scan", "method", "thinned", "reps",
                "mean_asym_var", "min", "max", "mean_est");
  out << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf,
                  "%-14s %-22s %-20s %-6s %-8s %4d %14.6g %14.6g %14.6g %12.6g\n",
                  r.experiment_id.c_str(), r.function.c_str(), r.scan.c_str(),
                  r.method.c_str(), r.thinned ? "yes" : "no", r.n_replicates,
                  r.mean_asym_var, r.min_asym_var, r.max_asym_var,
                  r.mean_estimate);
    out << buf;
  }
  return out.str();
}

}  // namespace mgs
