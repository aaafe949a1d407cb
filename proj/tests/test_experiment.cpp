#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "mgs/experiment.hpp"

using namespace mgs;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig tiny_config(const std::string& id) {
  ExperimentConfig cfg;
  cfg.experiment_id = id;
  cfg.model = "potts5";
  cfg.group = 1;
  cfg.scans = {Scan::Random, Scan::ShuffledSequential};
  cfg.n_scans = 60;
  cfg.replicates = 2;
  cfg.base_seed = 42;
  cfg.out_dir = std::filesystem::temp_directory_path() / "mgs_exp_test";
  return cfg;
}

}  // namespace

TEST_CASE("method groups match the study design") {
  auto g1 = method_group(1);
  CHECK(g1 == std::vector<Method>{Method::GS, Method::MHGS, Method::UNAM,
                                  Method::DNAM, Method::UDNAM, Method::ZDNAM});
  auto g2 = method_group(2);
  CHECK(g2 == std::vector<Method>{Method::ST, Method::DST, Method::UST,
                                  Method::UDST, Method::HST, Method::OHST});
  auto g3 = method_group(3);
  CHECK(g3 == std::vector<Method>{Method::UNAM, Method::ZDNAM, Method::ST,
                                  Method::UDST, Method::FSS, Method::ZFSS});
  CHECK_THROWS(method_group(0));
}

TEST_CASE("scan validity per model") {
  auto mix = make_model("mixture", 0);
  CHECK(!scan_valid_for(*mix, Scan::Sequential));
  CHECK(!scan_valid_for(*mix, Scan::Checkerboard));
  CHECK(scan_valid_for(*mix, Scan::Random));
  auto bn = make_model("beliefnet", 0);
  CHECK(scan_valid_for(*bn, Scan::Sequential));
  CHECK(!scan_valid_for(*bn, Scan::Checkerboard));
  auto potts = make_model("potts8", 0);
  for (Scan s : kAllScans) CHECK(scan_valid_for(*potts, s));
}

TEST_CASE("run_experiment writes the expected row count") {
  // n_scans=60 is below the asym-var minimum trace length for the
  // thinned series, so use more scans for the mixture of estimates
  auto cfg = tiny_config("rowcount");
  cfg.n_scans = 1200;  // thinned trace length 1200 >= 1000
  auto out = run_experiment(cfg);
  std::ifstream in(out.csv_path);
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);
  CHECK(line == kCsvHeader);
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) rows++;
  // 6 methods x 2 scans x 2 replicates x 3 functions x 2 thinning
  CHECK(rows == 6 * 2 * 2 * 3 * 2);
}

TEST_CASE("identical configs give byte-identical CSVs") {
  auto cfg = tiny_config("determinism_a");
  cfg.n_scans = 1100;
  cfg.scans = {Scan::ShuffledSequential};
  cfg.group = 3;
  auto out1 = run_experiment(cfg);
  auto first = slurp(out1.csv_path);
  cfg.experiment_id = "determinism_b";
  auto out2 = run_experiment(cfg);
  auto second = slurp(out2.csv_path);
  // identical apart from the experiment id column
  std::string a = first, b = second;
  std::string::size_type pos;
  while ((pos = a.find("determinism_a")) != std::string::npos)
    a.replace(pos, 13, "X");
  while ((pos = b.find("determinism_b")) != std::string::npos)
    b.replace(pos, 13, "X");
  CHECK(a == b);
}

TEST_CASE("threaded and serial runs write identical results") {
  auto cfg = tiny_config("serial");
  cfg.n_scans = 1100;
  auto s = run_experiment(cfg);
  auto serial = slurp(s.csv_path);
  cfg.experiment_id = "threaded";
  cfg.threads = 4;
  auto t = run_experiment(cfg);
  auto threaded = slurp(t.csv_path);
  std::string a = serial, b = threaded;
  std::string::size_type pos;
  while ((pos = a.find("serial")) != std::string::npos) a.replace(pos, 6, "X");
  while ((pos = b.find("threaded")) != std::string::npos) b.replace(pos, 8, "X");
  CHECK(a == b);
}

TEST_CASE("invalid model/scan combinations fail before any run") {
  auto cfg = tiny_config("invalid");
  cfg.model = "mixture";
  cfg.scans = {Scan::Sequential};
  CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
  cfg.scans = {Scan::Checkerboard};
  CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
}

TEST_CASE("summarize aggregates replicates") {
  auto cfg = tiny_config("summary");
  cfg.n_scans = 1100;
  cfg.replicates = 3;
  cfg.scans = {Scan::Random};
  auto out = run_experiment(cfg);
  auto rows = summarize({out.csv_path});
  // 6 methods x 1 scan x 3 functions x 2 thinning
  CHECK(rows.size() == 6 * 3 * 2);
  for (const auto& r : rows) {
    CHECK(r.n_replicates == 3);
    CHECK(r.min_asym_var <= r.mean_asym_var);
    CHECK(r.mean_asym_var <= r.max_asym_var);
  }
  auto table = format_summary(rows);
  CHECK(table.find("GS") != std::string::npos);
  // schema mismatch detection
  auto bad = std::filesystem::temp_directory_path() / "mgs_bad.csv";
  std::ofstream(bad) << "nope,nope\n1,2\n";
  CHECK_THROWS(summarize({bad.string()}));
}

TEST_CASE("manifest records seeds and configuration") {
  auto cfg = tiny_config("manifest");
  cfg.n_scans = 1100;
  cfg.scans = {Scan::Random};
  cfg.replicates = 1;
  auto out = run_experiment(cfg);
  auto text = slurp(out.manifest_path);
  CHECK(text.find("\"base_seed\": 42") != std::string::npos);
  CHECK(text.find("\"model\": \"potts5\"") != std::string::npos);
  CHECK(text.find("\"cells\"") != std::string::npos);
}

TEST_CASE("the published quick-grid arithmetic: 432 rows") {
  ExperimentConfig cfg;
  cfg.experiment_id = "grid432";
  cfg.model = "potts8";
  cfg.group = 1;
  cfg.scans = {Scan::Random,       Scan::Sequential,  Scan::ShuffledSequential,
               Scan::Checkerboard, Scan::RandomOrder, Scan::RandomOrderX4};
  cfg.n_scans = 2000;
  cfg.replicates = 2;
  cfg.base_seed = 9;
  cfg.threads = 4;
  cfg.out_dir = std::filesystem::temp_directory_path() / "mgs_exp_test";
  auto out = run_experiment(cfg);
  std::ifstream in(out.csv_path);
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) rows++;
  CHECK(rows == 432);
}

TEST_CASE("summarize keeps mixed experiments separate") {
  auto cfg = tiny_config("mixA");
  cfg.n_scans = 1100;
  cfg.scans = {Scan::Random};
  cfg.replicates = 1;
  auto a = run_experiment(cfg);
  cfg.experiment_id = "mixB";
  auto b = run_experiment(cfg);
  auto rows = summarize({a.csv_path, b.csv_path});
  int na = 0, nb = 0;
  for (const auto& r : rows) {
    if (r.experiment_id == "mixA") na++;
    if (r.experiment_id == "mixB") nb++;
    CHECK(r.n_replicates == 1);
  }
  CHECK(na == 6 * 3 * 2);
  CHECK(nb == 6 * 3 * 2);
}

TEST_CASE("experiment-level streaming mode produces the same estimates") {
  auto cfg = tiny_config("streamoff");
  cfg.n_scans = 1500;
  cfg.scans = {Scan::Sequential};
  cfg.replicates = 1;
  auto off = run_experiment(cfg);
  cfg.experiment_id = "streamon";
  cfg.stream_maxlag = cfg.n_scans * 25 / 100;  // cover the N/100 cap
  auto on = run_experiment(cfg);
  auto ro = summarize({off.csv_path});
  auto rn = summarize({on.csv_path});
  REQUIRE(ro.size() == rn.size());
  for (std::size_t i = 0; i < ro.size(); i++)
    CHECK(rn[i].mean_asym_var ==
          doctest::Approx(ro[i].mean_asym_var).epsilon(1e-9));
}
