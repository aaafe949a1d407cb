#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "mgs/scans.hpp"

using namespace mgs;

namespace {

bool is_permutation_of_all(const std::vector<int>& v, int n) {
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < n; i++)
    if (sorted[i] != i) return false;
  return static_cast<int>(v.size()) == n;
}

}  // namespace

TEST_CASE("sequential scan") {
  ScanScheduler s(Scan::Sequential, 4, 0);
  Rng rng(1);
  std::vector<int> out;
  for (long scan = 0; scan < 3; scan++) {
    s.schedule(scan, rng, out);
    CHECK(out == std::vector<int>{0, 1, 2, 3});
  }
}

TEST_CASE("checkerboard 2x2 gives black then white") {
  ScanScheduler s(Scan::Checkerboard, 4, 0, 2, 2);
  Rng rng(1);
  std::vector<int> out;
  s.schedule(0, rng, out);
  CHECK(out == std::vector<int>{0, 3, 1, 2});
}

TEST_CASE("checkerboard without a lattice is an error") {
  CHECK_THROWS(ScanScheduler(Scan::Checkerboard, 4, 0));
  CHECK_THROWS(ScanScheduler(Scan::Checkerboard, 5, 0, 2, 2));
}

TEST_CASE("random order x4 reuses the permutation for four scans") {
  const int n = 12;
  ScanScheduler s(Scan::RandomOrderX4, n, 0);
  Rng rng(7);
  std::vector<std::vector<int>> scans;
  for (long i = 0; i < 8; i++) {
    std::vector<int> out;
    s.schedule(i, rng, out);
    CHECK(is_permutation_of_all(out, n));
    scans.push_back(out);
  }
  for (int i = 1; i < 4; i++) CHECK(scans[i] == scans[0]);
  for (int i = 5; i < 8; i++) CHECK(scans[i] == scans[4]);
  CHECK(scans[4] != scans[0]);  // new draw (prob 1 - 1/12! of differing)
}

TEST_CASE("permutation-based schedules cover every index once") {
  Rng rng(3);
  for (Scan kind : {Scan::Sequential, Scan::ShuffledSequential, Scan::RandomOrder,
                    Scan::RandomOrderX4}) {
    ScanScheduler s(kind, 9, 42);
    std::vector<int> out;
    for (long i = 0; i < 5; i++) {
      s.schedule(i, rng, out);
      CHECK(is_permutation_of_all(out, 9));
    }
  }
  ScanScheduler cb(Scan::Checkerboard, 15, 0, 3, 5);
  std::vector<int> out;
  cb.schedule(0, rng, out);
  CHECK(is_permutation_of_all(out, 15));
}

TEST_CASE("identical seeds reproduce identical schedules") {
  for (Scan kind : {Scan::Random, Scan::ShuffledSequential, Scan::RandomOrder}) {
    ScanScheduler a(kind, 20, 99), b(kind, 20, 99);
    Rng ra(5), rb(5);
    std::vector<int> oa, ob;
    for (long i = 0; i < 6; i++) {
      a.schedule(i, ra, oa);
      b.schedule(i, rb, ob);
      CHECK(oa == ob);
    }
  }
}

TEST_CASE("shuffled sequential uses the shuffle seed, not the chain rng") {
  ScanScheduler a(Scan::ShuffledSequential, 10, 7);
  ScanScheduler b(Scan::ShuffledSequential, 10, 7);
  Rng ra(1), rb(999);  // different chain rngs
  std::vector<int> oa, ob;
  a.schedule(0, ra, oa);
  b.schedule(0, rb, ob);
  CHECK(oa == ob);
}
