#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mgs/rng.hpp"

namespace mgs {

enum class Scan {
  Random,
  Sequential,
  ShuffledSequential,
  Checkerboard,
  RandomOrder,
  RandomOrderX4,
};

inline constexpr Scan kAllScans[] = {
    Scan::Random,       Scan::Sequential,  Scan::ShuffledSequential,
    Scan::Checkerboard, Scan::RandomOrder, Scan::RandomOrderX4};

const char* scan_name(Scan s);
std::optional<Scan> parse_scan(const std::string& name);

/// Produces the per-scan sequence of variable indices to update.
/// Checkerboard needs lattice dimensions (R rows, C cols, row-major
/// indexing); constructing it without them throws.
class ScanScheduler {
 public:
  ScanScheduler(Scan kind, int n, std::uint64_t shuffle_seed, int rows = 0,
                int cols = 0);

  /// Fills `out` with the schedule for the given scan, drawing any
  /// randomness from `rng`.  Scans must be requested in order 0,1,2,...
  void schedule(long scan_index, Rng& rng, std::vector<int>& out);

  Scan kind() const { return kind_; }

 private:
  Scan kind_;
  int n_;
  std::vector<int> fixed_;   // ShuffledSequential / Checkerboard / Sequential
  std::vector<int> cached_;  // RandomOrderX4
};

}  // namespace mgs
