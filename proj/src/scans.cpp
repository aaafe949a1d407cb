#include "mgs/scans.hpp"

#include <numeric>
#include <stdexcept>

namespace mgs {

const char* scan_name(Scan s) {
  switch (s) {
    case Scan::Random: return "random";
    case Scan::Sequential: return "sequential";
    case Scan::ShuffledSequential: return "shuffled-sequential";
    case Scan::Checkerboard: return "checkerboard";
    case Scan::RandomOrder: return "random-order";
    case Scan::RandomOrderX4: return "random-order-x4";
  }
  return "?";
}

std::optional<Scan> parse_scan(const std::string& name) {
  for (Scan s : kAllScans)
    if (name == scan_name(s)) return s;
  return std::nullopt;
}

ScanScheduler::ScanScheduler(Scan kind, int n, std::uint64_t shuffle_seed,
                             int rows, int cols)
    : kind_(kind), n_(n) {
  switch (kind) {
    case Scan::Sequential:
      fixed_.resize(n);
      std::iota(fixed_.begin(), fixed_.end(), 0);
      break;
    case Scan::ShuffledSequential: {
      fixed_.resize(n);
      std::iota(fixed_.begin(), fixed_.end(), 0);
      Rng shuffler(shuffle_seed);
      shuffler.shuffle(fixed_);
      break;
    }
    case Scan::Checkerboard: {
      if (rows < 1 || cols < 1 || rows * cols != n)
        throw std::invalid_argument("checkerboard scan needs a lattice model");
      for (int parity = 0; parity < 2; parity++)
        for (int r = 0; r < rows; r++)
          for (int c = 0; c < cols; c++)
            if ((r + c) % 2 == parity) fixed_.push_back(r * cols + c);
      break;
    }
    default:
      break;
  }
}

void ScanScheduler::schedule(long scan_index, Rng& rng, std::vector<int>& out) {
  out.resize(n_);
  switch (kind_) {
    case Scan::Random:
      for (int i = 0; i < n_; i++)
        out[i] = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_)));
      break;
    case Scan::Sequential:
    case Scan::ShuffledSequential:
    case Scan::Checkerboard:
      out = fixed_;
      break;
    case Scan::RandomOrder:
      std::iota(out.begin(), out.end(), 0);
      rng.shuffle(out);
      break;
    case Scan::RandomOrderX4:
      if (scan_index % 4 == 0 || cached_.empty()) {
        cached_.resize(n_);
        std::iota(cached_.begin(), cached_.end(), 0);
        rng.shuffle(cached_);
      }
      out = cached_;
      break;
  }
}

}  // namespace mgs
