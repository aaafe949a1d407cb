#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mgs/prob.hpp"
#include "mgs/rng.hpp"

namespace mgs {

/// The fourteen update methods.  ST-family kinds carry their shift
/// convention implicitly: ST/UST/DST shift by max pi, HST/OHST/UDST by 1/2
/// (UDST averages UST and DST, which shift by max pi).
enum class Method {
  GS, MHGS, UNAM, DNAM, UDNAM, ZDNAM,
  ST, UST, DST, UDST, HST, OHST,
  FSS, ZFSS,
};

inline constexpr Method kAllMethods[] = {
    Method::GS,  Method::MHGS, Method::UNAM, Method::DNAM, Method::UDNAM,
    Method::ZDNAM, Method::ST, Method::UST, Method::DST, Method::UDST,
    Method::HST, Method::OHST, Method::FSS, Method::ZFSS};

const char* method_name(Method m);
std::optional<Method> parse_method(const std::string& name);

/// True for the nine methods whose single-variable kernels satisfy
/// detailed balance.
bool is_reversible(Method m);

/// True for the eight methods that always achieve the minimum possible
/// self-transition probability.
bool is_minimal_self(Method m);

enum class Direction { NonDecreasing, NonIncreasing };

/// Permutation ordering values by probability.  Non-decreasing is a
/// stable sort (ties by ascending original index); non-increasing is its
/// exact reversal, so tied values appear in descending index order.
std::vector<int> order_permutation(std::span<const double> pi, Direction dir);

/// Marginal self-transition probability floor: 0 when max pi <= 1/2,
/// else (2p-1)/p with p = max pi.
double min_self_probability(std::span<const double> pi);

// --- row constructors ------------------------------------------------
// All take a normalized conditional pi and the 0-based current value k,
// and write the transition probabilities from k into out (size m).

void gs_row(std::span<const double> pi, int k, std::span<double> out);
void mhgs_row(std::span<const double> pi, int k, std::span<double> out);

/// General nested scheme for an arbitrary focal order sigma.
void nam_row(std::span<const double> pi, std::span<const int> sigma, int k,
             std::span<double> out);

void unam_row(std::span<const double> pi, int k, std::span<double> out);
void dnam_row(std::span<const double> pi, int k, std::span<double> out);
void udnam_row(std::span<const double> pi, int k, std::span<double> out);
void zdnam_row(std::span<const double> pi, int k, std::span<double> out);

/// Tower kernel for any shift in (0,1) and value ordering sigma.
/// Throws std::invalid_argument if shift is outside (0,1).
void shifted_tower_row(std::span<const double> pi, int k, double shift,
                       std::span<const int> sigma, std::span<double> out);

/// Sample directly from shifted_tower_row's distribution using one
/// uniform variate; never returns a zero-probability value.
int shifted_tower_sample(std::span<const double> pi, int k, double shift,
                         std::span<const int> sigma, double u);

void udst_row(std::span<const double> pi, int k, std::span<double> out);

void fss_row(std::span<const double> pi, int k, bool zero_flag,
             std::span<double> out);

/// Sample directly from fss_row's distribution using one uniform variate.
int fss_sample(std::span<const double> pi, int k, bool zero_flag, double u);

/// Plain discrete slice kernel (leftward movement, no flattening).
/// Not one of the fourteen methods; used for diagnostics and tests.
void slice_row(std::span<const double> pi, int k, std::span<double> out);

// --- dispatch ---------------------------------------------------------

/// Scratch buffers so per-update row construction does not allocate.
struct KernelScratch {
  std::vector<int> sigma, sigma2;
  std::vector<double> row2, cum;
};

/// Build the transition row for `method` with its fixed ordering/shift
/// conventions.
void kernel_row(Method method, std::span<const double> pi, int k,
                std::span<double> out, KernelScratch& ws);

/// One transition of `method` from value k, consuming exactly one
/// uniform variate from rng.  When use_direct_sampler is set, the
/// ST/FSS families use their direct samplers instead of building a row.
int kernel_step(Method method, std::span<const double> pi, int k, Rng& rng,
                KernelScratch& ws, bool use_direct_sampler = true);

// convenience wrappers (allocating; fine outside hot loops)
TransitionRow kernel_row(Method method, const ProbVec& pi, int k);
std::vector<std::vector<double>> kernel_matrix(Method method,
                                               std::span<const double> pi);

}  // namespace mgs
