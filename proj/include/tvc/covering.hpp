#pragma once

// Quantization and counting machinery behind the covering-number estimate of
// the bounded-TV class {u : TV(u) <= T, |u|_inf <= M}.

#include <optional>
#include <vector>

#include <gmpxx.h>

#include "tvc/bounds.hpp"
#include "tvc/grid.hpp"

namespace tvc {

/// Levels {-kappa r/2, ..., kappa r/2}, kappa = ceil(2M / r).
struct QuantGrid {
  double r = 1.0;
  double M = 1.0;
  long long kappa = 0;

  double step() const { return r / 2.0; }
  double level(long long j) const { return static_cast<double>(j) * step(); }
  std::size_t size() const { return static_cast<std::size_t>(2 * kappa + 1); }
  std::vector<double> levels() const;
};

QuantGrid quant_grid(double M, double r);

/// Level indices j in [-kappa, kappa] with |x - level(j)| <= r/2.
std::vector<long long> admissible_levels(double x, const QuantGrid& grid);

/// Minimum-TV quantization of a 1-D signal: values on the grid, sup error <= r/2,
/// and TV(q) <= TV(u). Computed by dynamic programming over admissible levels.
ScalarField quantize_tv_1d(const ScalarField& u, const QuantGrid& grid);

/// q = (r/2) floor(2u/r + theta), theta in [0, 1). Any dimension.
ScalarField shifted_floor_quantize(const ScalarField& u, const QuantGrid& grid, double theta);

/// Shifted-floor quantization with the TV-minimizing theta. Averaged over
/// theta the quantized TV equals TV(u), so the minimum never exceeds it.
ScalarField best_shifted_floor_quantize(const ScalarField& u, const QuantGrid& grid);

/// Exhaustive search over all admissible level assignments (|Omega| <= 12)
/// for one with TV <= TV(u); returns the minimum-TV assignment if it does.
std::optional<ScalarField> exhaustive_tv_quantization(const ScalarField& u, const QuantGrid& grid);

/// Number of integer vectors x in Z^R with |x|_1 <= K (dynamic programming).
mpz_class count_l1_ball(long long R, long long K);

/// sum_{i=0}^{min(R,K)} 2^i C(R,i) C(K,i).
mpz_class count_l1_ball_closed_form(long long R, long long K);

/// ln(2 [2 (R+K-1)]^K); requires R >= 1 or K == 0.
double lattice_chain_log_bound(long long R, long long K);

/// Natural log of a positive big integer.
double log_of(const mpz_class& value);

struct QuantizedClassSize {
  long long R = 0;      // gradient entries, d (|Omega| - |Omega|^((d-1)/d))
  long long K = 0;      // ceil(2 C_f |Omega|^b / r)
  long long kappa = 0;  // ceil(2M / r)
  double exact_log_size = 0.0;    // ln((2 kappa + 1) count_l1_ball(R, K))
  double chain_log_bound = 0.0;   // ln(4 kappa + 2) + K ln(2 (R+K-1))
  std::optional<double> thm1_log_bound;  // covering_log_bound when r >= |Omega|^-a
};

QuantizedClassSize quantized_class_log_size(const BoundParams& p, double r);

struct SandwichInstance {
  Shape shape{2};
  int points = 5;     // uniform values per entry on [-M, M], 2..6
  double M = 1.0;
  double tv_max = 0.0;  // T
};

struct CoveringSandwich {
  long long class_size = 0;
  long long lower = 0;  // greedy packing with pairwise sup distance > 2r
  long long upper = 0;  // greedy cover with centers in the class
  bool cover_verified = false;
};

/// Brackets the r-covering number of the discretized class. Throws
/// ParameterError if |Omega| > 4, points outside [2, 6] or more than 5000
/// class elements.
CoveringSandwich brute_force_covering_sandwich(const SandwichInstance& instance, double r);

} // namespace tvc
