#include <cmath>

#include "tvc/covering.hpp"

namespace tvc {

mpz_class count_l1_ball(long long R, long long K) {
  if (R < 0 || K < 0) throw ParameterError("count_l1_ball: R and K must be >= 0");
  // ways[k]: vectors over the entries seen so far with |x|_1 == k.
  std::vector<mpz_class> ways(static_cast<std::size_t>(K + 1), 0), next(ways.size()), prefix(ways.size());
  ways[0] = 1;
  for (long long i = 0; i < R; ++i) {
    mpz_class run = 0;
    for (std::size_t k = 0; k < ways.size(); ++k) {
      run += ways[k];
      prefix[k] = run;
    }
    next[0] = ways[0];
    for (std::size_t k = 1; k < ways.size(); ++k) next[k] = ways[k] + 2 * prefix[k - 1];
    ways.swap(next);
  }
  mpz_class total = 0;
  for (const auto& w : ways) total += w;
  return total;
}

mpz_class count_l1_ball_closed_form(long long R, long long K) {
  if (R < 0 || K < 0) throw ParameterError("count_l1_ball_closed_form: R and K must be >= 0");
  mpz_class total = 0, cr = 1, ck = 1, pow2 = 1;
  for (long long i = 0; i <= std::min(R, K); ++i) {
    total += pow2 * cr * ck;
    cr = cr * static_cast<long>(R - i) / static_cast<long>(i + 1);
    ck = ck * static_cast<long>(K - i) / static_cast<long>(i + 1);
    pow2 *= 2;
  }
  return total;
}

double lattice_chain_log_bound(long long R, long long K) {
  if (K == 0) return std::log(2.0);
  if (R < 1) throw ParameterError("lattice_chain_log_bound: requires R >= 1 when K > 0");
  return std::log(2.0) + static_cast<double>(K) * std::log(2.0 * static_cast<double>(R + K - 1));
}

double log_of(const mpz_class& value) {
  if (sgn(value) <= 0) throw ParameterError("log_of: value must be positive");
  long exponent = 0;
  const double mantissa = mpz_get_d_2exp(&exponent, value.get_mpz_t());
  return std::log(mantissa) + static_cast<double>(exponent) * std::log(2.0);
}

QuantizedClassSize quantized_class_log_size(const BoundParams& p, double r) {
  p.validate();
  if (!(r > 0.0)) throw ParameterError("quantized_class_log_size: r must be > 0");
  QuantizedClassSize out;
  const double omega = p.omega();
  const auto N = static_cast<long long>(p.N);
  long long side = 1;
  for (int i = 1; i < p.d; ++i) side *= N;
  out.R = static_cast<long long>(p.d) * (side * N - side);
  out.K = static_cast<long long>(std::ceil(2.0 * p.C_f * std::pow(omega, p.b) / r));
  out.kappa = quant_grid(p.M, r).kappa;
  out.exact_log_size = std::log(2.0 * static_cast<double>(out.kappa) + 1.0) + log_of(count_l1_ball_closed_form(out.R, out.K));
  out.chain_log_bound = std::log(4.0 * static_cast<double>(out.kappa) + 2.0) +
                        (out.K == 0 ? 0.0 : static_cast<double>(out.K) * std::log(2.0 * static_cast<double>(out.R + out.K - 1)));
  if (r >= std::pow(omega, -p.a)) out.thm1_log_bound = covering_log_bound(p, r);
  return out;
}

} // namespace tvc
