#pragma once

// The epsilon-function of (M_Omega(mu), alpha g(mu)) and its expansion
//   eps = alpha^{d+1} + B alpha^d + C(alpha) alpha^{d-1}.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "hartogs/hartogs_geometry.hpp"
#include "hartogs/special.hpp"

namespace hartogs {

/// Coefficients of epsilon as a polynomial in alpha at a fixed pair;
/// coeffs[k] multiplies alpha^{d+1-k}.
struct EpsilonPolynomial {
  std::vector<Complex> coeffs;
  PointPair pair;

  [[nodiscard]] Complex leading() const { return coeffs.front(); }
  [[nodiscard]] Complex b() const { return coeffs.at(1); }

  [[nodiscard]] Complex operator()(double alpha) const {
    Complex acc(0.0);
    for (const auto& c : coeffs) acc = acc * alpha + c;
    return acc;
  }
};

/// Rising-factorial lengths 1 + b + (r - i) a, i = 1..r.
inline std::vector<unsigned> chi_factor_lengths(const CartanDomainSpec& base) {
  std::vector<unsigned> len;
  for (int i = 1; i <= base.r; ++i) {
    const double l = 1.0 + base.b + (base.r - i) * base.a;
    if (std::abs(l - std::round(l)) > 1e-12 || l < 1.0)
      throw ParameterError("rising-factorial form of chi needs integral invariants");
    len.push_back(static_cast<unsigned>(std::lround(l)));
  }
  return len;
}

/// chi(x) = prod_{i=1}^{r} (mu x - genus + 1 + (i-1) a/2)_{1 + b + (r-i) a},
/// each Gamma ratio written as its finite rising factorial (a degree-d polynomial in x).
inline long double chi_tilde(const CartanHartogsParams& params, long double x) {
  const auto& base = params.base;
  const auto lengths = chi_factor_lengths(base);
  long double prod = 1.0L;
  for (int i = 1; i <= base.r; ++i) {
    const long double start = static_cast<long double>(params.mu) * x - base.genus + 1.0L + (i - 1) * base.a / 2.0L;
    prod *= special::rising_factorial(start, lengths[i - 1]);
  }
  return prod;
}

/// D^k chi(d) = sum_{j=0}^{k} C(k, j) (-1)^j chi(d - j).
inline long double dk_chi(const CartanHartogsParams& params, int k) {
  const int d = params.d();
  if (k < 0 || k > d) throw ParameterError("dk_chi requires 0 <= k <= d");
  long double s = 0.0L;
  for (int j = 0; j <= k; ++j) {
    const long double term = special::binomial(k, j) * chi_tilde(params, d - j);
    s += (j % 2 == 0) ? term : -term;
  }
  return s;
}

/// Relative errors of D^d chi(d)/d! = mu^d and D^{d-1} chi(d)/(d-1)! = mu^{d-1} d (mu(d+1) - genus)/2.
inline CheckReport leading_identities(const CartanHartogsParams& params) {
  const int d = params.d();
  const long double mu = params.mu;
  const long double top = dk_chi(params, d) / special::factorial(d);
  const long double top_expected = std::pow(mu, static_cast<long double>(d));
  const long double next = dk_chi(params, d - 1) / special::factorial(d - 1);
  const long double next_expected =
      std::pow(mu, static_cast<long double>(d - 1)) * d * static_cast<long double>(params.einstein_defect()) / 2.0L;
  // next_expected vanishes at mu0; fall back to an absolute scale there
  const long double scale_next = std::max(std::abs(next_expected), std::pow(mu, static_cast<long double>(d - 1)));
  const double err_top = static_cast<double>(std::abs(top - top_expected) / top_expected);
  const double err_next = static_cast<double>(std::abs(next - next_expected) / scale_next);

  CheckReport r;
  r.suite = "leading_identities";
  r.params = {{"domain", to_string(params.base.dtype)}, {"mu", params.mu}};
  r.statistic = std::max(err_top, err_next);
  r.bound = 1e-9;
  r.details = {{"top", static_cast<double>(top)},
               {"top_expected", static_cast<double>(top_expected)},
               {"top_relative_error", err_top},
               {"next", static_cast<double>(next)},
               {"next_expected", static_cast<double>(next_expected)},
               {"next_relative_error", err_next}};
  settle(r);
  return r;
}

/// X = 1 - w_x conj(w_y) N(z_x, conj z_y)^{-mu}.
inline Complex x_value(const CartanHartogsParams& params, const PointPair& pair) {
  const Complex log_n = log_generic_norm(params.base, pair.x.z, pair.y.z);
  return 1.0 - pair.x.w * std::conj(pair.y.w) * std::exp(-params.mu * log_n);
}

namespace detail {

inline void require_interior(const CartanHartogsParams& params, const PointPair& pair) {
  if (!hartogs_contains(params, pair.x) || !hartogs_contains(params, pair.y))
    throw ParameterError("pair must lie in the interior of the domain");
}

/// mu^{-d} D^k chi(d) / k!, k = 0..d.
inline std::vector<long double> epsilon_weights(const CartanHartogsParams& params) {
  const int d = params.d();
  std::vector<long double> w(d + 1);
  const long double mu_d = std::pow(static_cast<long double>(params.mu), static_cast<long double>(d));
  for (int k = 0; k <= d; ++k) w[k] = dk_chi(params, k) / special::factorial(k) / mu_d;
  return w;
}

}  // namespace detail

namespace detail {

/// Least-squares slope of ys against xs; 0 with fewer than two distinct abscissae.
inline double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() < 2 || xs.size() != ys.size()) return 0.0;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(ys.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace detail

/// eps(alpha; x, conj y) = mu^{-d} sum_k [D^k chi(d)/k!] X^{d-k} (alpha - d - 1)_{k+1}.
inline Complex epsilon_eval(const CartanHartogsParams& params, double alpha, const PointPair& pair) {
  detail::require_alpha(params, alpha);
  detail::require_interior(params, pair);
  const int d = params.d();
  const auto weights = detail::epsilon_weights(params);
  const Complex x = x_value(params, pair);
  std::complex<long double> acc(0.0L);
  const std::complex<long double> xl(x.real(), x.imag());
  for (int k = 0; k <= d; ++k) {
    const long double rising = special::rising_factorial(static_cast<long double>(alpha) - d - 1, k + 1);
    acc += weights[k] * std::pow(xl, d - k) * rising;
  }
  return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

/// Weighted Bergman kernel K_alpha(x, conj y) = eps * exp(alpha Phi(x, conj y)).
inline Complex weighted_kernel(const CartanHartogsParams& params, double alpha, const PointPair& pair) {
  const Complex eps = epsilon_eval(params, alpha, pair);
  return eps * std::exp(alpha * detail::potential_ext_unchecked(params, pair.x, pair.y));
}

/// eps as an alpha-polynomial, from the integer coefficients of the rising factorials.
inline EpsilonPolynomial epsilon_alpha_polynomial(const CartanHartogsParams& params, const PointPair& pair) {
  detail::require_interior(params, pair);
  const int d = params.d();
  const auto weights = detail::epsilon_weights(params);
  const Complex x = x_value(params, pair);
  std::vector<std::complex<long double>> by_degree(d + 2, 0.0L);  // index = power of alpha
  const std::complex<long double> xl(x.real(), x.imag());
  for (int k = 0; k <= d; ++k) {
    const auto poly = special::rising_factorial_poly(-(d + 1), k + 1);
    const std::complex<long double> factor = weights[k] * std::pow(xl, d - k);
    for (std::size_t e = 0; e < poly.size(); ++e) by_degree[e] += factor * static_cast<long double>(poly[e]);
  }
  EpsilonPolynomial out;
  out.pair = pair;
  for (int e = d + 1; e >= 0; --e)
    out.coeffs.emplace_back(static_cast<double>(by_degree[e].real()), static_cast<double>(by_degree[e].imag()));
  return out;
}

/// B = -(d+1)(d+2)/2 + d (mu(d+1) - genus) / (2 mu) * X.
inline Complex coefficient_B(const CartanHartogsParams& params, const PointPair& pair) {
  detail::require_interior(params, pair);
  const int d = params.d();
  return -(d + 1.0) * (d + 2.0) / 2.0 + d * params.einstein_defect() / (2.0 * params.mu) * x_value(params, pair);
}

/// C(alpha) = (eps - alpha^{d+1} - B alpha^d) / alpha^{d-1}.
inline Complex coefficient_C(const CartanHartogsParams& params, double alpha, const PointPair& pair) {
  const int d = params.d();
  const Complex eps = epsilon_eval(params, alpha, pair);
  const Complex b = coefficient_B(params, pair);
  return (eps - std::pow(alpha, d + 1) - b * std::pow(alpha, d)) / std::pow(alpha, d - 1);
}

/// Upper bound of sup |C| over |X| <= 2 and alpha >= d + 2, from the exact coefficients.
inline double c_coefficient_bound(const CartanHartogsParams& params) {
  const int d = params.d();
  const auto weights = detail::epsilon_weights(params);
  // |coeffs[j]| <= sum_k |w_k| |r_{k, d+1-j}| 2^{d-k}; |C| <= sum_{j>=2} |coeffs[j]| (d+2)^{2-j}
  long double bound = 0.0L;
  for (int j = 2; j <= d + 1; ++j) {
    long double cj = 0.0L;
    for (int k = 0; k <= d; ++k) {
      const auto poly = special::rising_factorial_poly(-(d + 1), k + 1);
      const int e = d + 1 - j;
      if (e < static_cast<int>(poly.size()))
        cj += std::abs(weights[k]) * std::abs(static_cast<long double>(poly[e])) * std::pow(2.0L, d - k);
    }
    bound += cj * std::pow(static_cast<long double>(d + 2), 2 - j);
  }
  return static_cast<double>(bound);
}

/// Condition (B') on sampled pairs (uniform and near-boundary stress samples):
/// bounded B, bounded C over the integer alpha-set, bounded X, and the remainder
/// eps - alpha^{d+1} - B alpha^d matched against the degree-(d-1) tail of the exact
/// alpha-polynomial at every alpha of the set.
inline CheckReport condition_bprime_report(const CartanHartogsParams& params, const std::vector<int>& alpha_set,
                                           const SamplerConfig& config) {
  const int d = params.d();
  if (alpha_set.size() < static_cast<std::size_t>(d + 3))
    throw ParameterError("condition B' needs at least d + 3 = " + std::to_string(d + 3) + " values of alpha");
  for (int a : alpha_set) detail::require_alpha(params, a);
  if (config.n_samples < 1) throw ParameterError("at least one sample pair is required");

  const double b_bound = (d + 1.0) * (d + 2.0) / 2.0 + std::abs(d * params.einstein_defect() / (2.0 * params.mu)) * 2.0;
  const double c_bound = c_coefficient_bound(params);
  constexpr double x_bound = 2.0;
  constexpr int trend_buckets = 8;

  // alpha values for the real-alpha sup: midpoints between consecutive set members
  std::vector<double> real_alphas;
  {
    std::vector<int> sorted = alpha_set;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) real_alphas.push_back(0.5 * (sorted[i] + sorted[i + 1]));
  }

  struct BlockStats {
    double sup_b = 0.0;
    double sup_c = 0.0;
    double sup_c_real = 0.0;
    double sup_x = 0.0;
    double max_b_mismatch = 0.0;
    double max_degree_residual = 0.0;
    std::vector<double> bucket_sup = std::vector<double>(trend_buckets, 0.0);
    std::vector<std::size_t> bucket_count = std::vector<std::size_t>(trend_buckets, 0);
  };
  const std::size_t n_blocks = (config.n_samples + kSampleBlock - 1) / kSampleBlock;
  std::vector<BlockStats> stats(n_blocks);
  const double margin_lo = 1.0 - config.stress_hi * config.stress_hi;
  const double margin_hi = 1.0 - config.stress_lo * config.stress_lo;

  run_blocks(n_blocks, config.shards, [&](std::size_t blk) {
    auto eng = block_engine(config.seed, /*stream=*/2, blk);
    AcceptanceCounter counter;
    BlockStats& s = stats[blk];
    const std::size_t end = std::min(config.n_samples, (blk + 1) * kSampleBlock);
    for (std::size_t i = blk * kSampleBlock; i < end; ++i) {
      bool sx = false, sy = false;
      const PointPair pair{sample_for_check(params, config, eng, counter, &sx),
                           sample_for_check(params, config, eng, counter, &sy)};
      const Complex x = x_value(params, pair);
      const double limite = std::abs(x);
      s.sup_x = std::max(s.sup_x, limite);
      const Complex b = coefficient_B(params, pair);
      s.sup_b = std::max(s.sup_b, std::abs(b));
      const auto poly = epsilon_alpha_polynomial(params, pair);
      s.max_b_mismatch = std::max(s.max_b_mismatch, std::abs(poly.b() - b) / std::max(1.0, std::abs(b)));

      // remainder R(alpha) = eps - alpha^{d+1} - B alpha^d must be the degree <= d-1
      // polynomial carried by coeffs[2..]; compare against the direct evaluation
      for (int a : alpha_set) {
        const Complex c = coefficient_C(params, a, pair);
        s.sup_c = std::max(s.sup_c, std::abs(c));
        Complex tail(0.0);
        for (int j = 2; j <= d + 1; ++j) tail = tail * static_cast<double>(a) + poly.coeffs[j];
        const double scale = std::pow(static_cast<double>(a), d + 1);
        const Complex direct = c * std::pow(static_cast<double>(a), d - 1);
        s.max_degree_residual = std::max(s.max_degree_residual, std::abs(direct - tail) / scale);
      }
      for (double a : real_alphas) s.sup_c_real = std::max(s.sup_c_real, std::abs(coefficient_C(params, a, pair)));

      if (sx && sy) {
        const double margin = std::min(1.0 - std::norm(pair.x.w) / std::exp(params.mu * log_generic_norm(params.base, pair.x.z, pair.x.z).real()),
                                       1.0 - std::norm(pair.y.w) / std::exp(params.mu * log_generic_norm(params.base, pair.y.z, pair.y.z).real()));
        int bucket = static_cast<int>((margin - margin_lo) / (margin_hi - margin_lo) * trend_buckets);
        bucket = std::clamp(bucket, 0, trend_buckets - 1);
        s.bucket_sup[bucket] = std::max(s.bucket_sup[bucket], limite);
        ++s.bucket_count[bucket];
      }
    }
  });

  BlockStats t;
  for (const auto& s : stats) {
    t.sup_b = std::max(t.sup_b, s.sup_b);
    t.sup_c = std::max(t.sup_c, s.sup_c);
    t.sup_c_real = std::max(t.sup_c_real, s.sup_c_real);
    t.sup_x = std::max(t.sup_x, s.sup_x);
    t.max_b_mismatch = std::max(t.max_b_mismatch, s.max_b_mismatch);
    t.max_degree_residual = std::max(t.max_degree_residual, s.max_degree_residual);
    for (int k = 0; k < trend_buckets; ++k) {
      t.bucket_sup[k] = std::max(t.bucket_sup[k], s.bucket_sup[k]);
      t.bucket_count[k] += s.bucket_count[k];
    }
  }

  std::vector<double> xs, ys;
  for (int k = 0; k < trend_buckets; ++k) {
    if (t.bucket_count[k] == 0) continue;
    xs.push_back(margin_lo + (k + 0.5) * (margin_hi - margin_lo) / trend_buckets);
    ys.push_back(t.bucket_sup[k]);
  }
  const double slope = detail::least_squares_slope(xs, ys);
  const bool trend_ok = std::abs(slope * (margin_hi - margin_lo)) < 0.5 * t.sup_x;

  constexpr double degree_tolerance = 1e-12;
  constexpr double b_match_tolerance = 1e-10;
  CheckReport r;
  r.suite = "condition_bprime";
  r.params = {{"domain", to_string(params.base.dtype)}, {"mu", params.mu}, {"alpha_set", alpha_set}};
  r.statistic = t.sup_x;
  r.bound = x_bound + 1e-9;
  r.n_samples = config.n_samples;
  r.seed = config.seed;
  r.details = {{"sup_abs_B", t.sup_b},
               {"B_bound", b_bound},
               {"sup_abs_C_integer_alpha", t.sup_c},
               {"sup_abs_C_real_alpha", t.sup_c_real},
               {"C_bound", c_bound},
               {"limite_statistic", t.sup_x},
               {"B_extraction_mismatch", t.max_b_mismatch},
               {"remainder_degree_residual", t.max_degree_residual},
               {"trend_slope", slope},
               {"trend_ok", trend_ok},
               {"stress_fraction", config.stress_fraction}};
  settle(r, {{"B_bounded", t.sup_b <= b_bound * (1.0 + 1e-9)},
             {"C_bounded", t.sup_c <= c_bound * (1.0 + 1e-9)},
             {"remainder_degree", t.max_degree_residual < degree_tolerance},
             {"B_matches_extraction", t.max_b_mismatch < b_match_tolerance},
             {"no_boundary_trend", trend_ok}});
  return r;
}

}  // namespace hartogs
