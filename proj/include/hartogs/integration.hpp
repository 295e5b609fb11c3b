#pragma once

// Weighted volume integral of the Hartogs domain,
//   I(alpha) = int_{M} (N^mu - |w|^2)^{alpha - (d+2)} dV   (Lebesgue measure on C^{d+1}),
// whose finiteness for alpha > d + 1 makes the weighted Bergman space nontrivial.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "hartogs/hartogs_domain.hpp"
#include "hartogs/parallel.hpp"
#include "hartogs/sampling.hpp"

namespace hartogs {

struct IntegralEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
};

namespace detail {

inline void require_convergent(const CartanHartogsParams& params, double alpha) {
  const int d = params.d();
  if (!(alpha > d + 1)) throw DivergenceError("integral diverges for alpha <= d + 1 = " + std::to_string(d + 1));
  if (!(params.mu * (alpha - d - 1) > -1.0)) throw DivergenceError("base integral diverges: mu (alpha - d - 1) <= -1");
}

inline double ball_volume(int complex_dim, double radius) {
  return std::exp(complex_dim * std::log(std::numbers::pi) + 2.0 * complex_dim * std::log(radius) -
                  std::lgamma(complex_dim + 1.0));
}

}  // namespace detail

/// Monte Carlo estimate: z uniform in the bounding ball of the base, w uniform in
/// the unit disk, rejection through hartogs_contains. Samples are drawn in fixed
/// blocks keyed by (seed, block), and block sums are merged in block order, so
/// the result is bit-identical for every shard count.
inline IntegralEstimate weighted_norm_integral_mc(const CartanHartogsParams& params, double alpha, std::uint64_t n_samples,
                                                  std::uint64_t seed, unsigned shards = 0) {
  detail::require_convergent(params, alpha);
  if (n_samples < 1000) throw ParameterError("Monte Carlo integration needs at least 1000 samples");
  const int d = params.d();
  const double exponent = alpha - (d + 2);
  const double radius = bounding_radius(params.base);
  const double box_volume = detail::ball_volume(d, radius) * std::numbers::pi;

  struct Partial {
    double sum = 0.0;
    double sum_sq = 0.0;
  };
  constexpr std::uint64_t block = 4096;
  const std::uint64_t n_blocks = (n_samples + block - 1) / block;
  std::vector<Partial> partial(n_blocks);
  run_blocks(n_blocks, shards, [&](std::size_t b) {
    auto eng = block_engine(seed, /*stream=*/3, b);
    const std::uint64_t end = std::min<std::uint64_t>(n_samples, (b + 1) * block);
    Partial acc;
    for (std::uint64_t i = b * block; i < end; ++i) {
      const HartogsPoint p{uniform_in_ball(eng, d, radius), uniform_in_disk(eng, 1.0)};
      if (!domain_contains(params.base, p.z)) continue;
      const double defect = boundary_defect(params, p);
      if (!(defect > 0.0)) continue;
      const double f = exponent == 0.0 ? 1.0 : std::pow(defect, exponent);
      acc.sum += f;
      acc.sum_sq += f * f;
    }
    partial[b] = acc;
  });

  double sum = 0.0, sum_sq = 0.0;
  for (const auto& p : partial) {
    sum += p.sum;
    sum_sq += p.sum_sq;
  }
  const double n = static_cast<double>(n_samples);
  const double mean = sum / n;
  const double var = std::max(0.0, sum_sq / n - mean * mean);
  return {box_volume * mean, box_volume * std::sqrt(var / (n - 1.0)), n_samples, seed};
}

/// Same integral after integrating out the fiber in polar coordinates:
///   pi / (alpha - d - 1) * int_Omega N(z, conj z)^{mu (alpha - d - 1)} dV(z),
/// estimated with z uniform in the bounding ball of the base (stream 6).
inline IntegralEstimate weighted_norm_integral_reduced_mc(const CartanHartogsParams& params, double alpha,
                                                          std::uint64_t n_samples, std::uint64_t seed,
                                                          unsigned shards = 0) {
  detail::require_convergent(params, alpha);
  if (n_samples < 1000) throw ParameterError("Monte Carlo integration needs at least 1000 samples");
  const int d = params.d();
  const double power = params.mu * (alpha - d - 1);
  const double prefactor = std::numbers::pi / (alpha - d - 1);
  const double radius = bounding_radius(params.base);
  const double box_volume = detail::ball_volume(d, radius);

  struct Partial {
    double sum = 0.0;
    double sum_sq = 0.0;
  };
  constexpr std::uint64_t block = 4096;
  const std::uint64_t n_blocks = (n_samples + block - 1) / block;
  std::vector<Partial> partial(n_blocks);
  run_blocks(n_blocks, shards, [&](std::size_t b) {
    auto eng = block_engine(seed, /*stream=*/6, b);
    const std::uint64_t end = std::min<std::uint64_t>(n_samples, (b + 1) * block);
    Partial acc;
    for (std::uint64_t i = b * block; i < end; ++i) {
      const BasePoint z = uniform_in_ball(eng, d, radius);
      if (!domain_contains(params.base, z)) continue;
      const double f = prefactor * std::exp(power * log_generic_norm(params.base, z, z).real());
      acc.sum += f;
      acc.sum_sq += f * f;
    }
    partial[b] = acc;
  });

  double sum = 0.0, sum_sq = 0.0;
  for (const auto& p : partial) {
    sum += p.sum;
    sum_sq += p.sum_sq;
  }
  const double n = static_cast<double>(n_samples);
  const double mean = sum / n;
  const double var = std::max(0.0, sum_sq / n - mean * mean);
  return {box_volume * mean, box_volume * std::sqrt(var / (n - 1.0)), n_samples, seed};
}

/// Closed form over the ball base CH^d:
///   pi / (alpha - d - 1) * pi^d Gamma(s + 1) / Gamma(s + d + 1),  s = mu (alpha - d - 1).
inline double weighted_norm_integral_closed(const CartanHartogsParams& params, double alpha) {
  if (!is_ball(params.base)) throw UnsupportedBaseError("closed-form weighted integral is implemented for ball bases I:1,d only");
  detail::require_convergent(params, alpha);
  const int d = params.d();
  const double s = params.mu * (alpha - d - 1);
  const double base = std::exp(d * std::log(std::numbers::pi) + std::lgamma(s + 1.0) - std::lgamma(s + d + 1.0));
  return std::numbers::pi / (alpha - d - 1) * base;
}

}  // namespace hartogs
