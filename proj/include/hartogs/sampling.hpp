#pragma once

// Seeded interior sampling of Cartan-Hartogs domains.
//
// Base points come from rejection: z uniform in the bounding Euclidean ball of
// the base (packed coordinates), accepted through domain_contains; w is then
// uniform in the fiber disk. Stress samples push the point toward the boundary
// along the ray of z and the circle of w.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>

#include "hartogs/hartogs_domain.hpp"

namespace hartogs {

struct SamplerConfig {
  std::size_t n_samples = 10000;
  std::uint64_t seed = 42;
  double stress_fraction = 0.0;  // share of samples pushed toward the boundary
  double stress_lo = 0.9;        // stressed radii fractions drawn from [stress_lo, stress_hi]
  double stress_hi = 0.999;
  unsigned shards = 0;  // 0 = worker_count()
};

inline constexpr std::size_t kSampleBlock = 1024;

inline double uniform01(std::mt19937_64& eng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(eng);
}

/// Uniform point of the Euclidean ball of the given radius in C^dim.
inline Eigen::VectorXcd uniform_in_ball(std::mt19937_64& eng, int dim, double radius) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = Complex(normal(eng), normal(eng));
  const double norm = v.norm();
  const double r = radius * std::pow(uniform01(eng), 1.0 / (2.0 * dim));
  return norm > 0.0 ? Eigen::VectorXcd(v * (r / norm)) : Eigen::VectorXcd(v);
}

inline Complex uniform_in_disk(std::mt19937_64& eng, double radius) {
  const double r = radius * std::sqrt(uniform01(eng));
  const double t = 2.0 * std::numbers::pi * uniform01(eng);
  return std::polar(r, t);
}

/// Rejection-sampling bookkeeping; throws once the acceptance rate is hopeless.
struct AcceptanceCounter {
  std::size_t attempts = 0;
  std::size_t accepted = 0;

  void record(bool ok) {
    ++attempts;
    if (ok) ++accepted;
    if (attempts >= 10000 && static_cast<double>(accepted) < 1e-3 * static_cast<double>(attempts))
      throw SamplingError("rejection rate above 0.999 (" + std::to_string(accepted) + " of " +
                          std::to_string(attempts) + " accepted)");
  }
};

inline BasePoint sample_base_uniform(const CartanDomainSpec& spec, std::mt19937_64& eng, AcceptanceCounter& counter) {
  const double radius = bounding_radius(spec);
  for (;;) {
    BasePoint z = uniform_in_ball(eng, spec.d, radius);
    const bool ok = domain_contains(spec, z);
    counter.record(ok);
    if (ok) return z;
  }
}

/// z uniform in the base, then w uniform in the fiber disk |w| < N(z, conj z)^{mu/2}.
inline HartogsPoint sample_hartogs_fiberwise(const CartanHartogsParams& params, std::mt19937_64& eng,
                                             AcceptanceCounter& counter) {
  HartogsPoint p{sample_base_uniform(params.base, eng, counter), Complex(0.0)};
  const double n = log_generic_norm(params.base, p.z, p.z).real();
  p.w = uniform_in_disk(eng, std::exp(0.5 * params.mu * n));
  return p;
}

/// Rescales z to the fraction t_z of its ray to the base boundary (t_z <= 0 keeps z)
/// and |w| to the fraction t_w of N(z, conj z)^{mu/2}.
inline HartogsPoint push_toward_boundary(const CartanHartogsParams& params, HartogsPoint p, double t_z, double t_w) {
  if (t_z > 0.0) {
    const double norm = domain_norm(params.base, p.z);
    if (norm > 0.0) p.z *= t_z / norm;
  }
  const double radius = std::exp(0.5 * params.mu * log_generic_norm(params.base, p.z, p.z).real());
  const double phase = std::abs(p.w) > 0.0 ? std::arg(p.w) : 0.0;
  p.w = std::polar(t_w * radius, phase);
  return p;
}

/// One sample of a verification run: uniform, or stressed with probability stress_fraction.
inline HartogsPoint sample_for_check(const CartanHartogsParams& params, const SamplerConfig& config,
                                     std::mt19937_64& eng, AcceptanceCounter& counter, bool* stressed = nullptr) {
  HartogsPoint p = sample_hartogs_fiberwise(params, eng, counter);
  const bool stress = config.stress_fraction > 0.0 && uniform01(eng) < config.stress_fraction;
  if (stressed != nullptr) *stressed = stress;
  if (!stress) return p;
  std::uniform_real_distribution<double> frac(config.stress_lo, config.stress_hi);
  const double t_z = frac(eng);
  const double t_w = frac(eng);
  return push_toward_boundary(params, std::move(p), t_z, t_w);
}

}  // namespace hartogs
