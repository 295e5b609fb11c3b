#pragma once

#include <cmath>
#include <complex>

#include "hartogs/domain_catalog.hpp"

namespace hartogs {

/// Cartan-Hartogs domain {(z, w) : |w|^2 < N(z, conj z)^mu} over a Cartan base.
struct CartanHartogsParams {
  CartanDomainSpec base;
  double mu = 1.0;
  double mu0 = 1.0;  // genus / (d + 1), the Kahler-Einstein exponent

  [[nodiscard]] int d() const { return base.d; }
  /// mu (d+1) - genus; vanishes exactly at the Kahler-Einstein exponent.
  [[nodiscard]] double einstein_defect() const { return mu * (base.d + 1) - base.genus; }
};

inline CartanHartogsParams make_hartogs_params(const CartanDomainSpec& base, double mu) {
  if (!(mu > 0.0)) throw ParameterError("mu must be positive");
  if (!wallach_contains(base, mu))
    throw ParameterError("mu = " + std::to_string(mu) + " is not in the Wallach set of " + to_string(base.dtype));
  return {base, mu, base.genus / (base.d + 1)};
}

inline CartanHartogsParams make_hartogs_params(const CartanDomainSpec& base, const Rational& mu) {
  if (mu.num <= 0) throw ParameterError("mu must be positive");
  if (!wallach_contains(base, mu))
    throw ParameterError("mu = " + mu.str() +
                         " is not in the Wallach set of " + to_string(base.dtype));
  return {base, mu.to_double(), base.genus / (base.d + 1)};
}

struct HartogsPoint {
  BasePoint z;
  Complex w{0.0, 0.0};

  static HartogsPoint origin(int d) { return {BasePoint::Zero(d), Complex(0.0)}; }
};

struct PointPair {
  HartogsPoint x;
  HartogsPoint y;
};

/// (z_1, ..., z_d, w) as one vector of d+1 complex coordinates.
inline Eigen::VectorXcd to_flat(const HartogsPoint& p) {
  Eigen::VectorXcd v(p.z.size() + 1);
  v.head(p.z.size()) = p.z;
  v(p.z.size()) = p.w;
  return v;
}

inline HartogsPoint from_flat(const Eigen::VectorXcd& v) {
  return {v.head(v.size() - 1), v(v.size() - 1)};
}

/// N(z, conj z)^mu - |w|^2, the defect that defines the boundary.
inline double boundary_defect(const CartanHartogsParams& params, const HartogsPoint& p) {
  const double log_n = log_generic_norm(params.base, p.z, p.z).real();
  return std::exp(params.mu * log_n) - std::norm(p.w);
}

inline bool hartogs_contains(const CartanHartogsParams& params, const HartogsPoint& p) {
  if (!domain_contains(params.base, p.z)) return false;
  const Complex n = generic_norm(params.base, p.z, p.z);
  if (!(n.real() > 0.0)) return false;
  return std::norm(p.w) < std::pow(n.real(), params.mu);
}

namespace detail {

inline void require_alpha(const CartanHartogsParams& params, double alpha) {
  if (!(alpha > params.d() + 1)) throw DomainError("alpha must exceed d + 1 = " + std::to_string(params.d() + 1));
}

}  // namespace detail

}  // namespace hartogs
