#pragma once

// Truncated projective embedding of Cartan-Hartogs domains over the ball CH^d.
//
// With N = 1 - |z|^2 the weight expands as
//   (N^mu - |w|^2)^{-alpha} = sum_m c_m |w|^{2m} N^{-s_m},  s_m = mu (alpha + m),
//   N^{-s} = sum_q Gamma(s + |q|) / (Gamma(s) q!) |z^q|^2,
// so the components sqrt(c_m) sqrt(Gamma(s_m + |q|) / (Gamma(s_m) q!)) w^m z^q
// have squared norm exp(alpha Phi).

#include <cmath>
#include <limits>
#include <vector>

#include "hartogs/hartogs_geometry.hpp"
#include "hartogs/special.hpp"

namespace hartogs {

struct EmbeddingIndex {
  unsigned m;              // w-degree
  std::vector<unsigned> q;  // z multi-index
};

struct EmbeddingVector {
  std::vector<Complex> components;  // components[0] = 1
  std::vector<EmbeddingIndex> indices;
  unsigned order = 0;  // maximal total degree m + |q|
  double tail_bound = 0.0;  // bound on the squared norm of the discarded components

  [[nodiscard]] double squared_norm() const {
    double s = 0.0;
    for (const auto& c : components) s += std::norm(c);
    return s;
  }
};

namespace detail {

/// Multi-indices of length dim and total degree k, lexicographically descending in the first entry.
inline void multi_indices(unsigned dim, unsigned k, std::vector<unsigned>& current, std::vector<std::vector<unsigned>>& out) {
  if (current.size() + 1 == dim) {
    current.push_back(k);
    out.push_back(current);
    current.pop_back();
    return;
  }
  for (unsigned first = k + 1; first-- > 0;) {
    current.push_back(first);
    multi_indices(dim, k - first, current, out);
    current.pop_back();
  }
}

/// sum_{k > cutoff} Gamma(s + k) / (Gamma(s) k!) t^k, bounded by a geometric series.
inline double negative_binomial_tail_bound(double s, double t, long cutoff) {
  if (t <= 0.0) return 0.0;
  const unsigned first = static_cast<unsigned>(cutoff + 1);
  const double first_term = std::exp(special::log_negative_binomial_coeff(s, first) + first * std::log(t));
  // ratio of consecutive terms t (s + k) / (k + 1) is monotone in k with limit t
  const double ratio = std::max(t, t * (s + first) / (first + 1.0));
  if (ratio >= 1.0) return std::numeric_limits<double>::infinity();
  return first_term / (1.0 - ratio);
}

inline void require_ball(const CartanHartogsParams& params) {
  if (!is_ball(params.base)) throw UnsupportedBaseError("projective embedding is implemented for ball bases I:1,d only");
}

}  // namespace detail

inline EmbeddingVector embed_truncated(const CartanHartogsParams& params, double alpha, const HartogsPoint& p,
                                       unsigned order) {
  detail::require_ball(params);
  detail::require_alpha(params, alpha);
  if (order < 1) throw ParameterError("truncation order must be positive");
  if (!hartogs_contains(params, p)) throw ParameterError("embedding requires an interior point");
  const unsigned d = static_cast<unsigned>(params.d());
  const double mu = params.mu;

  EmbeddingVector out;
  out.order = order;
  std::vector<std::vector<std::vector<unsigned>>> by_degree(order + 1);
  for (unsigned k = 0; k <= order; ++k) {
    std::vector<unsigned> current;
    detail::multi_indices(d, k, current, by_degree[k]);
  }
  for (unsigned total = 0; total <= order; ++total) {
    for (unsigned m = 0; m <= total; ++m) {
      const double s = mu * (alpha + m);
      const double log_cw = special::log_negative_binomial_coeff(alpha, m);
      for (const auto& q : by_degree[total - m]) {
        double log_cz = std::lgamma(s + (total - m)) - std::lgamma(s);
        Complex mono = std::pow(p.w, static_cast<int>(m));
        for (unsigned i = 0; i < d; ++i) {
          log_cz -= std::lgamma(q[i] + 1.0);
          if (q[i] > 0) mono *= std::pow(p.z(i), static_cast<int>(q[i]));
        }
        out.components.push_back(std::exp(0.5 * (log_cw + log_cz)) * mono);
        out.indices.push_back({m, q});
      }
    }
  }

  // discarded mass: for m <= order the z-series beyond degree order - m, plus all m > order
  const double x = p.z.squaredNorm();
  const double n = 1.0 - x;
  const double u = std::norm(p.w) / std::pow(n, mu);
  double tail = 0.0;
  for (unsigned m = 0; m <= order; ++m) {
    const double s = mu * (alpha + m);
    const double wm = std::exp(special::log_negative_binomial_coeff(alpha, m)) * std::pow(std::norm(p.w), m);
    tail += wm * detail::negative_binomial_tail_bound(s, x, static_cast<long>(order - m));
  }
  tail += std::pow(n, -mu * alpha) * detail::negative_binomial_tail_bound(alpha, u, order);
  out.tail_bound = tail;
  return out;
}

/// Fubini-Study diastasis log(|u|^2 |v|^2 / |<u, v>|^2) of two homogeneous representatives.
inline double fs_diastasis(const std::vector<Complex>& u, const std::vector<Complex>& v) {
  if (u.size() != v.size()) throw ParameterError("homogeneous coordinates must have equal length");
  double nu = 0.0, nv = 0.0;
  Complex inner(0.0);
  for (std::size_t j = 0; j < u.size(); ++j) {
    nu += std::norm(u[j]);
    nv += std::norm(v[j]);
    inner += u[j] * std::conj(v[j]);
  }
  if (std::norm(inner) <= 1e-300 * nu * nv) throw HyperplaneAtInfinityError("representatives are orthogonal");
  return std::log(nu * nv / std::norm(inner));
}

inline double fs_diastasis(const EmbeddingVector& u, const EmbeddingVector& v) {
  return fs_diastasis(u.components, v.components);
}

/// |D_FS(f(x), f(y)) - alpha D(x, y)| for the order-T embedding.
inline double pullback_residual(const CartanHartogsParams& params, double alpha, const PointPair& pair, unsigned order) {
  detail::require_ball(params);
  for (const auto* p : {&pair.x, &pair.y}) {
    if (p->z.norm() > 0.6 || std::abs(p->w) > 0.6)
      throw ParameterError("pullback residual needs |z|, |w| <= 0.6 for truncation control");
  }
  const double fs = fs_diastasis(embed_truncated(params, alpha, pair.x, order), embed_truncated(params, alpha, pair.y, order));
  return std::abs(fs - alpha * diastasis(params, pair));
}

}  // namespace hartogs
