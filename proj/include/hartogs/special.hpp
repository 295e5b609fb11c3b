#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace hartogs::special {

/// Pochhammer symbol (x)_n = x (x+1) ... (x+n-1); (x)_0 = 1.
template <class T>
T rising_factorial(T x, unsigned n) {
  T prod{1};
  for (unsigned l = 0; l < n; ++l) prod *= x + static_cast<T>(l);
  return prod;
}

inline long double binomial(unsigned n, unsigned k) {
  if (k > n) return 0.0L;
  long double c = 1.0L;
  for (unsigned i = 1; i <= k; ++i) c = c * static_cast<long double>(n - k + i) / i;
  return c;
}

inline long double factorial(unsigned n) {
  long double f = 1.0L;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

/// Coefficients of (x + shift)_n as a polynomial in x, lowest degree first.
///
/// With integral shift the coefficients are integers; they are accumulated in
/// int64 and exact for the degrees this library uses (n <= 20).
inline std::vector<std::int64_t> rising_factorial_poly(std::int64_t shift, unsigned n) {
  std::vector<std::int64_t> c{1};
  for (unsigned l = 0; l < n; ++l) {
    const std::int64_t root = shift + static_cast<std::int64_t>(l);
    std::vector<std::int64_t> next(c.size() + 1, 0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] += root * c[i];
    }
    c = std::move(next);
  }
  return c;
}

/// log(Gamma(a + n) / (Gamma(a) n!)), the log of the coefficient of t^n in (1-t)^{-a}.
inline double log_negative_binomial_coeff(double a, unsigned n) {
  return std::lgamma(a + n) - std::lgamma(a) - std::lgamma(n + 1.0);
}

}  // namespace hartogs::special
