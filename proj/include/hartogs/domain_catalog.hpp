#pragma once

// Classical Cartan domains (types I-IV): invariants, membership, generic norms
// and Bergman kernels.
//
// Points are stored in packed coordinates:
//   Type I(m,n)  - row-major m x n matrix, d = m n entries
//   Type II(n)   - upper triangle (with diagonal) of a symmetric n x n matrix
//   Type III(n)  - strict upper triangle of a skew-symmetric n x n matrix
//   Type IV(n)   - the vector itself
// Euclidean volumes and all integrals refer to Lebesgue measure in these
// packed coordinates.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>
#include <string_view>
#include <variant>

#include "hartogs/errors.hpp"

namespace hartogs {

using Complex = std::complex<double>;
using BasePoint = Eigen::VectorXcd;

struct TypeI {
  int m;
  int n;
};
struct TypeII {
  int n;
};
struct TypeIII {
  int n;
};
struct TypeIV {
  int n;
};

using DomainType = std::variant<TypeI, TypeII, TypeIII, TypeIV>;

struct CartanDomainSpec {
  DomainType dtype;
  int d;          // complex dimension
  int r;          // rank
  double a;       // root multiplicity invariant
  int b;          // boundary invariant
  double genus;   // gamma
  double volume;  // Euclidean volume in packed coordinates
};

/// Exact rational number, used for Wallach-set membership at the discrete points.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  [[nodiscard]] double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  [[nodiscard]] std::string str() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
  }

  /// Parses "p/q", an integer, or a plain decimal such as "1.7" (read exactly as 17/10).
  static Rational parse(std::string_view text);
};

namespace detail {

inline double log_superfactorial_range(int lo, int hi) {
  // sum_{k=lo}^{hi} log k!
  double s = 0.0;
  for (int k = lo; k <= hi; ++k) s += std::lgamma(k + 1.0);
  return s;
}

inline double hua_volume(const DomainType& t) {
  constexpr double pi = std::numbers::pi;
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, TypeI>) {
          const double logv = v.m * v.n * std::log(pi) + log_superfactorial_range(1, v.m - 1) +
                              log_superfactorial_range(1, v.n - 1) - log_superfactorial_range(1, v.m + v.n - 1);
          return std::exp(logv);
        } else if constexpr (std::is_same_v<T, TypeII>) {
          double logv = v.n * (v.n + 1) / 2 * std::log(pi) - log_superfactorial_range(v.n, 2 * v.n - 1);
          for (int k = 1; k <= v.n - 1; ++k) logv += std::lgamma(2.0 * k + 1.0);
          return std::exp(logv);
        } else if constexpr (std::is_same_v<T, TypeIII>) {
          double logv = v.n * (v.n - 1) / 2 * std::log(pi) - log_superfactorial_range(v.n - 1, 2 * v.n - 3);
          for (int k = 1; k <= v.n - 2; ++k) logv += std::lgamma(2.0 * k + 1.0);
          return std::exp(logv);
        } else {
          return std::exp(v.n * std::log(pi) - (v.n - 1) * std::log(2.0) - std::lgamma(v.n + 1.0));
        }
      },
      t);
}

inline void require_shape(const CartanDomainSpec& spec, const BasePoint& z) {
  if (z.size() != spec.d) {
    throw ParameterError("base point has " + std::to_string(z.size()) + " coordinates, domain dimension is " +
                         std::to_string(spec.d));
  }
}

}  // namespace detail

inline std::string to_string(const DomainType& t) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, TypeI>) {
          return "I:" + std::to_string(v.m) + "," + std::to_string(v.n);
        } else if constexpr (std::is_same_v<T, TypeII>) {
          return "II:" + std::to_string(v.n);
        } else if constexpr (std::is_same_v<T, TypeIII>) {
          return "III:" + std::to_string(v.n);
        } else {
          return "IV:" + std::to_string(v.n);
        }
      },
      t);
}

inline CartanDomainSpec make_domain_spec(const DomainType& dtype) {
  CartanDomainSpec s{dtype, 0, 0, 0.0, 0, 0.0, 0.0};
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, TypeI>) {
          if (v.m < 1 || v.n < 1 || v.m > v.n) throw ParameterError("type I requires 1 <= m <= n");
          s.r = v.m;
          s.a = 2.0;
          s.b = v.n - v.m;
        } else if constexpr (std::is_same_v<T, TypeII>) {
          if (v.n < 2) throw ParameterError("type II requires n >= 2");
          s.r = v.n;
          s.a = 1.0;
          s.b = 0;
        } else if constexpr (std::is_same_v<T, TypeIII>) {
          if (v.n < 5) throw ParameterError("type III requires n >= 5");
          s.r = v.n / 2;
          s.a = 4.0;
          s.b = (v.n % 2 == 0) ? 0 : 2;
        } else {
          if (v.n < 3) throw ParameterError("type IV requires n >= 3");
          s.r = 2;
          s.a = v.n - 2.0;
          s.b = 0;
        }
      },
      dtype);
  s.d = static_cast<int>(std::lround(s.r * (s.r - 1) * s.a / 2.0)) + s.r * s.b + s.r;
  s.genus = (s.r - 1) * s.a + s.b + 2;
  s.volume = detail::hua_volume(dtype);
  return s;
}

/// Parses "I:m,n" | "II:n" | "III:n" | "IV:n".
inline DomainType parse_domain(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw ParameterError("domain specifier must look like I:m,n, II:n, III:n or IV:n");
  const std::string tag(text.substr(0, colon));
  const std::string args(text.substr(colon + 1));
  auto to_int = [&](const std::string& s) {
    std::size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(s, &pos);
    } catch (const std::exception&) {
      throw ParameterError("bad integer '" + s + "' in domain specifier");
    }
    if (pos != s.size()) throw ParameterError("bad integer '" + s + "' in domain specifier");
    return v;
  };
  if (tag == "I") {
    const auto comma = args.find(',');
    if (comma == std::string::npos) throw ParameterError("type I needs two parameters, e.g. I:2,3");
    return TypeI{to_int(args.substr(0, comma)), to_int(args.substr(comma + 1))};
  }
  if (tag == "II") return TypeII{to_int(args)};
  if (tag == "III") return TypeIII{to_int(args)};
  if (tag == "IV") return TypeIV{to_int(args)};
  throw ParameterError("unknown domain type '" + tag + "'");
}

/// The complex hyperbolic ball CH^d, i.e. type I(1, d).
inline bool is_ball(const CartanDomainSpec& spec) {
  const auto* t = std::get_if<TypeI>(&spec.dtype);
  return t != nullptr && t->m == 1;
}

/// Matrix realization of a packed point (types I-III).
inline Eigen::MatrixXcd unpack_matrix(const CartanDomainSpec& spec, const BasePoint& z) {
  detail::require_shape(spec, z);
  return std::visit(
      [&](const auto& v) -> Eigen::MatrixXcd {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, TypeI>) {
          Eigen::MatrixXcd m(v.m, v.n);
          for (int i = 0; i < v.m; ++i)
            for (int j = 0; j < v.n; ++j) m(i, j) = z(i * v.n + j);
          return m;
        } else if constexpr (std::is_same_v<T, TypeII>) {
          Eigen::MatrixXcd m(v.n, v.n);
          int k = 0;
          for (int i = 0; i < v.n; ++i)
            for (int j = i; j < v.n; ++j) {
              m(i, j) = z(k);
              m(j, i) = z(k);
              ++k;
            }
          return m;
        } else if constexpr (std::is_same_v<T, TypeIII>) {
          Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(v.n, v.n);
          int k = 0;
          for (int i = 0; i < v.n; ++i)
            for (int j = i + 1; j < v.n; ++j) {
              m(i, j) = z(k);
              m(j, i) = -z(k);
              ++k;
            }
          return m;
        } else {
          throw ParameterError("type IV points have no matrix realization");
        }
      },
      spec.dtype);
}

/// Norm whose open unit ball is the domain: spectral norm for I-III, Lie norm for IV.
inline double domain_norm(const CartanDomainSpec& spec, const BasePoint& z) {
  detail::require_shape(spec, z);
  if (std::holds_alternative<TypeIV>(spec.dtype)) {
    const double s = z.squaredNorm();
    const double q = std::abs(z.cwiseProduct(z).sum());
    return std::sqrt(s + std::sqrt(std::max(0.0, s * s - q * q)));
  }
  const Eigen::MatrixXcd m = unpack_matrix(spec, z);
  if (m.cols() == 1 || m.rows() == 1) return m.norm();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

/// Radius of a Euclidean ball in packed coordinates that contains the domain.
inline double bounding_radius(const CartanDomainSpec& spec) {
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, TypeIV>) {
          return 1.0;
        } else {
          // sum of squared packed entries <= rank for I, II, III
          return std::sqrt(static_cast<double>(spec.r));
        }
      },
      spec.dtype);
}

inline bool domain_contains(const CartanDomainSpec& spec, const BasePoint& z) {
  detail::require_shape(spec, z);
  if (std::holds_alternative<TypeIV>(spec.dtype)) {
    const double s = z.squaredNorm();
    const double q = std::abs(z.cwiseProduct(z).sum());
    return q < 1.0 && 1.0 - 2.0 * s + q * q > 0.0;
  }
  const Eigen::MatrixXcd m = unpack_matrix(spec, z);
  if (m.cols() == 1 || m.rows() == 1) return m.squaredNorm() < 1.0;
  // I - Z Z* positive definite, via Cholesky
  const Eigen::MatrixXcd gram = Eigen::MatrixXcd::Identity(m.rows(), m.rows()) - m * m.adjoint();
  Eigen::LLT<Eigen::MatrixXcd> llt(gram);
  return llt.info() == Eigen::Success;
}

namespace detail {

inline double arg_sum_of_factors(const Eigen::VectorXcd& eigenvalues) {
  double s = 0.0;
  for (const auto& lambda : eigenvalues) s += std::arg(Complex(1.0) - lambda);
  return s;
}

/// Principal log shifted by 2 pi k so that its imaginary part is nearest to target_arg.
inline Complex log_with_branch(Complex value, double target_arg) {
  Complex l = std::log(value);
  const double two_pi = 2.0 * std::numbers::pi;
  const double k = std::round((target_arg - l.imag()) / two_pi);
  return {l.real(), l.imag() + k * two_pi};
}

}  // namespace detail

/// Sesquianalytic generic norm N(z, conj(zeta)), with N(0,0) = 1.
inline Complex generic_norm(const CartanDomainSpec& spec, const BasePoint& z, const BasePoint& zeta);

/// log N(z, conj(zeta)) on the branch continuous from N(0,0) = 1.
///
/// For interior pairs N factors as prod (1 - lambda_i) with |lambda_i| < 1, so
/// the branch is sum_i Log(1 - lambda_i). The value is the principal log of N
/// whenever Re N > 0, and stays analytic on all of Omega x Omega otherwise.
inline Complex log_generic_norm(const CartanDomainSpec& spec, const BasePoint& z, const BasePoint& zeta) {
  detail::require_shape(spec, z);
  detail::require_shape(spec, zeta);
  const bool diagonal = (z == zeta);
  if (const auto* iv = std::get_if<TypeIV>(&spec.dtype)) {
    (void)iv;
    const Complex inner = zeta.dot(z);  // sum z_i conj(zeta_i)
    const Complex zz = z.cwiseProduct(z).sum();
    const Complex ww = zeta.cwiseProduct(zeta).sum();
    const Complex n = 1.0 - 2.0 * inner + zz * std::conj(ww);
    if (std::abs(n) < 1e-300) throw SingularityError("generic norm vanishes");
    if (diagonal) return {std::log(n.real()), 0.0};
    // N = (1 - l1)(1 - l2) with l1 + l2 = 2 inner, l1 l2 = zz conj(ww)
    const Complex disc = std::sqrt(inner * inner - zz * std::conj(ww));
    Eigen::VectorXcd roots(2);
    roots << inner + disc, inner - disc;
    return detail::log_with_branch(n, detail::arg_sum_of_factors(roots));
  }
  const Eigen::MatrixXcd zm = unpack_matrix(spec, z);
  const Eigen::MatrixXcd wm = unpack_matrix(spec, zeta);
  const Eigen::MatrixXcd prod = zm * wm.adjoint();
  const Eigen::MatrixXcd shifted = Eigen::MatrixXcd::Identity(prod.rows(), prod.cols()) - prod;
  const Complex det = shifted.determinant();
  if (std::abs(det) < 1e-300) throw SingularityError("generic norm vanishes");
  const double power = std::holds_alternative<TypeIII>(spec.dtype) ? 0.5 : 1.0;
  if (diagonal) return {power * std::log(std::abs(det)), 0.0};
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(prod, /*computeEigenvectors=*/false);
  const Complex log_det = detail::log_with_branch(det, detail::arg_sum_of_factors(es.eigenvalues()));
  return power * log_det;
}

inline Complex generic_norm(const CartanDomainSpec& spec, const BasePoint& z, const BasePoint& zeta) {
  detail::require_shape(spec, z);
  detail::require_shape(spec, zeta);
  if (std::holds_alternative<TypeIV>(spec.dtype)) {
    const Complex inner = zeta.dot(z);
    const Complex zz = z.cwiseProduct(z).sum();
    const Complex ww = zeta.cwiseProduct(zeta).sum();
    return 1.0 - 2.0 * inner + zz * std::conj(ww);
  }
  if (std::holds_alternative<TypeIII>(spec.dtype)) {
    // det(I - z zeta*) is a perfect square; take the root on the continuous branch.
    const Eigen::MatrixXcd zm = unpack_matrix(spec, z);
    const Eigen::MatrixXcd wm = unpack_matrix(spec, zeta);
    const Eigen::MatrixXcd shifted = Eigen::MatrixXcd::Identity(zm.rows(), zm.rows()) - zm * wm.adjoint();
    if (std::abs(shifted.determinant()) < 1e-300) return Complex(0.0);
    return std::exp(log_generic_norm(spec, z, zeta));
  }
  const Eigen::MatrixXcd zm = unpack_matrix(spec, z);
  const Eigen::MatrixXcd wm = unpack_matrix(spec, zeta);
  return (Eigen::MatrixXcd::Identity(zm.rows(), zm.rows()) - zm * wm.adjoint()).determinant();
}

/// K(z, conj(zeta)) = N(z, conj(zeta))^{-genus} / V.
inline Complex bergman_kernel(const CartanDomainSpec& spec, const BasePoint& z, const BasePoint& zeta) {
  const Complex n = generic_norm(spec, z, zeta);
  if (std::abs(n) < 1e-300) throw SingularityError("Bergman kernel is singular at a boundary pair");
  if (!domain_contains(spec, z) || !domain_contains(spec, zeta))
    throw ParameterError("Bergman kernel requires interior points");
  return std::exp(-spec.genus * log_generic_norm(spec, z, zeta)) / spec.volume;
}

inline bool wallach_contains(const CartanDomainSpec& spec, double mu) {
  constexpr double tol = 1e-12;
  const double edge = (spec.r - 1) * spec.a / 2.0;
  if (mu > edge) return true;
  for (int k = 0; k < spec.r; ++k)
    if (std::abs(mu - k * spec.a / 2.0) <= tol) return true;
  return false;
}

/// Exact variant for rational mu (a is integral for every classical type).
inline bool wallach_contains(const CartanDomainSpec& spec, const Rational& mu) {
  const auto a = static_cast<std::int64_t>(std::lround(spec.a));
  // compare 2 mu against k a, i.e. 2 num against k a den
  const std::int64_t lhs = 2 * mu.num;
  const std::int64_t edge = static_cast<std::int64_t>(spec.r - 1) * a * mu.den;
  if (lhs > edge) return true;
  for (int k = 0; k < spec.r; ++k)
    if (lhs == static_cast<std::int64_t>(k) * a * mu.den) return true;
  return false;
}

inline Rational Rational::parse(std::string_view text) {
  const std::string s(text);
  auto fail = [&]() -> Rational { throw ParameterError("cannot read '" + s + "' as a number"); };
  if (s.empty()) return fail();
  Rational q;
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    try {
      std::size_t p1 = 0, p2 = 0;
      q.num = std::stoll(s.substr(0, slash), &p1);
      q.den = std::stoll(s.substr(slash + 1), &p2);
      if (p1 != slash || p2 != s.size() - slash - 1 || q.den == 0) return fail();
    } catch (const std::exception&) {
      return fail();
    }
  } else {
    std::size_t i = 0;
    bool negative = false;
    if (s[i] == '+' || s[i] == '-') negative = (s[i++] == '-');
    bool seen_digit = false, seen_point = false;
    for (; i < s.size(); ++i) {
      const char c = s[i];
      if (c >= '0' && c <= '9') {
        if (q.num > (INT64_MAX - 9) / 10 || q.den > INT64_MAX / 10) return fail();
        q.num = q.num * 10 + (c - '0');
        if (seen_point) q.den *= 10;
        seen_digit = true;
      } else if (c == '.' && !seen_point) {
        seen_point = true;
      } else {
        return fail();
      }
    }
    if (!seen_digit) return fail();
    if (negative) q.num = -q.num;
  }
  if (q.den < 0) {
    q.num = -q.num;
    q.den = -q.den;
  }
  const std::int64_t g = std::gcd(q.num, q.den);
  if (g > 1) {
    q.num /= g;
    q.den /= g;
  }
  return q;
}

}  // namespace hartogs
