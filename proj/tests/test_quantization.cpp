#include <gtest/gtest.h>

#include <cmath>

#include "hartogs/quantization.hpp"
#include "test_support.hpp"

using namespace hartogs;

namespace {

CartanHartogsParams params(const char* base, double mu) {
  return make_hartogs_params(make_domain_spec(parse_domain(base)), mu);
}

HartogsPoint disk_point(Complex z, Complex w) { return {BasePoint::Constant(1, z), w}; }

PointPair origin_pair(int d) {
  const auto o = HartogsPoint::origin(d);
  return {o, o};
}

// chi(x) as the literal product of Gamma ratios, for arguments away from the poles.
double chi_from_gamma(const CartanHartogsParams& p, double x) {
  const auto& b = p.base;
  double log_abs = 0.0;
  for (int i = 1; i <= b.r; ++i) {
    const double lo = p.mu * x - b.genus + 1.0 + (i - 1) * b.a / 2.0;
    const double hi = lo + 1.0 + b.b + (b.r - i) * b.a;
    log_abs += std::lgamma(hi) - std::lgamma(lo);
  }
  return std::exp(log_abs);
}

}  // namespace

TEST(Chi, DiskExamples) {
  const auto p1 = params("I:1,1", 1);
  EXPECT_EQ(chi_tilde(p1, 1), 0.0L);
  EXPECT_EQ(chi_tilde(p1, 0), -1.0L);
  EXPECT_EQ(chi_tilde(p1, 5), 4.0L);
  const auto p2 = params("I:1,1", 2);
  EXPECT_EQ(chi_tilde(p2, 1), 1.0L);
  EXPECT_EQ(chi_tilde(p2, 3), 5.0L);
  EXPECT_EQ(chi_tilde(params("I:2,2", 1), 4), 12.0L);
}

TEST(Chi, MatchesGammaRatiosAwayFromPoles) {
  for (const auto& name : fixtures::grid_bases()) {
    const auto base = make_domain_spec(parse_domain(name));
    for (double mu : fixtures::grid_mus(base)) {
      const auto p = make_hartogs_params(base, mu);
      for (double x : {p.d() + 3.0, p.d() + 7.5, 2.0 * p.d() + 11.0}) {
        if (p.mu * x - base.genus + 1.0 <= 0.0) continue;
        const double expected = chi_from_gamma(p, x);
        EXPECT_NEAR(static_cast<double>(chi_tilde(p, x)) / expected, 1.0, 1e-11) << name << " mu=" << mu << " x=" << x;
      }
    }
  }
}

TEST(Chi, DifferenceExamples) {
  EXPECT_EQ(dk_chi(params("I:1,1", 1), 1), 1.0L);
  EXPECT_EQ(dk_chi(params("I:1,1", 2), 1), 2.0L);
  EXPECT_EQ(dk_chi(params("I:1,1", 2), 0), 1.0L);
  const auto p = params("I:2,2", 1);
  EXPECT_EQ(dk_chi(p, 0), chi_tilde(p, 4));
  EXPECT_NEAR(static_cast<double>(dk_chi(p, 4)) / 24.0, 1.0, 1e-15);
  EXPECT_THROW(dk_chi(p, 5), ParameterError);
  EXPECT_THROW(dk_chi(p, -1), ParameterError);
}

TEST(Chi, LeadingIdentitiesOverGrid) {
  int cells = 0;
  for (const auto& name : fixtures::grid_bases()) {
    const auto base = make_domain_spec(parse_domain(name));
    for (double mu : fixtures::grid_mus(base)) {
      const auto r = leading_identities(make_hartogs_params(base, mu));
      EXPECT_TRUE(r.pass) << name << " mu=" << mu << " err=" << r.statistic;
      ++cells;
    }
  }
  EXPECT_GE(cells, 17);
}

TEST(Chi, LeadingIdentityDiskValues) {
  auto r = leading_identities(params("I:1,1", 2));
  EXPECT_EQ(r.details["next"].get<double>(), 1.0);
  r = leading_identities(params("I:1,1", 1));
  EXPECT_EQ(r.details["top"].get<double>(), 1.0);
}

TEST(Epsilon, WorkedValueAtOrigin) {
  const auto p = params("I:1,1", 2);
  const Complex e = epsilon_eval(p, 4.0, origin_pair(1));
  EXPECT_NEAR(e.real(), 7.0, 7e-12);
  EXPECT_EQ(e.imag(), 0.0);
  const auto poly = epsilon_alpha_polynomial(p, origin_pair(1));
  ASSERT_EQ(poly.coeffs.size(), 3u);
  EXPECT_EQ(poly.coeffs[0], Complex(1.0));
  EXPECT_EQ(poly.coeffs[1], Complex(-2.5));
  EXPECT_EQ(poly.coeffs[2], Complex(1.0));
  EXPECT_EQ(poly(4.0), Complex(7.0));
}

// Hand expansion for the disk with mu = 2: eps = (alpha-1)(alpha-2) + X (alpha-2)/2.
TEST(Epsilon, DiskMuTwoHandFormula) {
  const auto p = params("I:1,1", 2);
  for (const auto& pair : fixtures::random_pairs(p, 200, 43, 0.3)) {
    const Complex x = x_value(p, pair);
    for (double alpha : {2.5, 3.0, 4.0, 7.25}) {
      const Complex expected = (alpha - 1) * (alpha - 2) + x * (alpha - 2) / 2.0;
      EXPECT_LT(std::abs(epsilon_eval(p, alpha, pair) - expected), 1e-12 * std::abs(expected) + 1e-13);
    }
  }
}

TEST(Epsilon, BallIsConstant) {
  for (int d : {1, 2, 3}) {
    const std::string name = "I:1," + std::to_string(d);
    const auto p = params(name.c_str(), 1.0);  // mu0 = (d+1)/(d+1)
    for (double alpha : {d + 2.0, d + 3.0, d + 4.5}) {
      double expected = 1.0;
      for (int k = 1; k <= d + 1; ++k) expected *= alpha - k;
      for (const auto& pair : fixtures::random_pairs(p, 100, 47, 0.3)) {
        EXPECT_LT(std::abs(epsilon_eval(p, alpha, pair) - expected), 1e-10 * expected);
      }
    }
  }
}

TEST(Epsilon, DiagonalRealAndPositive) {
  for (const auto& name : fixtures::grid_bases()) {
    const auto base = make_domain_spec(parse_domain(name));
    for (double mu : fixtures::grid_mus(base)) {
      const auto p = make_hartogs_params(base, mu);
      for (const auto& pt : fixtures::random_points(p, 50, 53)) {
        const auto poly = epsilon_alpha_polynomial(p, {pt, pt});
        for (const auto& c : poly.coeffs) EXPECT_LT(std::abs(c.imag()), 1e-12 * std::max(1.0, std::abs(c)));
        for (int alpha = p.d() + 2; alpha <= p.d() + 6; ++alpha) {
          const Complex e = epsilon_eval(p, alpha, {pt, pt});
          EXPECT_GT(e.real(), 0.0) << name;
          EXPECT_LT(std::abs(e.imag()), 1e-12 * std::abs(e));
        }
        const Complex x = x_value(p, {pt, pt});
        EXPECT_GT(x.real(), 0.0);
        EXPECT_LE(x.real(), 1.0);
      }
    }
  }
}

TEST(Epsilon, PolynomialAgreesWithDirectEvaluation) {
  for (const auto& name : fixtures::grid_bases()) {
    const auto base = make_domain_spec(parse_domain(name));
    const double mu = fixtures::grid_mus(base).front();
    const auto p = make_hartogs_params(base, mu);
    for (const auto& pair : fixtures::random_pairs(p, 30, 59, 0.2)) {
      const auto poly = epsilon_alpha_polynomial(p, pair);
      EXPECT_EQ(poly.coeffs.size(), static_cast<std::size_t>(p.d() + 2));
      EXPECT_LT(std::abs(poly.leading() - 1.0), 1e-10);
      EXPECT_LT(std::abs(poly.b() - coefficient_B(p, pair)), 1e-10 * std::max(1.0, std::abs(poly.b())));
      for (double alpha : {p.d() + 2.0, p.d() + 3.5, p.d() + 9.0}) {
        const Complex direct = epsilon_eval(p, alpha, pair);
        EXPECT_LT(std::abs(poly(alpha) - direct), 1e-9 * std::pow(alpha, p.d() + 1)) << name;
      }
    }
  }
}

TEST(Epsilon, AlphaThreshold) {
  const auto p = params("I:1,1", 1);
  EXPECT_THROW(epsilon_eval(p, 2.0, origin_pair(1)), DomainError);
  EXPECT_THROW(epsilon_eval(p, 1.0, origin_pair(1)), DomainError);
  EXPECT_THROW(epsilon_eval(p, 3.0, {disk_point(0.0, 1.2), disk_point(0.0, 0.0)}), ParameterError);
}

TEST(Kernel, Examples) {
  const auto p = params("I:1,1", 1);
  EXPECT_NEAR(weighted_kernel(p, 3.0, origin_pair(1)).real(), 2.0, 1e-13);
  const auto a = disk_point(0.0, 0.5);
  EXPECT_NEAR(weighted_kernel(p, 3.0, {a, a}).real(), 2.0 / std::pow(0.75, 3), 1e-12);
}

TEST(Kernel, HermitianSymmetry) {
  for (const auto& name : fixtures::grid_bases()) {
    const auto base = make_domain_spec(parse_domain(name));
    const auto p = make_hartogs_params(base, fixtures::grid_mus(base).back());
    for (const auto& pair : fixtures::random_pairs(p, 100, 61, 0.2)) {
      const double alpha = p.d() + 2.5;
      const Complex kxy = weighted_kernel(p, alpha, pair);
      const Complex kyx = weighted_kernel(p, alpha, {pair.y, pair.x});
      EXPECT_LT(std::abs(kxy - std::conj(kyx)), 1e-10 * std::abs(kxy)) << name;
    }
  }
}

TEST(CoefficientB, Examples) {
  EXPECT_EQ(coefficient_B(params("I:1,1", 2), origin_pair(1)), Complex(-2.5));
  EXPECT_EQ(coefficient_B(params("I:1,1", 1), origin_pair(1)), Complex(-3.0));
}

TEST(CoefficientB, ConstantAtCriticalExponent) {
  for (const auto& name : fixtures::grid_bases()) {
    const auto base = make_domain_spec(parse_domain(name));
    const double mu0 = base.genus / (base.d + 1);
    if (!wallach_contains(base, mu0)) continue;
    const auto p = make_hartogs_params(base, mu0);
    const double expected = -(p.d() + 1.0) * (p.d() + 2.0) / 2.0;
    for (const auto& pair : fixtures::random_pairs(p, 100, 67, 0.3)) EXPECT_EQ(coefficient_B(p, pair), Complex(expected)) << name;
  }
}

TEST(CoefficientC, IsTheRemainder) {
  const auto p = params("I:2,2", 1.7);
  for (const auto& pair : fixtures::random_pairs(p, 20, 71)) {
    const auto poly = epsilon_alpha_polynomial(p, pair);
    const int d = p.d();
    for (double alpha : {6.0, 7.0, 12.5}) {
      Complex tail(0.0);
      for (int j = 2; j <= d + 1; ++j) tail += poly.coeffs[j] * std::pow(alpha, d + 1 - j);
      EXPECT_LT(std::abs(coefficient_C(p, alpha, pair) - tail / std::pow(alpha, d - 1)), 1e-9);
    }
  }
}

TEST(ConditionBPrime, DiskLimiteBound) {
  SamplerConfig cfg;
  cfg.n_samples = 20000;
  cfg.stress_fraction = 1.0;
  const auto r = condition_bprime_report(params("I:1,1", 1), {3, 4, 5, 6}, cfg);
  EXPECT_TRUE(r.pass);
  EXPECT_LE(r.statistic, 2.0 + 1e-9);
}

TEST(ConditionBPrime, DiskMuTwoBBound) {
  SamplerConfig cfg;
  cfg.n_samples = 10000;
  cfg.stress_fraction = 0.5;
  const auto r = condition_bprime_report(params("I:1,1", 2), {3, 4, 5, 6}, cfg);
  EXPECT_TRUE(r.pass);
  EXPECT_LE(r.details["sup_abs_B"].get<double>(), 4.0);
  EXPECT_EQ(r.details["B_bound"].get<double>(), 4.0);
  EXPECT_LT(r.details["remainder_degree_residual"].get<double>(), 1e-12);
}

TEST(ConditionBPrime, NeedsEnoughAlphas) {
  SamplerConfig cfg;
  cfg.n_samples = 100;
  EXPECT_THROW(condition_bprime_report(params("I:1,2", 1), {4, 5, 6, 7}, cfg), ParameterError);
  EXPECT_THROW(condition_bprime_report(params("I:1,1", 1), {2, 3, 4, 5}, cfg), DomainError);
}

TEST(ConditionBPrime, TrendSlope) {
  EXPECT_EQ(detail::least_squares_slope({0.0, 1.0, 2.0}, {1.0, 1.0, 1.0}), 0.0);
  EXPECT_NEAR(detail::least_squares_slope({0.0, 1.0, 2.0, 3.0}, {1.0, 3.0, 5.0, 7.0}), 2.0, 1e-15);
  EXPECT_EQ(detail::least_squares_slope({0.5}, {1.0}), 0.0);
  // a statistic blowing up as the margin shrinks is flagged: |slope * range| exceeds half the sup
  const std::vector<double> margin = {0.01, 0.05, 0.1, 0.15};
  std::vector<double> growth;
  for (double m : margin) growth.push_back(0.1 / m);
  EXPECT_GT(std::abs(detail::least_squares_slope(margin, growth) * (0.15 - 0.01)), 0.5 * 10.0);
}
