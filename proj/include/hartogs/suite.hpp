#pragma once

// Full check suite for one (domain, mu) pair, run in a fixed order.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hartogs/embedding.hpp"
#include "hartogs/integration.hpp"
#include "hartogs/io.hpp"
#include "hartogs/quantization.hpp"

namespace hartogs {

class UsageError : public Error {
 public:
  using Error::Error;
};

struct SuiteConfig {
  std::string domain;
  std::string mu = "1";
  std::vector<double> alphas;
  std::uint64_t n_samples = 10000;
  std::uint64_t seed = 42;
  double step = 1e-3;
  unsigned order = 40;
  std::map<std::string, double> tolerances;
  std::string out;
  std::string dump_samples;
  std::size_t shards = 0;
};

struct SuiteResult {
  nlohmann::json document;
  bool pass = false;
};

inline const std::vector<std::string>& suite_check_names() {
  static const std::vector<std::string> names = {
      "domain_identities", "condition_a",      "leading_identities", "condition_bprime", "kahler_einstein",
      "scalar_curvature",  "det_identity",     "pullback",           "integral"};
  return names;
}

/// Parses the configuration into validated parameters; every failure is a UsageError.
inline CartanHartogsParams validate_suite_config(const SuiteConfig& config) {
  CartanHartogsParams params;
  try {
    params = make_hartogs_params(make_domain_spec(parse_domain(config.domain)), Rational::parse(config.mu));
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (config.alphas.empty()) throw UsageError("at least one alpha is required");
  for (double a : config.alphas) {
    if (!(a > params.d() + 1)) throw UsageError("every alpha must exceed d + 1 = " + std::to_string(params.d() + 1));
  }
  if (config.n_samples < 1000) throw UsageError("--samples must be at least 1000");
  if (!(config.step > 0.0) || config.step > 0.05) throw UsageError("--step must lie in (0, 0.05]");
  if (config.order < 2) throw UsageError("--order must be at least 2");
  for (const auto& [name, value] : config.tolerances) {
    const auto& names = suite_check_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) throw UsageError("unknown check name in --tol: " + name);
    if (!(value > 0.0)) throw UsageError("tolerance for " + name + " must be positive");
  }
  return params;
}

namespace detail {

inline nlohmann::json params_json(const CartanHartogsParams& params) {
  return {{"domain", to_string(params.base.dtype)}, {"mu", params.mu}};
}

inline CheckReport domain_identities_report(const CartanHartogsParams& params) {
  const auto& s = params.base;
  CheckReport r;
  r.suite = "domain_identities";
  r.params = params_json(params);
  const double d_formula = s.r * (s.r - 1) * s.a / 2.0 + s.r * s.b + s.r;
  const double genus_formula = (s.r - 1) * s.a + s.b + 2.0;
  const BasePoint zero = BasePoint::Zero(s.d);
  const double kernel_origin = bergman_kernel(s, zero, zero).real() * s.volume;
  const double err_d = std::abs(d_formula - s.d);
  const double err_genus = std::abs(genus_formula - s.genus);
  const double err_kernel = std::abs(kernel_origin - 1.0);
  r.statistic = std::max({err_d, err_genus, err_kernel});
  r.bound = 1e-12;
  r.details = {{"d", s.d},
               {"r", s.r},
               {"a", s.a},
               {"b", s.b},
               {"genus", s.genus},
               {"volume", s.volume},
               {"d_error", err_d},
               {"genus_error", err_genus},
               {"kernel_origin_times_volume", kernel_origin},
               {"mu0", params.mu0}};
  settle(r, {{"mu_in_wallach_set", wallach_contains(s, params.mu)}});
  return r;
}

/// Deterministic interior points with |z| <= z_radius and |w| <= w_fraction * N^{mu/2}.
inline std::vector<HartogsPoint> moderate_points(const CartanHartogsParams& params, std::size_t count, std::uint64_t seed,
                                                 std::uint64_t stream, double z_radius, double w_fraction) {
  auto eng = block_engine(seed, stream, 0);
  std::vector<HartogsPoint> pts;
  const int d = params.d();
  while (pts.size() < count) {
    HartogsPoint p{uniform_in_ball(eng, d, z_radius), Complex(0.0)};
    if (!domain_contains(params.base, p.z)) continue;
    const double n = generic_norm(params.base, p.z, p.z).real();
    p.w = uniform_in_disk(eng, w_fraction * std::pow(n, params.mu / 2.0));
    pts.push_back(p);
  }
  return pts;
}

inline double max_abs(const Eigen::MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline CheckReport kahler_einstein_report(const CartanHartogsParams& params, const std::vector<HartogsPoint>& pts,
                                          double step, std::uint64_t seed) {
  CheckReport r;
  r.suite = "kahler_einstein";
  r.params = params_json(params);
  r.seed = seed;
  r.n_samples = pts.size();
  const double d = params.d();
  double worst = 0.0, worst_semi = 0.0;
  for (const auto& p : pts) {
    const auto g = metric_tensor(params, p, step);
    const auto c = curvature(params, p, step);
    worst = std::max(worst, max_abs(c.ricci + (d + 2.0) * g));
    worst_semi = std::max(worst_semi, max_abs(ricci_from_det_identity(params, p, step) + (d + 2.0) * g));
  }
  r.statistic = worst;
  r.bound = 1e-4;
  r.details = {{"max_residual_direct", worst}, {"max_residual_semi_analytic", worst_semi}, {"einstein_constant", -(d + 2.0)}};
  settle(r);
  return r;
}

inline CheckReport scalar_curvature_report(const CartanHartogsParams& params, const std::vector<HartogsPoint>& pts,
                                           double step, std::uint64_t seed) {
  CheckReport r;
  r.suite = "scalar_curvature";
  r.params = params_json(params);
  r.seed = seed;
  r.n_samples = pts.size();
  double worst = 0.0;
  for (const auto& p : pts) {
    const double rho = curvature(params, p, step).scalar;
    const Complex b = coefficient_B(params, {p, p});
    worst = std::max(worst, std::abs(b - rho / 2.0));
  }
  const auto origin = HartogsPoint::origin(params.d());
  r.statistic = worst;
  r.bound = 1e-3;
  r.details = {{"max_abs_B_minus_half_rho", worst},
               {"B_origin", coefficient_B(params, {origin, origin}).real()},
               {"rho_origin", curvature(params, origin, step).scalar}};
  settle(r);
  return r;
}

inline CheckReport pullback_report(const CartanHartogsParams& params, double alpha, unsigned order, std::uint64_t seed) {
  CheckReport r;
  r.suite = "pullback";
  r.params = params_json(params);
  r.params["alpha"] = alpha;
  r.params["order"] = order;
  r.seed = seed;
  const std::size_t n_pairs = 100;
  r.n_samples = n_pairs;
  auto eng = block_engine(seed, /*stream=*/5, 0);
  const int d = params.d();
  const unsigned half = order / 2;
  double worst = 0.0, worst_half = 0.0;
  bool non_increasing = true;
  for (std::size_t k = 0; k < n_pairs; ++k) {
    PointPair pair{{uniform_in_ball(eng, d, 0.5), uniform_in_disk(eng, 0.5)},
                   {uniform_in_ball(eng, d, 0.5), uniform_in_disk(eng, 0.5)}};
    const double full = pullback_residual(params, alpha, pair, order);
    const double coarse = pullback_residual(params, alpha, pair, half);
    worst = std::max(worst, full);
    worst_half = std::max(worst_half, coarse);
    if (full > coarse + 1e-14) non_increasing = false;
  }
  r.statistic = worst;
  r.bound = 1e-6;
  r.details = {{"max_residual", worst}, {"max_residual_half_order", worst_half}, {"half_order", half}};
  settle(r, {{"non_increasing_in_order", non_increasing}});
  return r;
}

inline CheckReport integral_report(const CartanHartogsParams& params, double alpha, std::uint64_t n_samples,
                                   std::uint64_t seed, std::size_t shards) {
  CheckReport r;
  r.suite = "integral";
  r.params = params_json(params);
  r.params["alpha"] = alpha;
  r.seed = seed;
  r.n_samples = n_samples;
  const auto est = weighted_norm_integral_mc(params, alpha, n_samples, seed, shards);
  r.details = {{"mc_value", est.value}, {"mc_stderr", est.stderr_}};
  const bool finite = std::isfinite(est.value) && est.value > 0.0 && std::isfinite(est.stderr_);
  if (is_ball(params.base)) {
    const double closed = weighted_norm_integral_closed(params, alpha);
    r.details["closed_form"] = closed;
    r.statistic = est.stderr_ > 0.0 ? std::abs(est.value - closed) / est.stderr_ : std::abs(est.value - closed);
    r.bound = 3.0;
    r.details["statistic_meaning"] = "|mc - closed| / stderr";
  } else {
    // cross-check against the fiber-integrated base integral
    const auto reduced = weighted_norm_integral_reduced_mc(params, alpha, n_samples, seed, shards);
    r.details["reduced_value"] = reduced.value;
    r.details["reduced_stderr"] = reduced.stderr_;
    const double se = std::hypot(est.stderr_, reduced.stderr_);
    r.statistic = se > 0.0 ? std::abs(est.value - reduced.value) / se : std::abs(est.value - reduced.value);
    r.bound = 3.0;
    r.details["statistic_meaning"] = "|mc - reduced_mc| / combined stderr";
  }
  settle(r, {{"finite_positive", finite}});
  return r;
}

inline std::vector<int> integer_alpha_set(const CartanHartogsParams& params, const std::vector<double>& alphas) {
  std::vector<int> out;
  for (double a : alphas) {
    if (a == std::floor(a)) out.push_back(static_cast<int>(a));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  int next = out.empty() ? params.d() + 2 : out.back() + 1;
  while (static_cast<int>(out.size()) < params.d() + 3) out.push_back(next++);
  return out;
}

inline void write_samples_csv(const std::string& path, const std::vector<DiastasisSample>& samples, int d) {
  std::ofstream os(path);
  if (!os) throw UsageError("cannot open " + path + " for writing");
  os << "index";
  for (const char* side : {"x", "y"}) {
    for (int i = 0; i < d; ++i) os << ',' << side << "_z" << i + 1 << "_re," << side << "_z" << i + 1 << "_im";
    os << ',' << side << "_w_re," << side << "_w_im";
  }
  os << ",diastasis,exp_minus_diastasis\n";
  for (std::size_t k = 0; k < samples.size(); ++k) {
    os << k;
    for (const auto* p : {&samples[k].pair.x, &samples[k].pair.y}) {
      for (int i = 0; i < d; ++i) os << ',' << io::format_number(p->z(i).real()) << ',' << io::format_number(p->z(i).imag());
      os << ',' << io::format_number(p->w.real()) << ',' << io::format_number(p->w.imag());
    }
    os << ',' << io::format_number(samples[k].diastasis) << ',' << io::format_number(std::exp(-samples[k].diastasis)) << '\n';
  }
}

}  // namespace detail

inline SuiteResult run_suite(const SuiteConfig& config) {
  const auto params = validate_suite_config(config);
  const int d = params.d();
  SamplerConfig sampler;
  sampler.n_samples = config.n_samples;
  sampler.seed = config.seed;
  sampler.shards = config.shards;

  std::vector<CheckReport> reports;
  reports.push_back(detail::domain_identities_report(params));

  SamplerConfig stressed = sampler;
  stressed.stress_fraction = 0.2;
  std::vector<DiastasisSample> dumped;
  reports.push_back(exp_minus_diastasis_report(params, stressed, config.dump_samples.empty() ? nullptr : &dumped));
  if (!config.dump_samples.empty()) detail::write_samples_csv(config.dump_samples, dumped, d);

  reports.push_back(leading_identities(params));
  reports.push_back(condition_bprime_report(params, detail::integer_alpha_set(params, config.alphas), stressed));

  const auto pts = detail::moderate_points(params, 10, config.seed, /*stream=*/4, 0.5, 0.5);
  if (std::abs(params.mu - params.mu0) <= 1e-12 * params.mu0) {
    reports.push_back(detail::kahler_einstein_report(params, pts, config.step, config.seed));
    reports.push_back(detail::scalar_curvature_report(params, pts, config.step, config.seed));
  }
  reports.push_back(det_identity_residual(params, pts, config.step));
  if (is_ball(params.base)) reports.push_back(detail::pullback_report(params, config.alphas.front(), config.order, config.seed));
  reports.push_back(detail::integral_report(params, config.alphas.front(), config.n_samples, config.seed, config.shards));

  for (auto& r : reports) {
    if (auto it = config.tolerances.find(r.suite); it != config.tolerances.end()) override_bound(r, it->second);
  }

  SuiteResult out;
  out.pass = std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.pass; });
  nlohmann::json alphas = config.alphas;
  out.document = {{"command", "check"},
                  {"params",
                   {{"domain", to_string(params.base.dtype)},
                    {"mu", params.mu},
                    {"alpha", alphas},
                    {"samples", config.n_samples},
                    {"seed", config.seed},
                    {"step", config.step},
                    {"order", config.order}}},
                  {"results", reports},
                  {"pass", out.pass}};
  if (!out.pass) {
    nlohmann::json failing = nlohmann::json::array();
    for (const auto& r : reports) {
      if (!r.pass) failing.push_back(r.suite);
    }
    out.document["failing"] = failing;
  }
  return out;
}

}  // namespace hartogs
