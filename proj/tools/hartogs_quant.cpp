// hartogs_quant: command-line front end for Cartan-Hartogs quantization checks.
//
// Exit status: 0 success, 1 a check failed, 2 usage error (nothing on stdout),
// 3 numerical failure during evaluation.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "hartogs/suite.hpp"

namespace {

using hartogs::io::json;

struct Options {
  std::string domain;
  std::string mu;
  std::vector<double> alphas;
  std::uint64_t samples = 10000;
  std::uint64_t seed = 42;
  double step = 1e-3;
  unsigned order = 40;
  std::vector<std::string> tols;
  std::string out;
  std::string dump_samples;
  std::string point;
  std::string pair;
  bool origin = false;
  bool closed_form = false;
  std::string info_domain;
};

struct Resolved {
  hartogs::CartanHartogsParams params;
  double alpha = 0.0;
};

hartogs::CartanHartogsParams resolve_params(const Options& o) {
  if (o.domain.empty()) throw hartogs::UsageError("--domain is required");
  if (o.mu.empty()) throw hartogs::UsageError("--mu is required");
  try {
    return hartogs::make_hartogs_params(hartogs::make_domain_spec(hartogs::parse_domain(o.domain)),
                                        hartogs::Rational::parse(o.mu));
  } catch (const hartogs::Error& e) {
    throw hartogs::UsageError(e.what());
  }
}

double single_alpha(const Options& o) {
  if (o.alphas.size() != 1) throw hartogs::UsageError("exactly one --alpha value is expected");
  return o.alphas.front();
}

hartogs::PointPair resolve_pair(const Options& o, const hartogs::CartanHartogsParams& params, bool allow_point) {
  const int d = params.d();
  const int given = (o.origin ? 1 : 0) + (o.point.empty() ? 0 : 1) + (o.pair.empty() ? 0 : 1);
  if (given != 1) throw hartogs::UsageError("give exactly one of --origin, --point, --pair");
  hartogs::PointPair pair;
  try {
    if (o.origin) {
      const auto p = hartogs::HartogsPoint::origin(d);
      pair = {p, p};
    } else if (!o.point.empty()) {
      if (!allow_point) throw hartogs::UsageError("this command needs --pair");
      const auto p = hartogs::io::parse_point(o.point, d);
      pair = {p, p};
    } else {
      pair = hartogs::io::parse_pair(o.pair, d);
    }
  } catch (const hartogs::UsageError&) {
    throw;
  } catch (const hartogs::Error& e) {
    throw hartogs::UsageError(e.what());
  }
  for (const auto* p : {&pair.x, &pair.y}) {
    if (!hartogs::hartogs_contains(params, *p)) throw hartogs::UsageError("point lies outside the Hartogs domain");
  }
  return pair;
}

hartogs::HartogsPoint resolve_point(const Options& o, const hartogs::CartanHartogsParams& params) {
  if (!o.pair.empty()) throw hartogs::UsageError("this command takes --point or --origin");
  return resolve_pair(o, params, true).x;
}

json params_json(const hartogs::CartanHartogsParams& params) {
  return {{"domain", hartogs::to_string(params.base.dtype)}, {"mu", params.mu}};
}

json complex_json(hartogs::Complex c) { return hartogs::io::complex_to_json(c); }

json cmd_info(const Options& o) {
  hartogs::CartanDomainSpec spec;
  try {
    spec = hartogs::make_domain_spec(hartogs::parse_domain(o.info_domain));
  } catch (const hartogs::Error& e) {
    throw hartogs::UsageError(e.what());
  }
  return {{"command", "info"},  {"domain", hartogs::to_string(spec.dtype)},
          {"d", spec.d},        {"r", spec.r},
          {"a", spec.a},        {"b", spec.b},
          {"genus", spec.genus}, {"volume", spec.volume},
          {"wallach_discrete", [&] {
             json pts = json::array();
             for (int j = 0; j < spec.r; ++j) pts.push_back(j * spec.a / 2.0);
             return pts;
           }()},
          {"wallach_continuous_from", (spec.r - 1) * spec.a / 2.0}};
}

json cmd_epsilon(const Options& o) {
  const auto params = resolve_params(o);
  const double alpha = single_alpha(o);
  try {
    hartogs::detail::require_alpha(params, alpha);
  } catch (const hartogs::Error& e) {
    throw hartogs::UsageError(e.what());
  }
  const auto pair = resolve_pair(o, params, true);
  const auto eps = hartogs::epsilon_eval(params, alpha, pair);
  json j = {{"command", "epsilon"}, {"params", params_json(params)}, {"value", eps.real()}};
  j["params"]["alpha"] = alpha;
  if (eps.imag() != 0.0) j["value_imag"] = eps.imag();
  return j;
}

json cmd_expansion(const Options& o) {
  const auto params = resolve_params(o);
  const auto pair = resolve_pair(o, params, true);
  const auto poly = hartogs::epsilon_alpha_polynomial(params, pair);
  json coeffs = json::array();
  bool real = true;
  for (const auto& c : poly.coeffs) real = real && c.imag() == 0.0;
  for (const auto& c : poly.coeffs) coeffs.push_back(real ? json(c.real()) : complex_json(c));
  const auto b = hartogs::coefficient_B(params, pair);
  json j = {{"command", "expansion"},
            {"params", params_json(params)},
            {"coefficients", coeffs},
            {"degree", poly.coeffs.size() - 1},
            {"X", complex_json(hartogs::x_value(params, pair))},
            {"B", real ? json(b.real()) : complex_json(b)}};
  if (!o.alphas.empty()) {
    json cs = json::array();
    for (double alpha : o.alphas) {
      const auto c = hartogs::coefficient_C(params, alpha, pair);
      cs.push_back({{"alpha", alpha}, {"C", real ? json(c.real()) : complex_json(c)}});
    }
    j["C"] = cs;
  }
  return j;
}

json cmd_diastasis(const Options& o) {
  const auto params = resolve_params(o);
  const auto pair = resolve_pair(o, params, true);
  const double dist = hartogs::diastasis(params, pair);
  return {{"command", "diastasis"}, {"params", params_json(params)}, {"value", dist}, {"exp_minus_value", std::exp(-dist)}};
}

json cmd_embed(const Options& o) {
  const auto params = resolve_params(o);
  const double alpha = single_alpha(o);
  const auto p = resolve_point(o, params);
  hartogs::EmbeddingVector v;
  try {
    v = hartogs::embed_truncated(params, alpha, p, o.order);
  } catch (const hartogs::UnsupportedBaseError& e) {
    throw hartogs::UsageError(e.what());
  } catch (const hartogs::DomainError& e) {
    throw hartogs::UsageError(e.what());
  }
  json comps = json::array();
  json idx = json::array();
  for (std::size_t k = 0; k < v.components.size(); ++k) {
    comps.push_back(complex_json(v.components[k]));
    idx.push_back({{"m", v.indices[k].m}, {"q", v.indices[k].q}});
  }
  json j = {{"command", "embed"},      {"params", params_json(params)}, {"order", v.order},
            {"components", comps},     {"indices", idx},                {"squared_norm", v.squared_norm()},
            {"tail_bound", v.tail_bound}};
  j["params"]["alpha"] = alpha;
  return j;
}

json cmd_pullback(const Options& o) {
  const auto params = resolve_params(o);
  const double alpha = single_alpha(o);
  if (o.pair.empty()) throw hartogs::UsageError("pullback needs --pair");
  const auto pair = resolve_pair(o, params, false);
  double residual = 0.0;
  try {
    residual = hartogs::pullback_residual(params, alpha, pair, o.order);
  } catch (const hartogs::UnsupportedBaseError& e) {
    throw hartogs::UsageError(e.what());
  } catch (const hartogs::DomainError& e) {
    throw hartogs::UsageError(e.what());
  } catch (const hartogs::ParameterError& e) {
    throw hartogs::UsageError(e.what());
  }
  json j = {{"command", "pullback"}, {"params", params_json(params)}, {"order", o.order}, {"residual", residual}};
  j["params"]["alpha"] = alpha;
  return j;
}

json cmd_integrate(const Options& o) {
  const auto params = resolve_params(o);
  const double alpha = single_alpha(o);
  if (o.samples < 1000) throw hartogs::UsageError("--samples must be at least 1000");
  try {
    hartogs::detail::require_convergent(params, alpha);
  } catch (const hartogs::Error& e) {
    throw hartogs::UsageError(e.what());
  }
  json j = {{"command", "integrate"}, {"params", params_json(params)}};
  j["params"]["alpha"] = alpha;
  const auto est = hartogs::weighted_norm_integral_mc(params, alpha, o.samples, o.seed);
  j["value"] = est.value;
  j["stderr"] = est.stderr_;
  j["n_samples"] = est.n_samples;
  j["seed"] = est.seed;
  if (o.closed_form) {
    if (!hartogs::is_ball(params.base)) throw hartogs::UsageError("--closed-form is available for ball bases I:1,d only");
    j["closed_form"] = hartogs::weighted_norm_integral_closed(params, alpha);
  }
  return j;
}

hartogs::SuiteConfig suite_config(const Options& o) {
  hartogs::SuiteConfig c;
  if (o.domain.empty()) throw hartogs::UsageError("--domain is required");
  c.domain = o.domain;
  c.mu = o.mu.empty() ? std::string("1") : o.mu;
  c.alphas = o.alphas;
  c.n_samples = o.samples;
  c.seed = o.seed;
  c.step = o.step;
  c.order = o.order;
  c.out = o.out;
  c.dump_samples = o.dump_samples;
  for (const auto& t : o.tols) {
    const auto eq = t.find('=');
    if (eq == std::string::npos || eq == 0) throw hartogs::UsageError("--tol expects name=value, got " + t);
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(t.substr(eq + 1), &used);
      if (used != t.size() - eq - 1) throw std::invalid_argument(t);
    } catch (const std::exception&) {
      throw hartogs::UsageError("--tol value is not a number: " + t);
    }
    c.tolerances[t.substr(0, eq)] = v;
  }
  return c;
}

void emit(const json& j, const std::string& out) {
  const std::string text = hartogs::io::to_text(j);
  if (!out.empty()) {
    std::ofstream os(out);
    if (!os) throw hartogs::UsageError("cannot open " + out + " for writing");
    os << text;
  }
  std::cout << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cartan-Hartogs domains: Berezin quantization checks"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&o](CLI::App* sub) {
    sub->add_option("--domain", o.domain, "base domain: I:m,n | II:n | III:n | IV:n");
    sub->add_option("--mu", o.mu, "Hartogs exponent (decimal or p/q)");
    sub->add_option("--alpha", o.alphas, "weight(s), comma separated")->delimiter(',');
    sub->add_option("--out", o.out, "also write the JSON document to this path");
  };
  auto add_points = [&o](CLI::App* sub) {
    sub->add_option("--point", o.point, "JSON array [z_1, ..., z_d, w], entries number or [re, im]");
    sub->add_option("--pair", o.pair, "JSON array [point, point]");
    sub->add_flag("--origin", o.origin, "use the origin (diagonal)");
  };

  auto* info = app.add_subcommand("info", "invariants of a base domain");
  info->add_option("domain", o.info_domain, "base domain")->required();
  info->add_option("--out", o.out);

  auto* epsilon = app.add_subcommand("epsilon", "epsilon function at a point or pair");
  add_common(epsilon);
  add_points(epsilon);

  auto* expansion = app.add_subcommand("expansion", "epsilon as a polynomial in alpha, B and C coefficients");
  add_common(expansion);
  add_points(expansion);

  auto* diast = app.add_subcommand("diastasis", "Calabi diastasis of a pair");
  add_common(diast);
  add_points(diast);

  auto* embed = app.add_subcommand("embed", "truncated projective embedding (ball bases)");
  add_common(embed);
  add_points(embed);
  embed->add_option("--order", o.order, "maximal total degree");

  auto* pullback = app.add_subcommand("pullback", "Fubini-Study pullback residual (ball bases)");
  add_common(pullback);
  add_points(pullback);
  pullback->add_option("--order", o.order, "maximal total degree");

  auto* integrate = app.add_subcommand("integrate", "weighted norm integral");
  add_common(integrate);
  integrate->add_option("--samples", o.samples);
  integrate->add_option("--seed", o.seed);
  integrate->add_flag("--closed-form", o.closed_form, "also report the closed form (ball bases)");

  auto* check = app.add_subcommand("check", "run the full verification suite");
  add_common(check);
  check->add_option("--samples", o.samples);
  check->add_option("--seed", o.seed);
  check->add_option("--step", o.step, "finite-difference step");
  check->add_option("--order", o.order, "embedding truncation order");
  check->add_option("--tol", o.tols, "tolerance override name=value (repeatable)");
  check->add_option("--dump-samples", o.dump_samples, "CSV dump of the Condition (A) sample pairs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (check->parsed()) {
      const auto result = hartogs::run_suite(suite_config(o));
      emit(result.document, o.out);
      return result.pass ? 0 : 1;
    }
    json j;
    if (info->parsed()) j = cmd_info(o);
    else if (epsilon->parsed()) j = cmd_epsilon(o);
    else if (expansion->parsed()) j = cmd_expansion(o);
    else if (diast->parsed()) j = cmd_diastasis(o);
    else if (embed->parsed()) j = cmd_embed(o);
    else if (pullback->parsed()) j = cmd_pullback(o);
    else if (integrate->parsed()) j = cmd_integrate(o);
    emit(j, o.out);
    return 0;
  } catch (const hartogs::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const hartogs::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
