// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hartogs/suite.hpp"

using namespace hartogs;

namespace {

struct Cell {
  std::string base;
  double mu;
};

// {I(1,1), I(1,2), I(2,2), II(2), III(5), IV(3), IV(4)} x {a/2, (r-1)a/2, mu0, 1, 1.7}, kept when mu > 0 and mu in W.
struct Grid {
  std::vector<Cell> labeled;   // one entry per (base, role), duplicates kept
  std::vector<Cell> distinct;  // duplicates removed
};

Grid make_grid() {
  Grid g;
  for (const char* name : {"I:1,1", "I:1,2", "I:2,2", "II:2", "III:5", "IV:3", "IV:4"}) {
    const auto base = make_domain_spec(parse_domain(name));
    const double mu0 = base.genus / (base.d + 1);
    std::vector<double> seen;
    for (double mu : {base.a / 2.0, (base.r - 1) * base.a / 2.0, mu0, 1.0, 1.7}) {
      if (!(mu > 0.0) || !wallach_contains(base, mu)) continue;
      g.labeled.push_back({name, mu});
      bool dup = false;
      for (double s : seen) dup = dup || std::abs(s - mu) < 1e-14;
      if (!dup) {
        seen.push_back(mu);
        g.distinct.push_back({name, mu});
      }
    }
  }
  return g;
}

CartanHartogsParams params_of(const Cell& c) {
  return make_hartogs_params(make_domain_spec(parse_domain(c.base)), c.mu);
}

std::string cell_name(const Cell& c) {
  std::ostringstream os;
  os << c.base << " mu=" << c.mu;
  return os.str();
}

std::vector<PointPair> sample_pairs(const CartanHartogsParams& p, std::size_t n, std::uint64_t seed, double stress) {
  SamplerConfig cfg;
  cfg.stress_fraction = stress;
  auto eng = block_engine(seed, /*stream=*/9, 0);
  AcceptanceCounter counter;
  std::vector<PointPair> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    auto x = sample_for_check(p, cfg, eng, counter);
    auto y = sample_for_check(p, cfg, eng, counter);
    out.push_back({x, y});
  }
  return out;
}

struct Outcome {
  bool pass = false;
  std::string summary;
};

int failures = 0;

void run(int id, const char* title, const std::function<Outcome()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("[%s] criterion %2d: %s | %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, title, o.summary.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

int main() {
  const Grid grid = make_grid();

  run(1, "leading identities over the domain x mu grid", [&] {
    double worst = 0.0;
    bool ok = grid.labeled.size() >= 25;
    std::string bad;
    for (const auto& c : grid.distinct) {
      const auto r = leading_identities(params_of(c));
      worst = std::max(worst, r.statistic);
      if (!(r.statistic < 1e-9)) {
        ok = false;
        bad = cell_name(c);
      }
    }
    return Outcome{ok, std::to_string(grid.labeled.size()) + " cells (" + std::to_string(grid.distinct.size()) +
                           " distinct), max rel err " + fmt(worst) + (bad.empty() ? "" : ", worst at " + bad)};
  });

  run(2, "worked epsilon value and exact expansion on the disk, mu=2", [&] {
    const auto p = make_hartogs_params(make_domain_spec(TypeI{1, 1}), 2.0);
    const auto o = HartogsPoint::origin(1);
    const Complex e = epsilon_eval(p, 4.0, {o, o});
    const auto poly = epsilon_alpha_polynomial(p, {o, o});
    const bool exact = poly.coeffs.size() == 3 && poly.coeffs[0] == Complex(1.0) && poly.coeffs[1] == Complex(-2.5) &&
                       poly.coeffs[2] == Complex(1.0);
    const double rel = std::abs(e - 7.0) / 7.0;
    return Outcome{rel < 1e-12 && exact, "eps(4)=" + fmt(e.real()) + ", rel err " + fmt(rel) +
                                             (exact ? ", coeffs [1, -2.5, 1] exact" : ", coeffs differ")};
  });

  run(3, "ball consistency: disk mu=1, eps=(alpha-1)(alpha-2)", [&] {
    const auto p = make_hartogs_params(make_domain_spec(TypeI{1, 1}), 1.0);
    auto eng = block_engine(42, 10, 0);
    AcceptanceCounter counter;
    SamplerConfig cfg;
    double worst = 0.0;
    for (double alpha : {3.0, 4.0, 5.0}) {
      const double expected = (alpha - 1) * (alpha - 2);
      double lo = INFINITY, hi = -INFINITY;
      for (int k = 0; k < 100; ++k) {
        const auto x = sample_for_check(p, cfg, eng, counter);
        const Complex e = epsilon_eval(p, alpha, {x, x});
        lo = std::min(lo, e.real());
        hi = std::max(hi, e.real());
        worst = std::max(worst, std::abs(e - expected) / expected);
      }
      worst = std::max(worst, (hi - lo) / expected);
    }
    return Outcome{worst < 1e-10, "100 points x alpha in {3,4,5}, max rel spread/error " + fmt(worst)};
  });

  run(4, "B closed form vs extracted coefficient; constant B at mu0", [&] {
    double worst = 0.0;
    double mu0_spread = 0.0;
    int mu0_cells = 0;
    for (const auto& c : grid.distinct) {
      const auto p = params_of(c);
      const bool critical = std::abs(p.mu - p.mu0) <= 1e-12 * p.mu0;
      const double expected = -(p.d() + 1.0) * (p.d() + 2.0) / 2.0;
      if (critical) ++mu0_cells;
      for (const auto& pair : sample_pairs(p, 1000, 42, 0.2)) {
        const Complex b = coefficient_B(p, pair);
        const Complex extracted = epsilon_alpha_polynomial(p, pair).b();
        worst = std::max(worst, std::abs(b - extracted) / std::max(1.0, std::abs(b)));
        if (critical) mu0_spread = std::max(mu0_spread, std::abs(b - expected));
      }
    }
    return Outcome{worst < 1e-10 && mu0_spread == 0.0 && mu0_cells > 0,
                   "max |B - coeffs[1]| " + fmt(worst) + " over 1000 pairs x " + std::to_string(grid.distinct.size()) +
                       " cells; mu0 cells " + std::to_string(mu0_cells) + ", spread " + fmt(mu0_spread)};
  });

  run(5, "Condition (A): no violations, strict off the diagonal", [&] {
    bool ok = true;
    long violations = 0;
    double worst_sep = 0.0;
    std::string bad;
    for (const auto& c : grid.distinct) {
      SamplerConfig cfg;
      cfg.n_samples = 10000;
      cfg.seed = 42;
      cfg.stress_fraction = 0.2;
      const auto r = exp_minus_diastasis_report(params_of(c), cfg);
      violations += r.details["violations"].get<long>();
      worst_sep = std::max(worst_sep, r.details["max_exp_minus_d_separated"].get<double>());
      if (!r.pass) {
        ok = false;
        bad = cell_name(c);
      }
    }
    return Outcome{ok && violations == 0 && worst_sep < 1.0,
                   "10^4 pairs x " + std::to_string(grid.distinct.size()) + " cells, violations " +
                       std::to_string(violations) + ", max exp(-D) separated " + fmt(worst_sep) +
                       (bad.empty() ? "" : ", failed at " + bad)};
  });

  run(6, "scalar curvature: B = rho/2 on the disk, ball values", [&] {
    double worst = 0.0;
    for (double mu : {1.0, 2.0}) {
      const auto p = make_hartogs_params(make_domain_spec(TypeI{1, 1}), mu);
      const auto pts = detail::moderate_points(p, 10, 42, 4, 0.5, 0.5);
      for (const auto& x : pts) {
        const double rho = curvature(p, x).scalar;
        worst = std::max(worst, std::abs(coefficient_B(p, {x, x}) - rho / 2.0));
      }
    }
    const auto ball = make_hartogs_params(make_domain_spec(TypeI{1, 1}), 1.0);
    const auto o = HartogsPoint::origin(1);
    const double rho = curvature(ball, o).scalar;
    const Complex b = coefficient_B(ball, {o, o});
    const bool ball_ok = std::abs(rho + 6.0) < 1e-3 && std::abs(b + 3.0) < 1e-3;
    return Outcome{worst < 1e-3 && ball_ok,
                   "max |B - rho/2| " + fmt(worst) + " over 20 points; ball rho " + fmt(rho) + ", B " + fmt(b.real())};
  });

  run(7, "Kahler-Einstein at mu0 for I(1,1), I(1,2)", [&] {
    double worst = 0.0;
    for (int n : {1, 2}) {
      const auto base = make_domain_spec(TypeI{1, n});
      const auto p = make_hartogs_params(base, base.genus / (base.d + 1));
      for (const auto& x : detail::moderate_points(p, 10, 42, 4, 0.5, 0.5)) {
        const auto g = metric_tensor(p, x);
        worst = std::max(worst, (curvature(p, x).ricci + (p.d() + 2.0) * g).cwiseAbs().maxCoeff());
      }
    }
    return Outcome{worst < 1e-4, "max |Ric + (d+2) g| " + fmt(worst) + " over 20 points"};
  });

  run(8, "determinant identity over the grid", [&] {
    double spread = 0.0, c_err = 0.0;
    bool ok = true;
    std::string bad;
    for (const auto& c : grid.distinct) {
      const auto p = params_of(c);
      const auto r = det_identity_residual(p, detail::moderate_points(p, 10, 42, 4, 0.5, 0.5));
      spread = std::max(spread, r.statistic);
      c_err = std::max(c_err, r.details["c_relative_error"].get<double>());
      if (!r.pass) {
        ok = false;
        bad = cell_name(c);
      }
    }
    return Outcome{ok && spread < 1e-5 && c_err < 1e-5,
                   "max spread " + fmt(spread) + ", max c mismatch " + fmt(c_err) + (bad.empty() ? "" : ", failed at " + bad)};
  });

  run(9, "weighted integrals: Monte Carlo vs closed form, divergence guard", [&] {
    double worst_sigma = 0.0, worst_rel = 0.0;
    for (int d : {1, 2}) {
      for (double mu : {1.0, 2.0}) {
        const auto p = make_hartogs_params(make_domain_spec(TypeI{1, d}), mu);
        for (double alpha : {d + 2.0, d + 3.0}) {
          const auto est = weighted_norm_integral_mc(p, alpha, 1000000, 42);
          const double closed = weighted_norm_integral_closed(p, alpha);
          worst_sigma = std::max(worst_sigma, std::abs(est.value - closed) / est.stderr_);
          worst_rel = std::max(worst_rel, est.stderr_ / est.value);
        }
      }
    }
    bool guard = true;
    for (int d : {1, 2}) {
      const auto p = make_hartogs_params(make_domain_spec(TypeI{1, d}), 1.0);
      try {
        weighted_norm_integral_mc(p, d + 1.0, 1000, 42);
        guard = false;
      } catch (const DivergenceError&) {
      }
      try {
        weighted_norm_integral_closed(p, d + 1.0);
        guard = false;
      } catch (const DivergenceError&) {
      }
    }
    return Outcome{worst_sigma < 3.0 && worst_rel < 0.01 && guard,
                   "8 cells, max |mc - closed|/stderr " + fmt(worst_sigma) + ", max stderr/value " + fmt(worst_rel) +
                       (guard ? ", guard fires at alpha=d+1" : ", guard missing")};
  });

  run(10, "Fubini-Study pullback on the disk, mu=1, alpha=3", [&] {
    const auto p = make_hartogs_params(make_domain_spec(TypeI{1, 1}), 1.0);
    const auto r = detail::pullback_report(p, 3.0, 40, 42);
    return Outcome{r.pass, "max residual T=40 " + fmt(r.statistic) + ", T=20 " +
                               fmt(r.details["max_residual_half_order"].get<double>()) + ", non-increasing " +
                               (r.details["conditions"]["non_increasing_in_order"].get<bool>() ? "yes" : "no")};
  });

  run(11, "limite statistic bounded, no boundary trend", [&] {
    const auto disk = make_hartogs_params(make_domain_spec(TypeI{1, 1}), 1.0);
    SamplerConfig stress;
    stress.n_samples = 100000;
    stress.seed = 42;
    stress.stress_fraction = 1.0;
    const auto r = condition_bprime_report(disk, {3, 4, 5, 6}, stress);
    bool ok = r.statistic <= 2.0 + 1e-9;
    double worst = r.statistic;
    std::string bad;
    for (const auto& c : grid.distinct) {
      const auto p = params_of(c);
      SamplerConfig cfg;
      cfg.n_samples = 10000;
      cfg.seed = 42;
      cfg.stress_fraction = 0.2;
      const auto rr = condition_bprime_report(p, detail::integer_alpha_set(p, {}), cfg);
      worst = std::max(worst, rr.statistic);
      if (!rr.pass) {
        ok = false;
        bad = cell_name(c);
      }
    }
    return Outcome{ok, "disk sup over 10^5 stress pairs " + fmt(r.statistic) + ", max over cells " + fmt(worst) +
                           (bad.empty() ? ", all cells bounded without trend" : ", failed at " + bad)};
  });

  run(12, "determinism: identical seeds give byte-identical reports", [&] {
    bool same = true;
    int runs = 0;
    for (const auto& [domain, mu] : std::vector<std::pair<std::string, std::string>>{{"I:1,1", "1"}, {"I:1,2", "1.7"}, {"IV:3", "1"}}) {
      SuiteConfig c;
      c.domain = domain;
      c.mu = mu;
      c.alphas = {make_domain_spec(parse_domain(domain)).d + 2.0};
      c.n_samples = 5000;
      c.shards = 1;
      const auto a = io::to_text(run_suite(c).document);
      c.shards = 4;
      const auto b = io::to_text(run_suite(c).document);
      const auto again = io::to_text(run_suite(c).document);
      same = same && a == b && b == again;
      runs += 3;
    }
    return Outcome{same, std::to_string(runs) + " suite runs over 3 configs and shard counts {1, 4}"};
  });

  std::printf("%s: %d criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
