#pragma once

// Kahler geometry of Cartan-Hartogs domains: the potential
//   Phi(z, w) = -log(N(z, conj z)^mu - |w|^2),
// its sesquianalytic extension, Calabi's diastasis, and finite-difference
// metric and curvature.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "hartogs/hartogs_domain.hpp"
#include "hartogs/parallel.hpp"
#include "hartogs/report.hpp"
#include "hartogs/sampling.hpp"

namespace hartogs {

namespace detail {

/// Phi(x, conj y) without interior checks (finite-difference stencils call this).
///
/// Written as -mu log N(z_x, conj z_y) - log X with X = 1 - w_x conj(w_y) N^{-mu}.
/// On interior pairs |1 - X| < 1, so the principal log of X is unambiguous and
/// the whole expression is the analytic continuation from the diagonal.
inline Complex potential_ext_unchecked(const CartanHartogsParams& params, const HartogsPoint& x, const HartogsPoint& y) {
  const Complex log_n = log_generic_norm(params.base, x.z, y.z);
  const Complex n_mu = std::exp(params.mu * log_n);
  const Complex arg = n_mu - x.w * std::conj(y.w);
  if (std::abs(arg) < 1e-300) throw SingularityError("potential is singular: N^mu - w conj(w') vanishes");
  const Complex x_value = arg / n_mu;
  return -(params.mu * log_n + std::log(x_value));
}

inline double to_flat_distance(const HartogsPoint& a, const HartogsPoint& b) { return (to_flat(a) - to_flat(b)).norm(); }

}  // namespace detail

/// Mixed derivative d^2 F / dx_i d(conj y_j) of a function holomorphic in x and
/// antiholomorphic in y, by 4-point central differences with Richardson extrapolation.
template <class F>
Complex mixed_partial(F&& f, const Eigen::VectorXcd& x, const Eigen::VectorXcd& y, int i, int j, double step,
                      int richardson_levels) {
  const int n = richardson_levels + 1;
  std::vector<std::vector<Complex>> table(n);
  double h = step;
  for (int k = 0; k < n; ++k, h /= 2.0) {
    Eigen::VectorXcd xp = x, xm = x, yp = y, ym = y;
    xp(i) += h;
    xm(i) -= h;
    yp(j) += h;
    ym(j) -= h;
    table[0].push_back((f(xp, yp) - f(xp, ym) - f(xm, yp) + f(xm, ym)) / (4.0 * h * h));
  }
  for (int l = 1; l < n; ++l) {
    const double w = std::pow(4.0, l);
    for (int k = 0; k + l < n; ++k) table[l].push_back((w * table[l - 1][k + 1] - table[l - 1][k]) / (w - 1.0));
  }
  return table[n - 1][0];
}

inline Complex potential_ext(const CartanHartogsParams& params, const HartogsPoint& x, const HartogsPoint& y) {
  if (!hartogs_contains(params, x) || !hartogs_contains(params, y))
    throw ParameterError("potential extension requires interior points");
  return detail::potential_ext_unchecked(params, x, y);
}

/// Calabi's diastasis D(x, y) = Phi(x,x) + Phi(y,y) - Phi(x,y) - Phi(y,x).
inline double diastasis(const CartanHartogsParams& params, const PointPair& pair) {
  const Complex pxx = potential_ext(params, pair.x, pair.x);
  const Complex pyy = potential_ext(params, pair.y, pair.y);
  const Complex pxy = detail::potential_ext_unchecked(params, pair.x, pair.y);
  const Complex pyx = detail::potential_ext_unchecked(params, pair.y, pair.x);
  const Complex d = pxx + pyy - pxy - pyx;
  const double scale = std::max({1.0, std::abs(pxx), std::abs(pyy), std::abs(pxy)});
  if (std::abs(d.imag()) > 1e-12 * scale)
    throw NumericalDegeneracyError("diastasis has imaginary residue " + std::to_string(d.imag()));
  return d.real();
}

struct DiastasisSample {
  PointPair pair;
  double diastasis;
};

/// Condition (A) on sampled pairs: exp(-D) <= 1, with equality only on the diagonal.
/// When `samples` is non-null it receives every sampled pair in sample order.
inline CheckReport exp_minus_diastasis_report(const CartanHartogsParams& params, const SamplerConfig& config,
                                              std::vector<DiastasisSample>* samples = nullptr) {
  if (config.n_samples < 1) throw ParameterError("at least one sample pair is required");
  constexpr double tolerance = 1e-12;
  constexpr double separation = 0.01;

  struct BlockStats {
    std::size_t violations = 0;
    std::size_t separated = 0;
    double max_offdiag = 0.0;
    double max_separated = 0.0;
    double min_d_separated = std::numeric_limits<double>::infinity();
    double max_diag_error = 0.0;
  };
  const std::size_t n_blocks = (config.n_samples + kSampleBlock - 1) / kSampleBlock;
  std::vector<BlockStats> stats(n_blocks);
  std::vector<std::vector<DiastasisSample>> kept(samples != nullptr ? n_blocks : 0);
  run_blocks(n_blocks, config.shards, [&](std::size_t b) {
    auto eng = block_engine(config.seed, /*stream=*/1, b);
    AcceptanceCounter counter;
    BlockStats& s = stats[b];
    const std::size_t end = std::min(config.n_samples, (b + 1) * kSampleBlock);
    for (std::size_t i = b * kSampleBlock; i < end; ++i) {
      const PointPair pair{sample_for_check(params, config, eng, counter),
                           sample_for_check(params, config, eng, counter)};
      const double dist = diastasis(params, pair);
      const double e = std::exp(-dist);
      if (samples != nullptr) kept[b].push_back({pair, dist});
      if (e > 1.0 + tolerance) ++s.violations;
      s.max_offdiag = std::max(s.max_offdiag, e);
      if (detail::to_flat_distance(pair.x, pair.y) > separation) {
        ++s.separated;
        s.max_separated = std::max(s.max_separated, e);
        s.min_d_separated = std::min(s.min_d_separated, -std::log(e));
      }
      if (i % 64 == 0) {
        const double e_diag = std::exp(-diastasis(params, {pair.x, pair.x}));
        s.max_diag_error = std::max(s.max_diag_error, std::abs(e_diag - 1.0));
      }
    }
  });

  if (samples != nullptr) {
    samples->clear();
    for (auto& block : kept) samples->insert(samples->end(), block.begin(), block.end());
  }
  BlockStats total;
  for (const auto& s : stats) {
    total.violations += s.violations;
    total.separated += s.separated;
    total.max_offdiag = std::max(total.max_offdiag, s.max_offdiag);
    total.max_separated = std::max(total.max_separated, s.max_separated);
    total.min_d_separated = std::min(total.min_d_separated, s.min_d_separated);
    total.max_diag_error = std::max(total.max_diag_error, s.max_diag_error);
  }
  CheckReport r;
  r.suite = "condition_a";
  r.params = {{"domain", to_string(params.base.dtype)}, {"mu", params.mu}};
  r.statistic = total.max_offdiag;
  r.bound = 1.0 + tolerance;
  r.n_samples = config.n_samples;
  r.seed = config.seed;
  r.details = {{"violations", total.violations},
               {"separated_pairs", total.separated},
               {"max_exp_minus_d_separated", total.max_separated},
               {"min_d_separated", total.separated ? total.min_d_separated : 0.0},
               {"max_diagonal_error", total.max_diag_error},
               {"stress_fraction", config.stress_fraction}};
  settle(r, {{"separated_pairs_strict", total.separated == 0 || total.max_separated < 1.0},
             {"diagonal_exact", total.max_diag_error <= tolerance}});
  return r;
}

/// Hermitian metric g_{i conj j} = d^2 Phi / dzeta_i d(conj zeta_j) in the d+1
/// coordinates (z_1, ..., z_d, w), differentiating the sesquianalytic extension.
inline Eigen::MatrixXcd metric_tensor(const CartanHartogsParams& params, const HartogsPoint& p, double step = 1e-3) {
  if (!hartogs_contains(params, p)) throw ParameterError("metric requires an interior point");
  if (boundary_defect(params, p) <= 4.0 * step || domain_norm(params.base, p.z) >= 1.0 - 4.0 * step)
    throw NumericalDegeneracyError("point too close to the boundary for finite-difference step " + std::to_string(step));
  const int n = params.d() + 1;
  const Eigen::VectorXcd flat = to_flat(p);
  auto phi = [&](const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    return detail::potential_ext_unchecked(params, from_flat(a), from_flat(b));
  };
  Eigen::MatrixXcd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = mixed_partial(phi, flat, flat, i, j, step, 1);
  const Eigen::MatrixXcd herm = 0.5 * (g + g.adjoint());
  Eigen::LLT<Eigen::MatrixXcd> llt(herm);
  if (llt.info() != Eigen::Success)
    throw NumericalDegeneracyError("finite-difference metric is not positive definite");
  return g;
}

inline double hermitian_asymmetry(const Eigen::MatrixXcd& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

/// log det of the Hermitian part of a positive-definite matrix.
inline double log_det_hermitian(const Eigen::MatrixXcd& m) {
  Eigen::LLT<Eigen::MatrixXcd> llt(0.5 * (m + m.adjoint()));
  if (llt.info() != Eigen::Success) throw NumericalDegeneracyError("matrix is not positive definite");
  double s = 0.0;
  for (int i = 0; i < m.rows(); ++i) s += 2.0 * std::log(llt.matrixL()(i, i).real());
  return s;
}

/// s(p) = log det g(p) - [(mu(d+1) - genus) log N(z, conj z) - (d+2) log(N^mu - |w|^2)].
inline double det_identity_log_constant(const CartanHartogsParams& params, const HartogsPoint& p, double step = 1e-3) {
  const double logdet = log_det_hermitian(metric_tensor(params, p, step));
  const double log_n = log_generic_norm(params.base, p.z, p.z).real();
  const double defect = boundary_defect(params, p);
  const int d = params.d();
  return logdet - (params.einstein_defect() * log_n - (d + 2) * std::log(defect));
}

/// The determinant identity det g = c N^{mu(d+1)-genus} (N^mu - |w|^2)^{-(d+2)}:
/// spread of log c over the given points and the fitted constant.
inline CheckReport det_identity_residual(const CartanHartogsParams& params, const std::vector<HartogsPoint>& points,
                                         double step = 1e-3) {
  if (points.size() < 3) throw ParameterError("determinant identity needs at least three points");
  std::vector<double> s;
  s.reserve(points.size());
  for (const auto& p : points) s.push_back(det_identity_log_constant(params, p, step));
  const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
  double mean = 0.0;
  for (double v : s) mean += v;
  mean /= static_cast<double>(s.size());
  const double c = std::exp(mean);
  const double c_origin = std::exp(det_identity_log_constant(params, HartogsPoint::origin(params.d()), step));
  constexpr double tolerance = 1e-5;

  CheckReport r;
  r.suite = "det_identity";
  r.params = {{"domain", to_string(params.base.dtype)}, {"mu", params.mu}, {"step", step}};
  r.statistic = *hi - *lo;
  r.bound = tolerance;
  r.n_samples = points.size();
  const double c_error = std::abs(c - c_origin) / c_origin;
  r.details = {{"c", c}, {"c_origin", c_origin}, {"c_relative_error", c_error}, {"log_c", s}};
  settle(r, {{"c_matches_origin", c_error < tolerance}});
  return r;
}

struct Curvature {
  Eigen::MatrixXcd ricci;
  double scalar = 0.0;
};

/// Ricci form Ric_{i conj j} = -d_i dbar_j log det g and the scalar curvature
/// g^{i conj j} Ric_{i conj j}.
///
/// log det g is differentiated directly: g(x, conj y) is itself sesquianalytic,
/// so the outer mixed difference runs on log det g(x, conj y) with step 20*step
/// and two Richardson levels, the inner one on Phi with `step`.
inline Curvature curvature(const CartanHartogsParams& params, const HartogsPoint& p, double step = 1e-3) {
  const Eigen::MatrixXcd g = metric_tensor(params, p, step);
  const int n = params.d() + 1;
  const double outer = 20.0 * step;
  if (boundary_defect(params, p) <= 4.0 * outer || domain_norm(params.base, p.z) >= 1.0 - 4.0 * outer)
    throw NumericalDegeneracyError("point too close to the boundary for the curvature stencil");

  auto phi = [&](const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    return detail::potential_ext_unchecked(params, from_flat(a), from_flat(b));
  };
  auto log_det_g = [&](const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    Eigen::MatrixXcd m(n, n);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) m(k, l) = mixed_partial(phi, a, b, k, l, step, 1);
    return std::log(m.determinant());
  };
  const Eigen::VectorXcd flat = to_flat(p);
  Curvature c;
  c.ricci.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) c.ricci(i, j) = -mixed_partial(log_det_g, flat, flat, i, j, outer, 2);

  const Eigen::MatrixXcd herm = 0.5 * (g + g.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
  const double cond = es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
  if (!(cond < 1e12)) throw NumericalDegeneracyError("metric is ill-conditioned");
  c.scalar = (herm.inverse() * c.ricci).trace().real();
  return c;
}

/// Ricci form from the determinant identity:
/// Ric = -(mu(d+1) - genus) ddbar log N - (d+2) g.
inline Eigen::MatrixXcd ricci_from_det_identity(const CartanHartogsParams& params, const HartogsPoint& p,
                                                double step = 1e-3) {
  const Eigen::MatrixXcd g = metric_tensor(params, p, step);
  const int d = params.d();
  auto log_n = [&](const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    return log_generic_norm(params.base, a, b);
  };
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(d + 1, d + 1);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) h(i, j) = mixed_partial(log_n, p.z, p.z, i, j, step, 1);
  return -params.einstein_defect() * h - (d + 2.0) * g;
}

}  // namespace hartogs
