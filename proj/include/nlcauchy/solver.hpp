#pragma once

#include "nlcauchy/backends.hpp"
#include "nlcauchy/cgl.hpp"
#include "nlcauchy/contour.hpp"
#include "nlcauchy/expm.hpp"
#include "nlcauchy/functionals.hpp"
#include "nlcauchy/hermite_fejer.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nlcauchy {

/// Sup norm of the function a StateVector represents: sine modes are summed
/// at the m+1 scaled CGL points x_l = (1 - cos(pi l / m))/2, nodal and
/// abstract coordinates take the coordinate max directly.
inline double state_sup_norm(const StateVector& v, const OperatorBackend& backend,
                             int eval_m = 64) {
  if (v.tag == BasisTag::SineMode && backend.can_eval_at()) {
    const CglGrid g = cgl_nodes(eval_m);
    double mx = 0.0;
    for (int l = 0; l <= eval_m; ++l)
      mx = std::max(mx, std::abs(backend.eval_at(v, 0.5 * (1.0 + g[l]))));
    return mx;
  }
  return v.max_abs();
}

/// Trajectory norm: max over components of the sup norm of each component.
inline double vec_norm(std::span<const StateVector> ys, const OperatorBackend& backend,
                       int eval_m = 64) {
  if (ys.empty()) throw std::invalid_argument("vec_norm: empty trajectory");
  double mx = 0.0;
  for (const StateVector& v : ys) mx = std::max(mx, state_sup_norm(v, backend, eval_m));
  return mx;
}

/// Coordinate-only flavor for representation-agnostic checks.
inline double vec_norm(std::span<const StateVector> ys) {
  if (ys.empty()) throw std::invalid_argument("vec_norm: empty trajectory");
  double mx = 0.0;
  for (const StateVector& v : ys) mx = std::max(mx, v.max_abs());
  return mx;
}

struct NonlocalProblem {
  const OperatorBackend* backend = nullptr;
  const NonlocalFunctional* g = nullptr;
  StateVector u0;
  double alpha = 1.0;
  double d = 0.0;  // <= 0 selects strip_width_default(spectral, margin)
  double margin = 0.05;
  int N = 32;
  int n = 8;
  std::optional<SpectralParams> spectral;  // override of backend-reported sector data

  void validate() const {
    if (!backend || !g) throw std::invalid_argument("problem: backend and functional required");
    if (!(alpha > 0.0)) throw std::invalid_argument("problem: alpha must be positive");
    if (N < 1 || n < 1) throw std::invalid_argument("problem: N and n must be >= 1");
    if (!u0.is_finite()) throw std::invalid_argument("problem: u0 must be finite");
    if (u0.tag != backend->basis() || u0.dim() != backend->dim())
      throw dimension_mismatch("problem: u0 does not match the backend");
  }

  SpectralParams effective_spectral() const {
    return spectral ? *spectral : backend->spectral_params();
  }
  double effective_d() const {
    return d > 0.0 ? d : strip_width_default(effective_spectral(), margin);
  }
};

enum class StopReason { Tolerance, Stagnation, MaxIter, Divergence };

inline const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::Tolerance: return "tolerance";
    case StopReason::Stagnation: return "stagnation";
    case StopReason::MaxIter: return "max_iter";
    case StopReason::Divergence: return "divergence";
  }
  return "unknown";
}

struct IterationReport {
  int iterations = 0;              // fixed-point updates performed
  std::vector<double> residuals;   // residuals[k-1] = |||y^(k) - y^(k-1)|||
  std::vector<double> iterate_norms;
  std::vector<double> q_emp;       // consecutive residual ratios
  bool converged = false;
  StopReason stop_reason = StopReason::MaxIter;
  long long resolve_count = 0;     // resolvent applications spent by the solve

  /// Smallest k whose residual is below rel * |||y^(k)|||; the iteration
  /// count needed for a given relative accuracy, as opposed to the count
  /// spent reaching the stop tolerance.
  int iterations_to_relative(double rel) const {
    for (std::size_t k = 0; k < residuals.size(); ++k)
      if (residuals[k] <= rel * std::max(iterate_norms[k], 1e-300)) return static_cast<int>(k + 1);
    return iterations;
  }
};

struct DiscreteSolution {
  CglGrid grid;
  std::vector<StateVector> y;
  IterationReport report;
};

struct divergence_error : std::runtime_error {
  DiscreteSolution partial;
  divergence_error(const std::string& msg, DiscreteSolution sol)
      : std::runtime_error(msg), partial(std::move(sol)) {}
};

/// p_i = T_N(A, t_i) u0 over the collocation grid; one slab fill, 2N+1
/// resolvent applications regardless of n.
inline std::vector<StateVector> assemble_p(ExpmEvaluator& ev, const CglGrid& grid,
                                           const StateVector& u0) {
  return ev.apply_many(std::span<const double>(grid.nodes.data(),
                                               static_cast<std::size_t>(grid.point_count())),
                       u0, "u0");
}

/// Components T_N(A, t_i) g(K(., y)): the functional image is computed once
/// and propagated to every node off a single slab fill.
inline std::vector<StateVector> apply_G(ExpmEvaluator& ev, const NonlocalFunctional& g,
                                        const HermiteFejerBasis& basis,
                                        const std::vector<StateVector>& y) {
  const StateVector w = g.apply(Interpolant{&basis, y});
  const CglGrid& grid = basis.grid();
  return ev.apply_many(std::span<const double>(grid.nodes.data(),
                                               static_cast<std::size_t>(grid.point_count())),
                       w, "g");
}

struct SolveOptions {
  double tol = 1e-14;
  int max_iter = 50;
  int workers = 0;  // 0 selects default_workers()
  int eval_m = 64;  // norm evaluation grid for sine-mode vectors
};

/// Fixed-point iteration y^(0) = p, y^(k) = G(y^(k-1)) + p on the collocated
/// system. Stops on residual < tol, on stagnation (residual decreased less
/// than 1% over 3 iterations, the double-precision substitute for a tighter
/// tolerance), or at max_iter. Residual growth beyond 10x over 3 iterations,
/// or a non-finite iterate, throws divergence_error carrying the partial
/// solution and report.
inline DiscreteSolution fixed_point_solve(const NonlocalProblem& problem,
                                          const SolveOptions& options = {}) {
  problem.validate();
  if (!(options.tol > 0.0) || options.max_iter < 1)
    throw std::invalid_argument("solve: tol must be positive, max_iter >= 1");

  const OperatorBackend& backend = *problem.backend;
  const long long resolves_before = backend.resolve_count();

  const SpectralParams sp = problem.effective_spectral();
  const HyperbolaContour contour = sector_to_contour(sp, problem.effective_d());
  ExpmEvaluator ev(backend, make_sinc_quadrature(contour, problem.alpha, problem.N),
                   options.workers > 0 ? options.workers : default_workers());

  DiscreteSolution sol;
  sol.grid = cgl_nodes(problem.n);
  const HermiteFejerBasis basis(sol.grid);

  const std::vector<StateVector> p = assemble_p(ev, sol.grid, problem.u0);
  sol.y = p;
  IterationReport& rep = sol.report;

  auto finish = [&](bool converged, StopReason reason) {
    rep.converged = converged;
    rep.stop_reason = reason;
    rep.resolve_count = backend.resolve_count() - resolves_before;
  };

  for (int k = 1; k <= options.max_iter; ++k) {
    const std::vector<StateVector> gy = apply_G(ev, *problem.g, basis, sol.y);
    std::vector<StateVector> next(sol.y.size());
    std::vector<StateVector> diff(sol.y.size());
    for (std::size_t i = 0; i < sol.y.size(); ++i) {
      next[i] = gy[i] + p[i];
      diff[i] = next[i] - sol.y[i];
    }
    const double r = vec_norm(diff, backend, options.eval_m);
    rep.iterations = k;
    rep.residuals.push_back(r);
    rep.iterate_norms.push_back(vec_norm(next, backend, options.eval_m));
    if (rep.residuals.size() >= 2) rep.q_emp.push_back(r / rep.residuals[rep.residuals.size() - 2]);
    sol.y = std::move(next);

    bool finite = std::isfinite(r);
    for (const StateVector& v : sol.y)
      if (!v.is_finite()) finite = false;
    if (!finite) {
      finish(false, StopReason::Divergence);
      throw divergence_error("fixed-point iterate became non-finite", std::move(sol));
    }
    if (r < options.tol) {
      finish(true, StopReason::Tolerance);
      return sol;
    }
    if (rep.residuals.size() >= 4) {
      const double r3 = rep.residuals[rep.residuals.size() - 4];
      if (r > 10.0 * r3) {
        finish(false, StopReason::Divergence);
        throw divergence_error("fixed-point residuals grew beyond 10x over 3 iterations",
                               std::move(sol));
      }
      if ((r3 - r) / r3 < 0.01) {
        finish(true, StopReason::Stagnation);
        return sol;
      }
    }
  }
  finish(false, StopReason::MaxIter);
  return sol;
}

struct ContractionSummary {
  double q_emp_final = 0.0;
  std::optional<double> q_a_priori;  // 3 L c / alpha when L, c supplied
};

inline ContractionSummary contraction_report(const IterationReport& rep,
                                             std::optional<double> lipschitz = {},
                                             std::optional<double> c = {}, double alpha = 1.0) {
  if (rep.residuals.empty())
    throw std::invalid_argument("contraction_report: no residuals recorded");
  ContractionSummary s;
  s.q_emp_final = rep.q_emp.empty() ? 0.0 : rep.q_emp.back();
  if (lipschitz && c) s.q_a_priori = 3.0 * (*lipschitz) * (*c) / alpha;
  return s;
}

/// A-priori error of the k-th iterate under contraction q, given the norm
/// of the first correction term.
inline double iteration_error_bound(double norm_g_p, double q, int k) {
  return norm_g_p * std::pow(q, k + 1) / (1.0 - q);
}

/// Max over collocation times t_j and scaled CGL points x_l of
/// |exact(t_j, x_l) - y_j(x_l)|; requires a pointwise-evaluable backend.
inline double err_metric(const DiscreteSolution& sol,
                         const std::function<double(double, double)>& exact,
                         const OperatorBackend& backend, int m) {
  if (!backend.can_eval_at())
    throw capability_missing("err_metric needs a pointwise-evaluable backend");
  const CglGrid xg = cgl_nodes(m);
  double mx = 0.0;
  for (int j = 0; j < sol.grid.point_count(); ++j) {
    const double t = sol.grid[j];
    for (int l = 0; l <= m; ++l) {
      const double x = 0.5 * (1.0 + xg[l]);
      mx = std::max(mx,
                    std::abs(Complex(exact(t, x), 0.0) -
                             backend.eval_at(sol.y[static_cast<std::size_t>(j)], x)));
    }
  }
  return mx;
}

}  // namespace nlcauchy
