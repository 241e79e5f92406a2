#pragma once

#include "nlcauchy/cgl.hpp"
#include "nlcauchy/state.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace nlcauchy {

namespace detail {

/// Chebyshev polynomial of the second kind by forward recurrence; stable on
/// [-1,1] where the values stay O(m).
inline double chebyshev_u(int m, double t) {
  if (m == 0) return 1.0;
  double prev = 1.0, cur = 2.0 * t;
  for (int k = 2; k <= m; ++k) {
    const double next = 2.0 * t * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace detail

/// Cardinal basis B_i of degree 2n-1 on the CGL grid: B_i(t_j) = delta_ij at
/// every node and B_i'(t_j) = 0 at the interior nodes. Each B_i is evaluated
/// in product form from those defining conditions,
///
///   B_i(t) = phi_i(t)/phi_i(t_i) * (1 - (t - t_i) Dt_i)   (interior i),
///
/// with phi_i collecting the forced zeros (double at other interior nodes,
/// simple at the endpoints) and Dt_i = phi_i'(t_i)/phi_i(t_i) chosen so the
/// derivative vanishes at t_i itself; endpoint basis functions need no
/// linear factor. Node values and node zeros come out exact because the
/// zero factors are evaluated directly. Construction cross-checks the
/// product form against the independent closed form through the
/// second-kind Chebyshev polynomial and refuses to build on disagreement.
class HermiteFejerBasis {
 public:
  explicit HermiteFejerBasis(CglGrid grid) : grid_(std::move(grid)) {
    const int n = grid_.n;
    dtilde_ = Eigen::VectorXd::Zero(n + 1);
    for (int i = 1; i < n; ++i) {
      double s = 1.0 / (grid_[i] + 1.0) + 1.0 / (grid_[i] - 1.0);
      for (int k = 1; k < n; ++k)
        if (k != i) s += 2.0 / (grid_[i] - grid_[k]);
      dtilde_[i] = s;
    }
    validate_closed_form();
  }

  const CglGrid& grid() const { return grid_; }
  int n() const { return grid_.n; }

  double eval(int i, double t) const {
    const auto& ts = grid_.nodes;
    const int n = grid_.n;
    if (i == 0) {
      double r = (t - 1.0) / (ts[0] - 1.0);
      for (int k = 1; k < n; ++k) {
        const double f = (t - ts[k]) / (ts[0] - ts[k]);
        r *= f * f;
      }
      return r;
    }
    if (i == n) {
      double r = (t + 1.0) / (ts[n] + 1.0);
      for (int k = 1; k < n; ++k) {
        const double f = (t - ts[k]) / (ts[n] - ts[k]);
        r *= f * f;
      }
      return r;
    }
    double r = ((t + 1.0) * (t - 1.0)) / ((ts[i] + 1.0) * (ts[i] - 1.0));
    for (int k = 1; k < n; ++k) {
      if (k == i) continue;
      const double f = (t - ts[k]) / (ts[i] - ts[k]);
      r *= f * f;
    }
    return r * (1.0 - (t - ts[i]) * dtilde_[i]);
  }

  Eigen::VectorXd eval_all(double t) const {
    Eigen::VectorXd out(grid_.n + 1);
    for (int i = 0; i <= grid_.n; ++i) out[i] = eval(i, t);
    return out;
  }

  /// Closed form of B_i through U_{n-1}; exact wherever t is not a node.
  /// Kept public as the cross-check and for diagnostics.
  double eval_closed_form(int i, double t) const {
    const int n = grid_.n;
    const double u = detail::chebyshev_u(n - 1, t);
    const double n2 = static_cast<double>(n) * n;
    if (i == 0) return (1.0 - t) * u * u / (2.0 * n2);
    if (i == n) return (1.0 + t) * u * u / (2.0 * n2);
    const double dt = t - grid_[i];
    return (1.0 - t * t) * (1.0 - t * grid_[i]) * u * u / (n2 * dt * dt);
  }

 private:
  void validate_closed_form() const {
    const int n = grid_.n;
    // Gap midpoints keep the samples far from every node (and from the
    // zeros of U_{n-1}, which the interior closed form divides through).
    std::vector<double> samples;
    const int stride = n <= 17 ? 1 : n / 17 + 1;
    for (int j = 0; j < n; j += stride) samples.push_back(0.5 * (grid_[j] + grid_[j + 1]));
    for (double t : samples) {
      for (int i = 0; i <= n; ++i) {
        const double a = eval(i, t);
        const double b = eval_closed_form(i, t);
        if (std::abs(a - b) > 1e-8 * std::max(1.0, std::abs(b)))
          throw std::logic_error("cardinal basis disagrees with its closed form");
      }
    }
  }

  CglGrid grid_;
  Eigen::VectorXd dtilde_;
};

inline double hf_basis_eval(const HermiteFejerBasis& basis, int i, double t) {
  return basis.eval(i, t);
}

/// Vector-valued interpolant K(t) = sum_i B_i(t) y_i with y_i the solution
/// snapshots at the CGL nodes.
struct Interpolant {
  const HermiteFejerBasis* basis = nullptr;
  std::vector<StateVector> values;

  StateVector eval(double t) const {
    if (!basis || values.size() != static_cast<std::size_t>(basis->n() + 1))
      throw std::invalid_argument("interpolant: values must match the basis grid");
    const Eigen::VectorXd b = basis->eval_all(t);
    ComplexVector acc = ComplexVector::Zero(values[0].dim());
    for (int i = 0; i < b.size(); ++i) acc += b[i] * values[static_cast<std::size_t>(i)].coords;
    return {std::move(acc), values[0].tag};
  }
};

inline StateVector interp_eval(const Interpolant& ip, double t) { return ip.eval(t); }

}  // namespace nlcauchy
