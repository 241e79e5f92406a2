#pragma once

#include "nlcauchy/hermite_fejer.hpp"
#include "nlcauchy/state.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace nlcauchy {

struct Rule1D {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// m-point Gauss-Legendre rule on [-1,1], exact for polynomials of degree
/// 2m-1. Roots of P_m by Newton from the Chebyshev-based initial guess;
/// weights 2/((1-x^2) P_m'(x)^2). Built symmetric by mirroring.
inline Rule1D gauss_legendre_rule(int m) {
  if (m < 1) throw std::domain_error("gauss_legendre_rule: need m >= 1");
  Rule1D r;
  r.nodes.resize(m);
  r.weights.resize(m);
  for (int k = 0; k < (m + 1) / 2; ++k) {
    double x = std::cos(std::numbers::pi * (k + 0.75) / (m + 0.5));
    double deriv = 1.0;
    for (int pass = 0; pass < 100; ++pass) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= m; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      deriv = m * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / deriv;
      x -= step;
      if (std::abs(step) < 1e-15) break;
    }
    if (2 * k + 1 == m) x = 0.0;
    // One clean derivative evaluation at the settled root for the weight.
    {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= m; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      deriv = m == 1 ? 1.0 : m * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * deriv * deriv);
    r.nodes[k] = -x;
    r.nodes[m - 1 - k] = x;
    r.weights[k] = w;
    r.weights[m - 1 - k] = w;
  }
  return r;
}

/// Interpolatory (Clenshaw-Curtis) weights for the n+1 CGL nodes, exact for
/// polynomials of degree n. Mirrored so w_j = w_{n-j} exactly.
inline Eigen::VectorXd clenshaw_curtis_weights(int n) {
  if (n < 1) throw std::domain_error("clenshaw_curtis_weights: need n >= 1");
  Eigen::VectorXd w(n + 1);
  for (int j = 0; j <= n / 2; ++j) {
    double acc = 1.0;
    for (int k = 1; k <= n / 2; ++k) {
      const double b = (2 * k == n) ? 1.0 : 2.0;
      acc -= b / (4.0 * k * k - 1.0) * std::cos(2.0 * k * j * std::numbers::pi / n);
    }
    const double cj = (j == 0 || j == n) ? 1.0 : 2.0;
    w[j] = cj / n * acc;
    w[n - j] = w[j];
  }
  return w;
}

/// Gauss-Legendre integral over [-1,1] of a pointwise map of the
/// interpolant, sum_q w_q f(K(s_q)). With f the pointwise square and
/// m >= 2n+1 the rule is exact for the integrand polynomial itself.
inline StateVector integrate_interpolant_functional(
    const Interpolant& ip, const std::function<StateVector(const StateVector&)>& f, int m) {
  const Rule1D rule = gauss_legendre_rule(m);
  StateVector acc{ComplexVector::Zero(ip.values.at(0).dim()), ip.values[0].tag};
  for (int q = 0; q < m; ++q) {
    const StateVector fv = f(ip.eval(rule.nodes[q]));
    acc.coords += rule.weights[q] * fv.coords;
  }
  return acc;
}

}  // namespace nlcauchy
