#pragma once

#include "nlcauchy/hermite_fejer.hpp"
#include "nlcauchy/quadrature_rules.hpp"
#include "nlcauchy/state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace nlcauchy {

/// Sine-mode coordinates of the pointwise square of a sine series,
/// projected back onto the first K modes. The square of sum c_k sin(k pi x)
/// is a cosine series with coefficients A_m assembled by product-to-sum,
/// and each cosine mode projects exactly onto sine mode j through
/// integral cos(m pi x) sin(j pi x) = 2j/(pi (j^2 - m^2)) for odd j+m.
/// Exact up to rounding, so no oversampling grid enters the error budget.
inline ComplexVector sine_square_project(const ComplexVector& c) {
  const int K = static_cast<int>(c.size());
  std::vector<Complex> A(static_cast<std::size_t>(2 * K + 1), Complex(0.0));
  for (int k = 1; k <= K; ++k) A[0] += 0.5 * c[k - 1] * c[k - 1];
  for (int m = 1; m <= 2 * K; ++m) {
    Complex src = 0.0;
    for (int k = m + 1; k <= K; ++k) src += c[k - 1] * c[k - m - 1];
    Complex sum = 0.0;
    for (int k = std::max(1, m - K); k <= std::min(K, m - 1); ++k) sum += c[k - 1] * c[m - k - 1];
    A[static_cast<std::size_t>(m)] = src - 0.5 * sum;
  }
  ComplexVector b(K);
  for (int j = 1; j <= K; ++j) {
    Complex acc = 0.0;
    for (int m = (j % 2 == 0) ? 1 : 0; m <= 2 * K; m += 2)
      acc += A[static_cast<std::size_t>(m)] / static_cast<double>((j - m) * (j + m));
    b[j - 1] = 4.0 * j / std::numbers::pi * acc;
  }
  return b;
}

/// Pointwise square of the function a StateVector represents. Nodal and
/// abstract coordinates square entrywise; sine modes go through the exact
/// mode-space projection.
inline StateVector pointwise_square(const StateVector& v) {
  if (v.tag == BasisTag::SineMode) return {sine_square_project(v.coords), v.tag};
  return {v.coords.array().square().matrix(), v.tag};
}

/// Nonlocal condition term g acting on the whole trajectory through its
/// collocation interpolant.
class NonlocalFunctional {
 public:
  virtual ~NonlocalFunctional() = default;
  virtual const char* kind() const = 0;
  virtual StateVector apply(const Interpolant& ip) const = 0;
  virtual std::optional<double> lipschitz_hint() const { return std::nullopt; }
};

class ZeroFunctional : public NonlocalFunctional {
 public:
  const char* kind() const override { return "zero"; }
  StateVector apply(const Interpolant& ip) const override {
    return {ComplexVector::Zero(ip.values.at(0).dim()), ip.values[0].tag};
  }
  std::optional<double> lipschitz_hint() const override { return 0.0; }
};

/// g(u) = sum_k c_k u(s_k), fixed sample points in [-1,1].
class MultipointFunctional : public NonlocalFunctional {
 public:
  MultipointFunctional(std::vector<double> points, std::vector<double> coeffs)
      : points_(std::move(points)), coeffs_(std::move(coeffs)) {
    if (points_.size() != coeffs_.size() || points_.empty())
      throw std::invalid_argument("multipoint: need matching nonempty points/coeffs");
    for (double s : points_)
      if (!(s >= -1.0) || !(s <= 1.0))
        throw std::invalid_argument("multipoint: sample points must lie in [-1,1]");
  }

  const char* kind() const override { return "multipoint"; }

  StateVector apply(const Interpolant& ip) const override {
    StateVector acc{ComplexVector::Zero(ip.values.at(0).dim()), ip.values[0].tag};
    for (std::size_t k = 0; k < points_.size(); ++k)
      acc.coords += coeffs_[k] * ip.eval(points_[k]).coords;
    return acc;
  }

  const std::vector<double>& points() const { return points_; }
  const std::vector<double>& coeffs() const { return coeffs_; }

 private:
  std::vector<double> points_;
  std::vector<double> coeffs_;
};

/// Which time rule evaluates the integral in g(u) = mu * integral of u^2.
///
/// CglNodes integrates the squared trajectory snapshots with the
/// interpolatory weights of the collocation grid itself, so only nodal
/// values enter and the interpolant's off-node wiggle stays out of g; its
/// error decays super-geometrically in n for analytic trajectories.
/// InterpolantGl integrates the square of the interpolant exactly
/// (Gauss-Legendre with enough points), which sounds sharper but inherits
/// the O(1/n)-level interpolation error of the zero-derivative basis and
/// saturates orders of magnitude earlier. CglNodes is the default.
enum class TimeRule { CglNodes, InterpolantGl };

class QuadraticIntegralFunctional : public NonlocalFunctional {
 public:
  explicit QuadraticIntegralFunctional(double mu, TimeRule rule = TimeRule::CglNodes,
                                       int gl_points = 0)
      : mu_(mu), rule_(rule), gl_points_(gl_points) {}

  const char* kind() const override { return "quadratic"; }
  double mu() const { return mu_; }
  TimeRule rule() const { return rule_; }

  StateVector apply(const Interpolant& ip) const override {
    if (rule_ == TimeRule::CglNodes) {
      const Eigen::VectorXd w = clenshaw_curtis_weights(ip.basis->n());
      StateVector acc{ComplexVector::Zero(ip.values.at(0).dim()), ip.values[0].tag};
      for (int j = 0; j < w.size(); ++j)
        acc.coords += w[j] * pointwise_square(ip.values[static_cast<std::size_t>(j)]).coords;
      acc.coords *= mu_;
      return acc;
    }
    const int m = gl_points_ > 0 ? gl_points_ : 2 * ip.basis->n() + 1;
    StateVector acc = integrate_interpolant_functional(ip, &pointwise_square, m);
    acc.coords *= mu_;
    return acc;
  }

 private:
  double mu_;
  TimeRule rule_;
  int gl_points_;
};

}  // namespace nlcauchy
