#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "nlcauchy/cgl.hpp"
#include "nlcauchy/diagnostics.hpp"
#include "nlcauchy/hermite_fejer.hpp"
#include "nlcauchy/quadrature_rules.hpp"

#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace nlcauchy;

namespace {
constexpr double kPi = std::numbers::pi;

std::vector<double> dense_samples(int count) {
  std::vector<double> ts(count);
  for (int k = 0; k < count; ++k) ts[k] = -1.0 + 2.0 * k / (count - 1);
  return ts;
}
}  // namespace

TEST_CASE("collocation grid is the ascending Chebyshev-Lobatto family") {
  CHECK_THROWS_AS((void)cgl_nodes(0), std::domain_error);

  const CglGrid g1 = cgl_nodes(1);
  CHECK(g1.point_count() == 2);
  CHECK(g1[0] == -1.0);
  CHECK(g1[1] == 1.0);

  for (int n : {2, 5, 8, 33}) {
    const CglGrid g = cgl_nodes(n);
    CHECK(g.point_count() == n + 1);
    CHECK(g[0] == -1.0);
    CHECK(g[n] == 1.0);
    for (int j = 0; j <= n; ++j) {
      CHECK(g[j] == doctest::Approx(-std::cos(kPi * j / n)).epsilon(1e-15));
      CHECK(g[j] == -g.nodes[n - j]);  // mirrored construction, exact
      if (j > 0) CHECK(g[j] > g[j - 1]);
    }
    if (n % 2 == 0) CHECK(g[n / 2] == 0.0);
  }
}

TEST_CASE("basis functions are exactly cardinal on the grid") {
  for (int n : {2, 4, 8, 16, 64}) {
    const HermiteFejerBasis basis(cgl_nodes(n));
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j)
        CHECK(basis.eval(i, basis.grid()[j]) == (i == j ? 1.0 : 0.0));
  }
}

TEST_CASE("basis functions are nonnegative and sum to one everywhere") {
  const std::vector<double> ts = dense_samples(1001);
  for (int n : {2, 4, 8, 16, 32, 64}) {
    const HermiteFejerBasis basis(cgl_nodes(n));
    double worst_pou = 0.0;
    double lebesgue = 0.0;
    for (double t : ts) {
      const Eigen::VectorXd b = basis.eval_all(t);
      worst_pou = std::max(worst_pou, std::abs(b.sum() - 1.0));
      lebesgue = std::max(lebesgue, b.cwiseAbs().sum());
      CHECK(b.minCoeff() > -1e-12);
    }
    CHECK(worst_pou < 1e-12);
    // Nonnegativity pins the absolute sums to the plain sums, so the
    // interpolation stays uniformly stable with constant 1.
    CHECK(lebesgue < 3.0);
    CHECK(lebesgue == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("basis derivative vanishes at the interior nodes") {
  // Independent route: fit each basis function by a dense Chebyshev
  // interpolant of matching degree, differentiate the series, evaluate.
  for (int n : {4, 8, 16}) {
    const HermiteFejerBasis basis(cgl_nodes(n));
    for (int i = 0; i <= n; ++i) {
      const Eigen::VectorXd c =
          oracles::cheb_fit([&](double t) { return basis.eval(i, t); }, 2 * n + 2);
      const Eigen::VectorXd dc = oracles::cheb_diff(c);
      for (int j = 1; j < n; ++j)
        CHECK(std::abs(oracles::cheb_eval(dc, basis.grid()[j])) < 1e-10);
    }
  }
}

TEST_CASE("product form agrees with the second-kind Chebyshev closed form") {
  for (int n : {2, 8, 32}) {
    const HermiteFejerBasis basis(cgl_nodes(n));
    for (double t : {-0.987, -0.33, 0.111, 0.75, 0.999}) {
      for (int i = 0; i <= n; ++i) {
        const double a = basis.eval(i, t);
        const double b = basis.eval_closed_form(i, t);
        CHECK(a == doctest::Approx(b).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("basis matches a dense solve of its defining conditions") {
  for (int n : {2, 3, 4, 5, 6}) {
    const HermiteFejerBasis basis(cgl_nodes(n));
    std::vector<double> nodes(basis.grid().nodes.data(), basis.grid().nodes.data() + n + 1);
    for (int i = 0; i <= n; ++i) {
      const oracles::CardinalByConditions reference(nodes, i);
      for (double t : dense_samples(41))
        CHECK(basis.eval(i, t) == doctest::Approx(reference(t)).epsilon(1e-9));
    }
  }
}

TEST_CASE("construction cross-checks itself and reports the variant mismatch") {
  CHECK_NOTHROW((void)HermiteFejerBasis(cgl_nodes(12)));
  // The alternate printed closed form is not the same polynomial family;
  // the deviation is O(1) and deliberately kept visible.
  const HermiteFejerBasis basis(cgl_nodes(8));
  const double mismatch = hf_variant_interior_mismatch(basis);
  CHECK(mismatch > 1e-3);
  CHECK(mismatch < 10.0);
}

TEST_CASE("interpolant reproduces constants and validates its value count") {
  const HermiteFejerBasis basis(cgl_nodes(6));
  ComplexVector c(2);
  c << Complex(0.7, -0.2), Complex(-1.5, 0.0);
  std::vector<StateVector> vals(7, StateVector{c, BasisTag::SineMode});
  const Interpolant ip{&basis, vals};
  for (double t : {-1.0, -0.42, 0.0, 0.9, 1.0}) {
    const StateVector got = ip.eval(t);
    CHECK(std::abs(got.coords[0] - c[0]) < 1e-13);
    CHECK(std::abs(got.coords[1] - c[1]) < 1e-13);
    CHECK(got.tag == BasisTag::SineMode);
  }

  Interpolant bad{&basis, std::vector<StateVector>(5, StateVector{c, BasisTag::SineMode})};
  CHECK_THROWS_AS((void)bad.eval(0.0), std::invalid_argument);
  Interpolant unbound{nullptr, vals};
  CHECK_THROWS_AS((void)unbound.eval(0.0), std::invalid_argument);
}

TEST_CASE("interpolation damps data like a positive operator") {
  // With a positive partition-of-unity basis the interpolant range is the
  // convex hull of the data, so the sup norm never grows.
  const HermiteFejerBasis basis(cgl_nodes(10));
  std::vector<StateVector> vals;
  for (int j = 0; j <= 10; ++j) {
    ComplexVector v(1);
    v << Complex(std::cos(3.0 * j), 0.0);
    vals.push_back({v, BasisTag::AbstractCoordinate});
  }
  const Interpolant ip{&basis, vals};
  for (double t : dense_samples(201)) CHECK(std::abs(ip.eval(t).coords[0]) <= 1.0 + 1e-12);
}

TEST_CASE("Gauss-Legendre rule matches tabulated nodes and weights") {
  CHECK_THROWS_AS((void)gauss_legendre_rule(0), std::domain_error);

  const Rule1D r1 = gauss_legendre_rule(1);
  CHECK(r1.nodes[0] == 0.0);
  CHECK(r1.weights[0] == doctest::Approx(2.0));

  const Rule1D r2 = gauss_legendre_rule(2);
  CHECK(r2.nodes[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(r2.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(r2.weights[0] == doctest::Approx(1.0).epsilon(1e-14));

  std::vector<double> nodes5, weights5;
  oracles::gl5_reference(nodes5, weights5);
  const Rule1D r5 = gauss_legendre_rule(5);
  for (int k = 0; k < 5; ++k) {
    CHECK(r5.nodes[k] == doctest::Approx(nodes5[k]).epsilon(1e-14));
    CHECK(r5.weights[k] == doctest::Approx(weights5[k]).epsilon(1e-14));
  }
}

TEST_CASE("Gauss-Legendre rule integrates polynomials up to degree 2m-1") {
  for (int m : {3, 6, 11}) {
    const Rule1D r = gauss_legendre_rule(m);
    CHECK(r.weights.sum() == doctest::Approx(2.0).epsilon(1e-14));
    for (int k = 0; k <= 2 * m - 1; ++k) {
      double acc = 0.0;
      for (int q = 0; q < m; ++q) acc += r.weights[q] * std::pow(r.nodes[q], k);
      const double exact = (k % 2 == 1) ? 0.0 : 2.0 / (k + 1);
      CHECK(acc == doctest::Approx(exact).epsilon(1e-13));
    }
  }
}

TEST_CASE("Lobatto-grid weights are symmetric and exact through degree n") {
  CHECK_THROWS_AS((void)clenshaw_curtis_weights(0), std::domain_error);

  const Eigen::VectorXd w2 = clenshaw_curtis_weights(2);
  CHECK(w2[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(w2[1] == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(w2[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  for (int n : {4, 9, 16}) {
    const Eigen::VectorXd w = clenshaw_curtis_weights(n);
    const CglGrid g = cgl_nodes(n);
    CHECK(w.sum() == doctest::Approx(2.0).epsilon(1e-14));
    for (int j = 0; j <= n; ++j) CHECK(w[j] == w[n - j]);
    for (int k = 0; k <= n; ++k) {
      double acc = 0.0;
      for (int j = 0; j <= n; ++j) acc += w[j] * std::pow(g[j], k);
      const double exact = (k % 2 == 1) ? 0.0 : 2.0 / (k + 1);
      CHECK(acc == doctest::Approx(exact).epsilon(1e-13));
    }
  }
}

TEST_CASE("functional quadrature of a constant trajectory is the interval mass") {
  const HermiteFejerBasis basis(cgl_nodes(4));
  ComplexVector c(3);
  c << 0.5, Complex(0.0, 2.0), -1.0;
  const Interpolant ip{&basis, std::vector<StateVector>(5, StateVector{c, BasisTag::SineMode})};
  const StateVector got = integrate_interpolant_functional(
      ip, [](const StateVector& s) { return StateVector{s.coords, s.tag}; }, 9);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(got.coords[i] - 2.0 * c[i]) < 1e-13);
}

TEST_CASE("rate fit recovers a planted sqrt law") {
  std::vector<int> Ns = {8, 16, 32, 64, 128};
  std::vector<double> errs;
  for (int N : Ns) errs.push_back(0.37 * std::exp(-2.0 * std::sqrt(N + 1.0)));
  const DecayFit fit = fit_sqrt_decay(Ns, errs);
  CHECK(fit.rate == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(fit.intercept == doctest::Approx(std::log(0.37)).epsilon(1e-8));
  CHECK(fit.points_used == 5);
}
