#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "nlcauchy/backends.hpp"
#include "nlcauchy/contour.hpp"
#include "nlcauchy/diagnostics.hpp"
#include "nlcauchy/expm.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace nlcauchy;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("hyperbola parameters place the asymptote strip inside the analyticity region") {
  const SpectralParams sp{2.0, 0.3, 1.0};
  const double d = 0.8;
  const HyperbolaContour c = sector_to_contour(sp, d);
  // Shifting the parameter by +- d/2 tilts the asymptotes between the sector
  // angle and pi/2, which pins a_i^2 + b_i^2 = rho0^2 / cos^2(phi0).
  CHECK(c.a_i * c.a_i + c.b_i * c.b_i ==
        doctest::Approx(sp.rho0 * sp.rho0 / (std::cos(sp.phi0) * std::cos(sp.phi0))));
  CHECK(c.a_i == doctest::Approx(sp.rho0 * std::cos(d / 2 + sp.phi0) / std::cos(sp.phi0)));
  CHECK(c.b_i == doctest::Approx(sp.rho0 * std::sin(d / 2 + sp.phi0) / std::cos(sp.phi0)));
  CHECK(c.d == d);

  // The contour vertex sits strictly between 0 and the sector vertex, so the
  // path separates the spectrum from the origin.
  CHECK(c.point(0.0).real() > 0.0);
  CHECK(c.point(0.0).real() < sp.rho0);
}

TEST_CASE("contour points and velocities trace a symmetric hyperbola") {
  const HyperbolaContour c = sector_to_contour({1.0, 0.0, 1.0}, 1.0);
  for (double s : {0.1, 0.7, 2.0}) {
    CHECK(c.point(-s) == std::conj(c.point(s)));
    CHECK(c.velocity(-s) == -std::conj(c.velocity(s)));
    // (x/a)^2 - (y/b)^2 = 1 along the path.
    const Complex z = c.point(s);
    const double lhs = (z.real() / c.a_i) * (z.real() / c.a_i) -
                       (z.imag() / c.b_i) * (z.imag() / c.b_i);
    CHECK(lhs == doctest::Approx(1.0));
  }
}

TEST_CASE("strip widths that leave the resolvent's analyticity region are rejected") {
  const SpectralParams sp{1.0, 0.4, 1.0};
  CHECK_THROWS_AS((void)sector_to_contour(sp, 0.0), invalid_strip);
  CHECK_THROWS_AS((void)sector_to_contour(sp, -1.0), invalid_strip);
  CHECK_THROWS_AS((void)sector_to_contour(sp, 2.0 * (kPi / 2 - sp.phi0) + 0.01), invalid_strip);
  CHECK_NOTHROW((void)sector_to_contour(sp, 2.0 * (kPi / 2 - sp.phi0) - 0.01));
}

TEST_CASE("default strip width backs off the theoretical maximum by the margin") {
  const SpectralParams sp{3.0, 0.2, 1.0};
  CHECK(strip_width_default(sp, 0.05) == doctest::Approx((kPi / 2 - 0.2) * 0.95));
  CHECK(strip_width_default(sp, 0.5) == doctest::Approx((kPi / 2 - 0.2) * 0.5));
}

TEST_CASE("quadrature step balances truncation against strip discretization") {
  CHECK(quadrature_step(1.0, kPi / 2, 4) == doctest::Approx(kPi / std::sqrt(10.0)));
  CHECK(quadrature_step(1.0, kPi / 2, 99) == doctest::Approx(kPi / std::sqrt(200.0)));
  CHECK(quadrature_step(2.0, 1.0, 10) == doctest::Approx(std::sqrt(kPi * 1.0 / (2.0 * 11.0))));
  CHECK_THROWS_AS((void)quadrature_step(0.0, 1.0, 4), std::domain_error);
  CHECK_THROWS_AS((void)quadrature_step(1.0, 0.0, 4), std::domain_error);
  CHECK_THROWS_AS((void)quadrature_step(1.0, 1.0, 0), std::domain_error);
}

TEST_CASE("error bound decays like exp(-sqrt(pi d alpha (N+1)))") {
  const double b16 = sinc_error_bound(1.0, 1.0, 16, 1.0);
  const double b64 = sinc_error_bound(1.0, 1.0, 64, 1.0);
  CHECK(b64 < b16);
  CHECK(b16 == doctest::Approx(std::exp(-std::sqrt(kPi * 17.0))));
  CHECK(sinc_error_bound(1.0, 1.0, 16, 3.0, 2.0) == doctest::Approx(6.0 * b16));
}

TEST_CASE("quadrature nodes come in conjugate pairs around the vertex") {
  const SincQuadrature q =
      make_sinc_quadrature(sector_to_contour({1.0, 0.0, 1.0}, 1.0), 1.0, 6);
  CHECK(q.node_count() == 13);
  CHECK(static_cast<int>(q.nodes.size()) == 13);
  for (int p = 0; p < 6; ++p) {
    CHECK(q.nodes[p].z == std::conj(q.nodes[12 - p].z));
    CHECK(q.nodes[p].dz == -std::conj(q.nodes[12 - p].dz));
  }
  CHECK(q.nodes[6].z.imag() == 0.0);
}

TEST_CASE("operator exponential converges to the scalar closed form") {
  const Complex lambda(kPi * kPi, 0.0);
  ScalarOperator backend(lambda);
  const SpectralParams sp = backend.spectral_params();
  const double d = strip_width_default(sp);
  const StateVector v{ComplexVector::Ones(1), BasisTag::AbstractCoordinate};

  std::vector<int> Ns = {8, 16, 32, 64};
  std::vector<double> errs;
  for (int N : Ns) {
    ExpmEvaluator ev(backend, make_sinc_quadrature(sector_to_contour(sp, d), 1.0, N), 1);
    double worst = 0.0;
    for (double t : {-1.0, -0.5, 0.0, 1.0}) {
      const Complex got = ev.apply(t, v).coords[0];
      const Complex want = std::exp(-lambda * (t + 1.0));
      worst = std::max(worst, std::abs(got - want));
    }
    errs.push_back(worst);
  }
  for (std::size_t i = 1; i < errs.size(); ++i) CHECK(errs[i] < errs[i - 1]);
  CHECK(errs.back() < 1e-7);

  const DecayFit fit = fit_sqrt_decay(Ns, errs);
  CHECK(fit.rate == doctest::Approx(std::sqrt(kPi * d)).epsilon(0.25));
}

TEST_CASE("the correction term makes the evaluation exact down to t = -1") {
  ScalarOperator backend(Complex(4.0, 0.0));
  const SpectralParams sp = backend.spectral_params();
  ExpmEvaluator ev(backend,
                   make_sinc_quadrature(sector_to_contour(sp, strip_width_default(sp)), 1.0, 128),
                   1);
  const StateVector v{ComplexVector::Ones(1), BasisTag::AbstractCoordinate};
  // T(A,-1) = I: without subtracting v/z the trapezoid sum cannot reach it.
  CHECK(std::abs(ev.apply(-1.0, v).coords[0] - 1.0) < 1e-9);
}

TEST_CASE("diagonal backend exponential hits every eigenvalue's closed form") {
  ComplexVector eigs(3);
  eigs << Complex(2.0, 0.0), Complex(9.0, 2.0), Complex(40.0, -10.0);
  DiagonalOperator backend(eigs);
  const SpectralParams sp = backend.spectral_params();
  ExpmEvaluator ev(backend,
                   make_sinc_quadrature(sector_to_contour(sp, strip_width_default(sp)), 1.0, 128),
                   2);
  StateVector v{ComplexVector::Ones(3), BasisTag::AbstractCoordinate};
  for (double t : {-1.0, -0.3, 0.6, 1.0}) {
    const StateVector got = ev.apply(t, v);
    for (int i = 0; i < 3; ++i)
      CHECK(std::abs(got.coords[i] - std::exp(-eigs[i] * (t + 1.0))) < 1e-6);
  }
}

TEST_CASE("evaluation outside the normalized time interval is rejected") {
  ScalarOperator backend(Complex(1.0, 0.0));
  const SpectralParams sp = backend.spectral_params();
  ExpmEvaluator ev(backend,
                   make_sinc_quadrature(sector_to_contour(sp, strip_width_default(sp)), 1.0, 4),
                   1);
  const StateVector v{ComplexVector::Ones(1), BasisTag::AbstractCoordinate};
  CHECK_THROWS_AS((void)ev.apply(1.5, v), std::domain_error);
  CHECK_THROWS_AS((void)ev.apply(std::nan(""), v), std::domain_error);
}

TEST_CASE("slab cache spends resolves once per key and validates the input bitwise") {
  SineSpectralLaplacian backend(8);
  const SpectralParams sp = backend.spectral_params();
  ExpmEvaluator ev(backend,
                   make_sinc_quadrature(sector_to_contour(sp, strip_width_default(sp)), 1.0, 10),
                   2);
  StateVector v{ComplexVector::Ones(8), BasisTag::SineMode};
  backend.reset_resolve_count();

  (void)ev.apply(0.0, v, "key");
  CHECK(backend.resolve_count() == 21);
  (void)ev.apply(0.5, v, "key");  // same key, same bits: no new resolves
  CHECK(backend.resolve_count() == 21);

  StateVector w = v;
  w.coords[0] += 0.5;  // different bits under the same key force a refill
  (void)ev.apply(0.5, w, "key");
  CHECK(backend.resolve_count() == 42);

  (void)ev.apply(0.5, v);  // keyless applications are never cached
  (void)ev.apply(0.5, v);
  CHECK(backend.resolve_count() == 84);

  ev.clear_cache();
  (void)ev.apply(0.5, w, "key");
  CHECK(backend.resolve_count() == 105);
}

TEST_CASE("batched evaluation equals one-at-a-time evaluation bitwise") {
  SineSpectralLaplacian backend(6);
  const SpectralParams sp = backend.spectral_params();
  ExpmEvaluator ev(backend,
                   make_sinc_quadrature(sector_to_contour(sp, strip_width_default(sp)), 1.0, 24),
                   3);
  ComplexVector c(6);
  c << 1.0, -0.5, 0.25, Complex(0.0, 1.0), 0.0, 2.0;
  StateVector v{c, BasisTag::SineMode};
  const std::vector<double> ts = {-1.0, -0.25, 0.0, 0.8, 1.0};
  const std::vector<StateVector> batch = ev.apply_many(ts, v, "traj");
  for (std::size_t i = 0; i < ts.size(); ++i)
    CHECK(bitwise_equal(batch[i], ev.apply(ts[i], v, "traj")));
}

TEST_CASE("worker count changes the wall clock, never the bits") {
  FdLaplacian1D backend(300);
  const SpectralParams sp = backend.spectral_params();
  ComplexVector c(300);
  for (int i = 0; i < 300; ++i) c[i] = std::sin(0.1 * (i + 1));
  StateVector v{c, BasisTag::NodalGrid};

  std::vector<StateVector> reference;
  for (int workers : {1, 2, 4, 8}) {
    ExpmEvaluator ev(backend,
                     make_sinc_quadrature(sector_to_contour(sp, strip_width_default(sp)), 1.0, 64),
                     workers);
    const std::vector<double> ts = {-1.0, 0.0, 1.0};
    const std::vector<StateVector> got = ev.apply_many(ts, v);
    if (reference.empty()) {
      reference = got;
    } else {
      for (std::size_t i = 0; i < got.size(); ++i)
        CHECK(bitwise_equal(got[i], reference[i]));
    }
  }
}

TEST_CASE("underflow clamping is counted, not silently applied") {
  ScalarOperator backend(Complex(kPi * kPi, 0.0));
  const SpectralParams sp = backend.spectral_params();
  ExpmEvaluator ev(backend,
                   make_sinc_quadrature(sector_to_contour(sp, strip_width_default(sp)), 1.0, 256),
                   1);
  const StateVector v{ComplexVector::Ones(1), BasisTag::AbstractCoordinate};
  CHECK(ev.underflow_events() == 0);
  (void)ev.apply(1.0, v);  // far nodes have Re(z) cosh-large; e^{-2 z} underflows
  CHECK(ev.underflow_events() > 0);
  const Complex got = ev.apply(1.0, v).coords[0];
  CHECK(std::abs(got - std::exp(-kPi * kPi * 2.0)) < 1e-13);
}

TEST_CASE("rate fit ignores entries at the precision floor") {
  std::vector<int> Ns = {8, 16, 32, 64};
  std::vector<double> errs = {1e-3, 1e-6, 1e-15, 1e-15};
  const DecayFit fit = fit_sqrt_decay(Ns, errs);
  CHECK(fit.points_used == 2);
  std::vector<double> flat = {1e-15, 1e-15, 1e-16, 1e-16};
  CHECK_THROWS_AS((void)fit_sqrt_decay(Ns, flat), std::invalid_argument);
}
