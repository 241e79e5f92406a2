#pragma once

#include "nlcauchy/spectral.hpp"
#include "nlcauchy/state.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace nlcauchy {

struct invalid_strip : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Integration hyperbola z(s) = a_i cosh s - i b_i sinh s, the image of the
/// real axis under the conformal map that keeps the integrand analytic in
/// the strip |Im s| < d/2. Oriented by increasing s: upper branch first.
struct HyperbolaContour {
  double a_i = 0.0;
  double b_i = 0.0;
  double d = 0.0;

  Complex point(double s) const { return {a_i * std::cosh(s), -b_i * std::sinh(s)}; }
  Complex velocity(double s) const { return {a_i * std::sinh(s), -b_i * std::cosh(s)}; }
};

/// Default strip width: back off the analyticity limit pi/2 - phi0 by a
/// relative margin so the integrand stays strictly analytic in the strip
/// while the asymptotic rate is nearly optimal.
inline double strip_width_default(const SpectralParams& sp, double margin = 0.05) {
  if (!(margin > 0.0) || !(margin < 1.0))
    throw std::invalid_argument("strip margin must lie in (0,1)");
  return (std::numbers::pi / 2 - sp.phi0) * (1.0 - margin);
}

/// Hyperbola whose +d/2 strip edge osculates the spectral sector (vertex
/// rho0, half-angle phi0) while the -d/2 edge stays right of the origin;
/// that needs d/2 + phi0 < pi/2.
inline HyperbolaContour sector_to_contour(const SpectralParams& sp, double d) {
  sp.validate();
  constexpr double half_pi = std::numbers::pi / 2;
  if (!(d > 0.0) || !(d < half_pi * 2) || !(d / 2 + sp.phi0 < half_pi))
    throw invalid_strip("strip width must satisfy 0 < d and d/2 + phi0 < pi/2");
  const double c = std::cos(sp.phi0);
  return {sp.rho0 * std::cos(d / 2 + sp.phi0) / c, sp.rho0 * std::sin(d / 2 + sp.phi0) / c, d};
}

/// Balanced trapezoid step for target smoothness alpha and 2N+1 nodes.
inline double quadrature_step(double alpha, double d, int N) {
  if (!(alpha > 0.0) || !(d > 0.0) || N < 1)
    throw std::domain_error("quadrature_step needs alpha > 0, d > 0, N >= 1");
  return std::sqrt(std::numbers::pi * d / (alpha * (N + 1)));
}

/// A-priori error bound of the truncated trapezoid rule,
/// (c/alpha) e^{-sqrt(pi d alpha (N+1))} ||A^alpha v||, reported
/// parametrically in the unspecified constant c.
inline double sinc_error_bound(double alpha, double d, int N, double norm_a_alpha_v,
                               double c = 1.0) {
  return c / alpha * std::exp(-std::sqrt(std::numbers::pi * d * alpha * (N + 1))) *
         norm_a_alpha_v;
}

/// Trapezoid rule data on the hyperbola: step h and the 2N+1 precomputed
/// node pairs (z(ph), z'(ph)), p = -N..N stored ascending.
struct SincQuadrature {
  HyperbolaContour contour;
  int N = 0;
  double h = 0.0;
  double alpha = 1.0;

  struct Node {
    Complex z;
    Complex dz;
  };
  std::vector<Node> nodes;

  int node_count() const { return 2 * N + 1; }
};

inline SincQuadrature make_sinc_quadrature(const HyperbolaContour& contour, double alpha, int N) {
  SincQuadrature q;
  q.contour = contour;
  q.N = N;
  q.alpha = alpha;
  q.h = quadrature_step(alpha, contour.d, N);
  q.nodes.resize(static_cast<std::size_t>(2 * N + 1));
  for (int p = -N; p <= N; ++p) {
    const double s = p * q.h;
    q.nodes[static_cast<std::size_t>(p + N)] = {contour.point(s), contour.velocity(s)};
  }
  return q;
}

}  // namespace nlcauchy
