#pragma once

#include "nlcauchy/hermite_fejer.hpp"

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace nlcauchy {

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
};

inline LineFit least_squares_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("least_squares_line: need >= 2 matched points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("least_squares_line: degenerate abscissae");
  LineFit f;
  f.slope = (n * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / n;
  return f;
}

struct DecayFit {
  double intercept = 0.0;
  double rate = 0.0;  // b in log E = a - b sqrt(N+1)
  int points_used = 0;
};

/// Fits log E = a - b sqrt(N+1) over the entries that sit above the
/// precision floor; entries at or below the floor carry no rate information
/// and are excluded.
inline DecayFit fit_sqrt_decay(std::span<const int> Ns, std::span<const double> errs,
                               double floor_val = 1e-13) {
  if (Ns.size() != errs.size()) throw std::invalid_argument("fit_sqrt_decay: size mismatch");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    if (errs[i] > floor_val) {
      x.push_back(std::sqrt(Ns[i] + 1.0));
      y.push_back(std::log(errs[i]));
    }
  }
  if (x.size() < 2)
    throw std::invalid_argument("fit_sqrt_decay: fewer than 2 points above the floor");
  const LineFit lf = least_squares_line(x, y);
  return {lf.intercept, -lf.slope, static_cast<int>(x.size())};
}

/// Max deviation, on gap midpoints, between the constructed interior basis
/// functions and the alternate printed closed form
/// (1-t^2)(1+t t_i-2 t_i^2) P^2(t) / ((n-1)^2 (t-t_i)^2 (1-t_i^2)) with
/// P = U_{n-1}/n. The two cannot both satisfy the defining conditions; the
/// deviation is reported so the discrepancy stays visible instead of being
/// silently absorbed.
inline double hf_variant_interior_mismatch(const HermiteFejerBasis& basis) {
  const int n = basis.n();
  if (n < 2) return 0.0;
  double mx = 0.0;
  for (int j = 0; j < n; ++j) {
    const double t = 0.5 * (basis.grid()[j] + basis.grid()[j + 1]);
    const double u = detail::chebyshev_u(n - 1, t);
    const double p2 = u * u / (static_cast<double>(n) * n);
    for (int i = 1; i < n; ++i) {
      const double ti = basis.grid()[i];
      const double variant = (1.0 - t * t) * (1.0 + t * ti - 2.0 * ti * ti) * p2 /
                             ((n - 1.0) * (n - 1.0) * (t - ti) * (t - ti) * (1.0 - ti * ti));
      mx = std::max(mx, std::abs(basis.eval(i, t) - variant));
    }
  }
  return mx;
}

}  // namespace nlcauchy
