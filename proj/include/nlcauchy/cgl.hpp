#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nlcauchy {

/// Chebyshev-Gauss-Lobatto grid t_j = -cos(pi j / n), j = 0..n, ascending
/// from -1 to 1. Built mirrored so t_j = -t_{n-j} holds exactly, endpoints
/// are exact, and even n gets an exact middle zero.
struct CglGrid {
  int n = 0;
  Eigen::VectorXd nodes;

  double operator[](int j) const { return nodes[j]; }
  int point_count() const { return n + 1; }
};

inline CglGrid cgl_nodes(int n) {
  if (n < 1) throw std::domain_error("cgl_nodes: need n >= 1");
  CglGrid g;
  g.n = n;
  g.nodes.resize(n + 1);
  for (int j = 0; j <= n / 2; ++j) {
    const double t = -std::cos(std::numbers::pi * j / n);
    g.nodes[j] = (2 * j == n) ? 0.0 : t;
    g.nodes[n - j] = (2 * j == n) ? 0.0 : -t;
  }
  g.nodes[0] = -1.0;
  g.nodes[n] = 1.0;
  return g;
}

}  // namespace nlcauchy
