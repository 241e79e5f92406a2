#pragma once

#include "nlcauchy/state.hpp"

#include <stdexcept>

namespace nlcauchy {

struct pivot_breakdown : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Solves the tridiagonal system with main diagonal `diag` (length m),
/// subdiagonal `lower` and superdiagonal `upper` (length m-1 each) by
/// forward elimination and back substitution, no pivoting. Row i reads
/// lower[i-1]*x[i-1] + diag[i]*x[i] + upper[i]*x[i+1] = rhs[i]. Callers keep
/// the shift off the spectrum, so pivots only underflow on misuse; that case
/// throws instead of propagating junk.
inline ComplexVector thomas_solve(const ComplexVector& lower, const ComplexVector& diag,
                                  const ComplexVector& upper, const ComplexVector& rhs,
                                  double pivot_tol = 1e-300) {
  const Eigen::Index m = diag.size();
  if (rhs.size() != m || lower.size() != m - 1 || upper.size() != m - 1)
    throw dimension_mismatch("thomas_solve: inconsistent array lengths");
  ComplexVector c(m), x(m);
  Complex beta = diag[0];
  if (std::abs(beta) < pivot_tol) throw pivot_breakdown("thomas_solve: pivot underflow at row 0");
  x[0] = rhs[0] / beta;
  for (Eigen::Index i = 1; i < m; ++i) {
    c[i] = upper[i - 1] / beta;
    beta = diag[i] - lower[i - 1] * c[i];
    if (std::abs(beta) < pivot_tol)
      throw pivot_breakdown("thomas_solve: pivot underflow at row " + std::to_string(i));
    x[i] = (rhs[i] - lower[i - 1] * x[i - 1]) / beta;
  }
  for (Eigen::Index i = m - 2; i >= 0; --i) x[i] -= c[i + 1] * x[i + 1];
  return x;
}

/// Same solve for the constant-coefficient case (diagonal d, both
/// off-diagonals o), the shape every shifted second-difference system has.
inline ComplexVector solve_const_tridiag(Complex d, Complex o, const ComplexVector& rhs,
                                         double pivot_tol = 1e-300) {
  const Eigen::Index m = rhs.size();
  ComplexVector lower = ComplexVector::Constant(m - 1, o);
  ComplexVector diag = ComplexVector::Constant(m, d);
  return thomas_solve(lower, diag, lower, rhs, pivot_tol);
}

}  // namespace nlcauchy
