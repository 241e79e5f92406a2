#pragma once

#include "nlcauchy/spectral.hpp"
#include "nlcauchy/state.hpp"
#include "nlcauchy/tridiag.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace nlcauchy {

struct singular_shift : std::domain_error {
  using std::domain_error::domain_error;
};

struct capability_missing : std::logic_error {
  using std::logic_error::logic_error;
};

/// Strongly positive operator A presented through the capabilities the
/// solver needs: sector data, resolvent application (zI - A)^{-1} v, and
/// (optionally) the fractional-power action A^alpha v. Backends fix the
/// coordinate representation of the vectors they accept (see BasisTag) and
/// are immutable after construction, so resolve/power_apply are safe to call
/// concurrently.
class OperatorBackend {
 public:
  virtual ~OperatorBackend() = default;

  virtual const char* kind() const = 0;
  virtual BasisTag basis() const = 0;
  virtual Eigen::Index dim() const = 0;
  virtual SpectralParams spectral_params() const = 0;

  /// (zI - A)^{-1} v. Thread-safe; every call is tallied in resolve_count().
  StateVector resolve(Complex z, const StateVector& v) const {
    check(v);
    resolves_.fetch_add(1, std::memory_order_relaxed);
    return do_resolve(z, v);
  }

  StateVector apply(const StateVector& v) const { return power_apply(1.0, v); }

  /// A^alpha v (principal branch on the sector). Optional capability: a
  /// backend without it throws capability_missing rather than approximating.
  StateVector power_apply(double alpha, const StateVector& v) const {
    check(v);
    return do_power_apply(alpha, v);
  }

  /// Point evaluation of the function encoded by v, where the representation
  /// supports it (sine modes do; abstract coordinates do not).
  virtual bool can_eval_at() const { return false; }
  virtual Complex eval_at(const StateVector&, double) const {
    throw capability_missing("backend does not support point evaluation");
  }

  long long resolve_count() const { return resolves_.load(std::memory_order_relaxed); }
  void reset_resolve_count() const { resolves_.store(0, std::memory_order_relaxed); }

 protected:
  virtual StateVector do_resolve(Complex z, const StateVector& v) const = 0;
  virtual StateVector do_power_apply(double, const StateVector&) const {
    throw capability_missing(std::string(kind()) + " backend has no power_apply");
  }

  void check(const StateVector& v) const {
    if (v.tag != basis() || v.dim() != dim())
      throw dimension_mismatch(std::string("vector does not match backend ") + kind());
  }

 private:
  mutable std::atomic<long long> resolves_{0};
};

/// R_A(z)v - v/z, the corrected resolvent whose integrand decays on both
/// hyperbola branches. The subtracted pole sits at z = 0, which the contour
/// never crosses; a vanishing shift therefore signals a caller bug.
inline StateVector resolvent_corrected(const OperatorBackend& backend, Complex z,
                                       const StateVector& v) {
  if (std::abs(z) < 1e-300) throw singular_shift("corrected resolvent needs z != 0");
  StateVector r = backend.resolve(z, v);
  r.coords -= v.coords / z;
  return r;
}

namespace detail {

/// Sector for one eigenvalue with positive real part. A real eigenvalue is
/// its own vertex; otherwise the vertex is pulled onto the real axis along a
/// ray slightly steeper than arg(lambda), which keeps rho0 positive.
inline SpectralParams scalar_sector(Complex lambda) {
  if (!(lambda.real() > 0.0))
    throw std::invalid_argument("operator eigenvalue must have positive real part");
  const double a = std::abs(std::arg(lambda));
  if (a == 0.0) return {lambda.real(), 0.0, 1.0};
  const double phi0 = std::min(1.05 * a, 0.5 * (a + std::numbers::pi / 2));
  const double rho0 = lambda.real() - std::abs(lambda.imag()) / std::tan(phi0);
  return {rho0, phi0, 1.0};
}

inline void guard_shift(Complex z, Complex lambda, double scale) {
  if (std::abs(z - lambda) < 1e-14 * scale)
    throw singular_shift("resolvent shift coincides with an eigenvalue");
}

}  // namespace detail

/// One-dimensional model operator A = lambda, the sharpest probe of the
/// contour quadrature since resolve is exact.
class ScalarOperator : public OperatorBackend {
 public:
  explicit ScalarOperator(Complex lambda)
      : lambda_(lambda), sector_(detail::scalar_sector(lambda)) {}

  const char* kind() const override { return "scalar"; }
  BasisTag basis() const override { return BasisTag::AbstractCoordinate; }
  Eigen::Index dim() const override { return 1; }
  SpectralParams spectral_params() const override { return sector_; }

  Complex lambda() const { return lambda_; }

 protected:
  StateVector do_resolve(Complex z, const StateVector& v) const override {
    detail::guard_shift(z, lambda_, std::max(1.0, std::abs(lambda_)));
    return {v.coords / (z - lambda_), v.tag};
  }
  StateVector do_power_apply(double alpha, const StateVector& v) const override {
    return {std::pow(lambda_, alpha) * v.coords, v.tag};
  }

 private:
  Complex lambda_;
  SpectralParams sector_;
};

/// Diagonal operator with an explicit eigenvalue list; the sector is the
/// tightest common one under the per-eigenvalue vertex rule.
class DiagonalOperator : public OperatorBackend {
 public:
  explicit DiagonalOperator(ComplexVector eigenvalues) : lambda_(std::move(eigenvalues)) {
    if (lambda_.size() == 0) throw std::invalid_argument("diagonal: need at least one eigenvalue");
    double phi0 = 0.0;
    for (Eigen::Index i = 0; i < lambda_.size(); ++i)
      phi0 = std::max(phi0, detail::scalar_sector(lambda_[i]).phi0);
    double rho0 = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < lambda_.size(); ++i) {
      const Complex l = lambda_[i];
      const double r = phi0 == 0.0 ? l.real() : l.real() - std::abs(l.imag()) / std::tan(phi0);
      rho0 = std::min(rho0, r);
    }
    if (!(rho0 > 0.0)) throw std::invalid_argument("diagonal: spectrum does not fit a sector");
    sector_ = {rho0, phi0, 1.0};
  }

  const char* kind() const override { return "diagonal"; }
  BasisTag basis() const override { return BasisTag::AbstractCoordinate; }
  Eigen::Index dim() const override { return lambda_.size(); }
  SpectralParams spectral_params() const override { return sector_; }

  const ComplexVector& eigenvalues() const { return lambda_; }

 protected:
  StateVector do_resolve(Complex z, const StateVector& v) const override {
    ComplexVector out(lambda_.size());
    for (Eigen::Index i = 0; i < lambda_.size(); ++i) {
      detail::guard_shift(z, lambda_[i], std::max(1.0, std::abs(lambda_[i])));
      out[i] = v.coords[i] / (z - lambda_[i]);
    }
    return {std::move(out), v.tag};
  }
  StateVector do_power_apply(double alpha, const StateVector& v) const override {
    ComplexVector out(lambda_.size());
    for (Eigen::Index i = 0; i < lambda_.size(); ++i)
      out[i] = std::pow(lambda_[i], alpha) * v.coords[i];
    return {std::move(out), v.tag};
  }

 private:
  ComplexVector lambda_;
  SpectralParams sector_;
};

/// Dirichlet Laplacian -u'' on (0,1) in the sine eigenbasis: coordinate k
/// carries the coefficient of sin((k+1) pi x), eigenvalue ((k+1) pi)^2.
/// Supports point evaluation by summing the sine series.
class SineSpectralLaplacian : public OperatorBackend {
 public:
  explicit SineSpectralLaplacian(Eigen::Index modes) : modes_(modes) {
    if (modes < 1) throw std::invalid_argument("sine backend needs at least one mode");
  }

  const char* kind() const override { return "sine"; }
  BasisTag basis() const override { return BasisTag::SineMode; }
  Eigen::Index dim() const override { return modes_; }
  SpectralParams spectral_params() const override {
    return {std::numbers::pi * std::numbers::pi, 0.0, 1.0};
  }

  bool can_eval_at() const override { return true; }
  Complex eval_at(const StateVector& v, double x) const override {
    Complex acc = 0.0;
    for (Eigen::Index k = 0; k < modes_; ++k)
      acc += v.coords[k] * std::sin(static_cast<double>(k + 1) * std::numbers::pi * x);
    return acc;
  }

  static double eigenvalue(Eigen::Index k) {
    const double kp = static_cast<double>(k + 1) * std::numbers::pi;
    return kp * kp;
  }

 protected:
  StateVector do_resolve(Complex z, const StateVector& v) const override {
    ComplexVector out(modes_);
    for (Eigen::Index k = 0; k < modes_; ++k) {
      detail::guard_shift(z, eigenvalue(k), eigenvalue(k));
      out[k] = v.coords[k] / (z - eigenvalue(k));
    }
    return {std::move(out), v.tag};
  }
  StateVector do_power_apply(double alpha, const StateVector& v) const override {
    ComplexVector out(modes_);
    for (Eigen::Index k = 0; k < modes_; ++k)
      out[k] = std::pow(eigenvalue(k), alpha) * v.coords[k];
    return {std::move(out), v.tag};
  }

 private:
  Eigen::Index modes_;
};

/// Sector data of the second-difference Dirichlet Laplacian on (0,1) with
/// m_int interior points: vertex at the exact smallest stencil eigenvalue
/// (the contour must envelope the discrete spectrum, not pi^2), zero
/// half-angle since the stencil is symmetric.
inline SpectralParams fd_spectral_params(Eigen::Index m_int) {
  if (m_int < 1) throw std::invalid_argument("fd_spectral_params: need m_int >= 1");
  const double dx = 1.0 / static_cast<double>(m_int + 1);
  const double s = std::sin(0.5 * std::numbers::pi * dx);
  return {4.0 / (dx * dx) * s * s, 0.0, 1.0};
}

/// Second-order finite-difference Dirichlet Laplacian on (0,1) with m_int
/// interior points, dx = 1/(m_int+1). Vectors hold interior nodal values.
/// Resolvent shifts run through the Thomas algorithm; fractional powers go
/// through the discrete sine eigen-expansion of the stencil.
class FdLaplacian1D : public OperatorBackend {
 public:
  explicit FdLaplacian1D(Eigen::Index interior_points) : m_(interior_points) {
    if (m_ < 1) throw std::invalid_argument("fd backend needs at least one interior point");
    dx_ = 1.0 / static_cast<double>(m_ + 1);
  }

  const char* kind() const override { return "fd"; }
  BasisTag basis() const override { return BasisTag::NodalGrid; }
  Eigen::Index dim() const override { return m_; }
  SpectralParams spectral_params() const override { return fd_spectral_params(m_); }

  double dx() const { return dx_; }

  /// k-th stencil eigenvalue, 4/dx^2 sin^2((k+1) pi dx / 2), ascending.
  double eigenvalue(Eigen::Index k) const {
    const double s = std::sin(0.5 * static_cast<double>(k + 1) * std::numbers::pi * dx_);
    return 4.0 / (dx_ * dx_) * s * s;
  }

 protected:
  StateVector do_resolve(Complex z, const StateVector& v) const override {
    guard_off_spectrum(z);
    const double w = 1.0 / (dx_ * dx_);
    return {solve_const_tridiag(z - 2.0 * w, w, v.coords), v.tag};
  }

  StateVector do_power_apply(double alpha, const StateVector& v) const override {
    if (alpha == 1.0) {
      const double w = 1.0 / (dx_ * dx_);
      ComplexVector out(m_);
      for (Eigen::Index j = 0; j < m_; ++j) {
        Complex acc = 2.0 * v.coords[j];
        if (j > 0) acc -= v.coords[j - 1];
        if (j + 1 < m_) acc -= v.coords[j + 1];
        out[j] = w * acc;
      }
      return {std::move(out), v.tag};
    }
    // Expand over the stencil eigenvectors sin((k+1) pi x_j) via the
    // self-inverse DST (up to 2/(m+1)), scale by lambda_k^alpha, go back.
    ComplexVector hat = dst(v.coords);
    for (Eigen::Index k = 0; k < m_; ++k) hat[k] *= std::pow(eigenvalue(k), alpha);
    ComplexVector out = dst(hat);
    out *= 2.0 / static_cast<double>(m_ + 1);
    return {std::move(out), v.tag};
  }

 private:
  ComplexVector dst(const ComplexVector& v) const {
    ComplexVector out(m_);
    for (Eigen::Index k = 0; k < m_; ++k) {
      Complex acc = 0.0;
      for (Eigen::Index j = 0; j < m_; ++j)
        acc += v[j] * std::sin(static_cast<double>((k + 1) * (j + 1)) * std::numbers::pi * dx_);
      out[k] = acc;
    }
    return out;
  }

  /// The Thomas solve has no pivoting, so shifts that land on the stencil
  /// spectrum must be rejected rather than silently amplified.
  void guard_off_spectrum(Complex z) const {
    const double scale = 4.0 / (dx_ * dx_);
    if (std::abs(z.imag()) > 1e-12 * scale) return;
    for (Eigen::Index k = 0; k < m_; ++k) detail::guard_shift(z, eigenvalue(k), scale * 1e2);
  }

  Eigen::Index m_;
  double dx_;
};

}  // namespace nlcauchy
