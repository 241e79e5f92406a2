#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstring>
#include <stdexcept>
#include <string>
#include <utility>

namespace nlcauchy {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Coordinate representation a StateVector lives in. Vectors combine
/// arithmetically only when both tag and length agree.
enum class BasisTag { NodalGrid, SineMode, AbstractCoordinate };

inline const char* to_string(BasisTag tag) {
  switch (tag) {
    case BasisTag::NodalGrid: return "nodal-grid";
    case BasisTag::SineMode: return "sine-mode";
    case BasisTag::AbstractCoordinate: return "abstract-coordinate";
  }
  return "unknown";
}

struct dimension_mismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Element of the solution space in a concrete coordinate representation.
/// Coordinates are stored complex throughout; real-operator data simply has
/// vanishing imaginary parts up to roundoff.
struct StateVector {
  ComplexVector coords;
  BasisTag tag = BasisTag::AbstractCoordinate;

  StateVector() = default;
  StateVector(ComplexVector c, BasisTag t) : coords(std::move(c)), tag(t) {}

  Eigen::Index dim() const { return coords.size(); }

  bool is_finite() const {
    for (Eigen::Index i = 0; i < coords.size(); ++i) {
      if (!std::isfinite(coords[i].real()) || !std::isfinite(coords[i].imag())) return false;
    }
    return true;
  }

  double max_abs() const { return coords.size() == 0 ? 0.0 : coords.cwiseAbs().maxCoeff(); }
};

inline void require_compatible(const StateVector& a, const StateVector& b) {
  if (a.tag != b.tag)
    throw dimension_mismatch(std::string("basis mismatch: ") + to_string(a.tag) + " vs " +
                             to_string(b.tag));
  if (a.coords.size() != b.coords.size())
    throw dimension_mismatch("length mismatch: " + std::to_string(a.coords.size()) + " vs " +
                             std::to_string(b.coords.size()));
}

inline StateVector operator+(const StateVector& a, const StateVector& b) {
  require_compatible(a, b);
  return {a.coords + b.coords, a.tag};
}

inline StateVector operator-(const StateVector& a, const StateVector& b) {
  require_compatible(a, b);
  return {a.coords - b.coords, a.tag};
}

inline StateVector operator*(const Complex& s, const StateVector& v) {
  return {s * v.coords, v.tag};
}

inline StateVector operator*(double s, const StateVector& v) { return {s * v.coords, v.tag}; }

inline StateVector& operator+=(StateVector& a, const StateVector& b) {
  require_compatible(a, b);
  a.coords += b.coords;
  return a;
}

inline bool bitwise_equal(const StateVector& a, const StateVector& b) {
  if (a.tag != b.tag || a.coords.size() != b.coords.size()) return false;
  if (a.coords.size() == 0) return true;
  return std::memcmp(a.coords.data(), b.coords.data(),
                     sizeof(Complex) * static_cast<std::size_t>(a.coords.size())) == 0;
}

}  // namespace nlcauchy
