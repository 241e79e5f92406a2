#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nlcauchy {

/// Sector location data for a strongly positive operator: the spectrum lies
/// inside the sector with vertex rho0 > 0 on the positive real axis and
/// half-angle phi0 in [0, pi/2). m_const bounds the resolvent on the sector
/// complement, ||R(z)|| <= m_const / |z - rho0|.
struct SpectralParams {
  double rho0 = 1.0;
  double phi0 = 0.0;
  double m_const = 1.0;

  void validate() const {
    if (!(rho0 > 0.0)) throw std::invalid_argument("spectral: rho0 must be positive");
    if (!(phi0 >= 0.0) || !(phi0 < std::numbers::pi / 2))
      throw std::invalid_argument("spectral: phi0 must lie in [0, pi/2)");
    if (!(m_const > 0.0)) throw std::invalid_argument("spectral: m_const must be positive");
  }
};

}  // namespace nlcauchy
