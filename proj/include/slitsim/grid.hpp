#pragma once

#include <cstddef>
#include <string>

#include "slitsim/errors.hpp"

namespace slitsim {

/// Uniform transverse sample grid. Sample i sits at x_min + i*dx; the
/// periodic window width used by spectral methods is n*dx.
struct Grid1D {
  double x_min = 0.0;
  double dx = 0.0;
  std::size_t n = 0;

  Grid1D(double x_min_, double dx_, std::size_t n_)
      : x_min(x_min_), dx(dx_), n(n_) {
    if (!(dx > 0.0)) throw DomainError("Grid1D: dx must be positive");
    if (n < 2) throw DomainError("Grid1D: need at least 2 samples");
  }

  /// Grid of n samples symmetric about x = 0. For even n the samples sit at
  /// half-integer multiples of dx, so mirrored sample positions negate
  /// exactly; for odd n the central sample is exactly 0.
  static Grid1D centered(double width, std::size_t n) {
    if (!(width > 0.0)) throw DomainError("Grid1D: width must be positive");
    if (n < 2) throw DomainError("Grid1D: need at least 2 samples");
    const double dx = width / static_cast<double>(n);
    const double x_min = (0.5 - 0.5 * static_cast<double>(n)) * dx;
    return Grid1D(x_min, dx, n);
  }

  double x(std::size_t i) const { return x_min + dx * static_cast<double>(i); }
  double span() const { return dx * static_cast<double>(n); }

  bool operator==(const Grid1D&) const = default;
};

}  // namespace slitsim
