#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "slitsim/constants.hpp"
#include "slitsim/errors.hpp"
#include "slitsim/grid.hpp"
#include "slitsim/physcore.hpp"

namespace slitsim {

/// Complex transmission function of one grating sampled on a grid:
/// amplitude in [0,1] and phase in radians per sample.
struct TransmissionMask {
  Grid1D grid;
  std::vector<double> amplitude;
  std::vector<double> phase;

  TransmissionMask(Grid1D grid_, std::vector<double> amplitude_,
                   std::vector<double> phase_)
      : grid(grid_), amplitude(std::move(amplitude_)), phase(std::move(phase_)) {
    if (amplitude.size() != grid.n || phase.size() != grid.n)
      throw ConfigError("TransmissionMask: array sizes must match the grid");
    for (std::size_t i = 0; i < grid.n; ++i) {
      if (!(amplitude[i] >= 0.0 && amplitude[i] <= 1.0))
        throw DomainError("TransmissionMask: amplitude outside [0,1]");
      if (amplitude[i] > 0.0 && !std::isfinite(phase[i]))
        throw DomainError("TransmissionMask: non-finite phase at open sample");
    }
  }
};

namespace detail {

inline void check_mask_grid(const Grating& g, const Grid1D& grid) {
  const double need = static_cast<double>(g.n_slits) * g.period;
  if (grid.span() < need * (1.0 - 1e-12))
    throw ConfigError("mask grid narrower than n_slits * period");
  if (grid.dx > g.slit_width / 8.0 * (1.0 + 1e-12))
    throw ConfigError("mask grid under-resolved: need dx <= slit_width/8");
}

/// Index of the slit whose center is nearest to x, or -1 when x is more than
/// half a period outside the slit array.
inline long nearest_slit(const Grating& g, double x) {
  const double c0 = g.slit_center(0);
  const long j = std::lround((x - c0) / g.period);
  if (j < 0 || j >= static_cast<long>(g.n_slits)) return -1;
  return j;
}

}  // namespace detail

/// Pure open/blocked structure: amplitude 1 inside each of the n_slits
/// windows of width slit_width spaced by period, 0 elsewhere, zero phase.
inline TransmissionMask binary_mask(const Grating& g, const Grid1D& grid) {
  detail::check_mask_grid(g, grid);
  std::vector<double> amp(grid.n, 0.0);
  std::vector<double> phase(grid.n, 0.0);
  const double half_w = 0.5 * g.slit_width;
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    const long j = detail::nearest_slit(g, x);
    if (j < 0) continue;
    if (std::abs(x - g.slit_center(static_cast<std::size_t>(j))) <= half_w)
      amp[i] = 1.0;
  }
  return TransmissionMask(grid, std::move(amp), std::move(phase));
}

/// Transmission mask with the wall-interaction phase. Inside each open
/// window the transit through a grating of depth b at speed v accumulates
///   phase(x) = C3 b / (hbar v) * (1/xi_L^3 + 1/xi_R^3)
/// from the two nearest walls at distances xi_L, xi_R (more distant walls are
/// negligible at double precision for slit_width < period). Samples closer
/// than one grid cell to a wall are blanked to amplitude 0 instead of
/// evaluating the diverging 1/xi^3. c3 = 0 reproduces binary_mask exactly.
inline TransmissionMask vdw_phase_mask(const Grating& g, double velocity,
                                       const Grid1D& grid) {
  if (!(velocity > 0.0)) throw DomainError("vdw_phase_mask: velocity <= 0");
  detail::check_mask_grid(g, grid);
  if (g.c3 == 0.0) return binary_mask(g, grid);

  std::vector<double> amp(grid.n, 0.0);
  std::vector<double> phase(grid.n, 0.0);
  const double half_w = 0.5 * g.slit_width;
  const double pref = g.c3 * g.depth / (constants::hbar * velocity);
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    const long j = detail::nearest_slit(g, x);
    if (j < 0) continue;
    const double center = g.slit_center(static_cast<std::size_t>(j));
    if (std::abs(x - center) > half_w) continue;
    const double xi_left = x - (center - half_w);
    const double xi_right = (center + half_w) - x;
    if (xi_left < grid.dx || xi_right < grid.dx) continue;  // wall exclusion
    amp[i] = 1.0;
    phase[i] = pref * (1.0 / (xi_left * xi_left * xi_left) +
                       1.0 / (xi_right * xi_right * xi_right));
  }
  return TransmissionMask(grid, std::move(amp), std::move(phase));
}

/// Classical effective open width: w - 2 xi_c, clamped to [0, w], where xi_c
/// is the wall distance at which the impulse-approximation deflection
/// 3 C3 b / (m v^2 xi^4) equals the acceptance angle. A fully closed slit
/// (width 0) is a valid return.
inline double effective_slit_width(const Grating& g, double mass,
                                   double velocity, double acceptance_angle) {
  if (!(mass > 0.0)) throw DomainError("effective_slit_width: mass <= 0");
  if (!(velocity > 0.0))
    throw DomainError("effective_slit_width: velocity <= 0");
  if (!(acceptance_angle > 0.0))
    throw DomainError("effective_slit_width: acceptance_angle <= 0");
  if (g.c3 == 0.0) return g.slit_width;
  const double xi_c = std::pow(
      3.0 * g.c3 * g.depth / (mass * velocity * velocity * acceptance_angle),
      0.25);
  return std::clamp(g.slit_width - 2.0 * xi_c, 0.0, g.slit_width);
}

}  // namespace slitsim
