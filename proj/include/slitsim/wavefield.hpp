#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <exception>
#include <mutex>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "slitsim/errors.hpp"
#include "slitsim/fft.hpp"
#include "slitsim/grating.hpp"
#include "slitsim/grid.hpp"
#include "slitsim/parallel.hpp"
#include "slitsim/physcore.hpp"
#include "slitsim/quadrature.hpp"

namespace slitsim {

/// Complex scalar wave amplitude on a uniform grid; the spectral propagator
/// requires a power-of-two sample count.
struct Field1D {
  Grid1D grid;
  std::vector<Complex> values;

  Field1D(Grid1D grid_, std::vector<Complex> values_)
      : grid(grid_), values(std::move(values_)) {
    if (grid.n < 16) throw DomainError("Field1D: need at least 16 samples");
    if (!is_power_of_two(grid.n))
      throw DomainError("Field1D: sample count must be a power of two");
    if (values.size() != grid.n)
      throw ConfigError("Field1D: value count must match the grid");
  }

  /// Total intensity, sum |u|^2 dx.
  double norm() const {
    double s = 0.0;
    for (const auto& v : values) s += std::norm(v);
    return s * grid.dx;
  }
};

/// Unit-amplitude plane wave.
inline Field1D make_plane_wave(const Grid1D& grid) {
  return Field1D(grid, std::vector<Complex>(grid.n, Complex(1.0, 0.0)));
}

/// Source field: Gaussian amplitude envelope with standard deviation
/// source_width/2, degenerating to a plane wave once the source is wider
/// than the grid. Normalized to unit total intensity.
inline Field1D make_source(const Grid1D& grid, const BeamSpec& beam) {
  std::vector<Complex> u(grid.n);
  if (beam.source_width >= grid.span()) {
    std::fill(u.begin(), u.end(), Complex(1.0, 0.0));
  } else {
    const double sigma = 0.5 * beam.source_width;
    if (!(sigma > 0.0))
      throw DomainError("make_source: zero source width needs a plane wave "
                        "(source_width >= grid span)");
    for (std::size_t i = 0; i < grid.n; ++i) {
      const double x = grid.x(i);
      u[i] = std::exp(-x * x / (2.0 * sigma * sigma));
    }
  }
  Field1D f(grid, std::move(u));
  const double nrm = f.norm();
  if (!(nrm > 0.0) || !std::isfinite(nrm))
    throw DomainError("make_source: degenerate source field");
  const double scale = 1.0 / std::sqrt(nrm);
  for (auto& v : f.values) v *= scale;
  return f;
}

/// Free-space paraxial propagation by the spectral method: each spatial
/// frequency f picks up exp(-i pi lambda z f^2). The transfer function has
/// unit modulus, so total intensity is conserved.
inline Field1D fresnel_propagate(const Field1D& field, double distance,
                                 double wavelength) {
  if (!(distance >= 0.0)) throw DomainError("fresnel_propagate: distance < 0");
  if (!(wavelength > 0.0))
    throw DomainError("fresnel_propagate: wavelength <= 0");
  if (!(wavelength < 100.0 * field.grid.dx))
    throw DomainError("fresnel_propagate: paraxial guard requires "
                      "wavelength < 100 dx");
  if (distance == 0.0) return field;

  const std::size_t n = field.grid.n;
  std::vector<Complex> a = field.values;
  fft_radix2(a, false);
  const double df = 1.0 / field.grid.span();
  for (std::size_t k = 0; k < n; ++k) {
    const double f =
        df * (k <= n / 2 ? static_cast<double>(k)
                         : static_cast<double>(k) - static_cast<double>(n));
    const double ang = -std::numbers::pi * wavelength * distance * f * f;
    a[k] *= Complex(std::cos(ang), std::sin(ang));
  }
  fft_radix2(a, true);
  return Field1D(field.grid, std::move(a));
}

/// Pointwise multiplication by amplitude * exp(i phase). Field and mask must
/// share the identical grid.
inline Field1D apply_mask(const Field1D& field, const TransmissionMask& mask) {
  if (!(field.grid == mask.grid))
    throw ConfigError("apply_mask: field and mask grids differ");
  std::vector<Complex> u(field.grid.n);
  for (std::size_t i = 0; i < field.grid.n; ++i) {
    const double amp = mask.amplitude[i];
    u[i] = amp == 0.0 ? Complex(0.0, 0.0)
                      : field.values[i] * std::polar(amp, mask.phase[i]);
  }
  return Field1D(field.grid, std::move(u));
}

/// Cosine-ramp absorber over the outer `fraction` of samples on each side;
/// identity for fields already contained in the interior.
inline void apply_absorbing_taper(Field1D& field, double fraction = 0.05) {
  const std::size_t n = field.grid.n;
  const std::size_t m = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::lround(fraction * static_cast<double>(n))));
  for (std::size_t i = 0; i < m; ++i) {
    const double t =
        (static_cast<double>(i) + 0.5) / static_cast<double>(m);
    const double w = 0.5 * (1.0 - std::cos(std::numbers::pi * t));
    field.values[i] *= w;
    field.values[n - 1 - i] *= w;
  }
}

/// Peak intensity in the outermost band relative to the global peak.
inline double edge_intensity_ratio(const Field1D& field,
                                   double band_fraction = 0.005) {
  const std::size_t n = field.grid.n;
  const std::size_t m = std::max<std::size_t>(
      2,
      static_cast<std::size_t>(std::lround(band_fraction * static_cast<double>(n))));
  double peak = 0.0;
  for (const auto& v : field.values) peak = std::max(peak, std::norm(v));
  if (peak == 0.0) return 0.0;
  double edge = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    edge = std::max(edge, std::norm(field.values[i]));
    edge = std::max(edge, std::norm(field.values[n - 1 - i]));
  }
  return edge / peak;
}

/// |u|^2 integrated per sample cell; bin centers coincide with field samples.
inline DetectorProfile bin_intensity(const Field1D& field) {
  std::vector<double> counts(field.grid.n);
  for (std::size_t i = 0; i < field.grid.n; ++i)
    counts[i] = std::norm(field.values[i]) * field.grid.dx;
  return DetectorProfile(field.grid.x_min - 0.5 * field.grid.dx, field.grid.dx,
                         std::move(counts));
}

namespace detail {

inline void check_wave_grid(const Geometry& geometry, const Grid1D& grid) {
  for (const auto& st : geometry.stations) {
    if (grid.dx > st.grating.slit_width / 16.0 * (1.0 + 1e-12))
      throw ConfigError("wave grid under-resolved: need dx <= slit_width/16");
    if (grid.span() < 4.0 * st.grating.illuminated_span())
      throw ConfigError(
          "wave grid narrower than 4x the illuminated grating span");
  }
}

inline void check_edge_guard(const Field1D& field) {
  const double ratio = edge_intensity_ratio(field);
  if (ratio >= 1e-6) {
    std::ostringstream msg;
    msg << "windowing guard: edge intensity " << ratio
        << " of peak exceeds 1e-6 (grid too narrow for the diffracted field)";
    throw GuardError(msg.str());
  }
}

}  // namespace detail

/// Full coherent pipeline for one longitudinal velocity: source field,
/// alternating free propagation and wall-interaction masks at each station,
/// final propagation to the detector, |u|^2 binned.
///
/// The aliasing guard is evaluated after every propagation leg that follows
/// the first mask (illumination before the first grating is intentionally as
/// wide as the source, so the guard would be meaningless there). The edge
/// absorber runs after every leg except the last so wrapped light is removed
/// before it reaches the next station while the detector field stays
/// untouched.
inline DetectorProfile simulate_wave(double velocity, const BeamSpec& beam,
                                     const Geometry& geometry,
                                     const Grid1D& grid) {
  if (!(velocity > 0.0)) throw DomainError("simulate_wave: velocity <= 0");
  detail::check_wave_grid(geometry, grid);
  const double lambda = de_broglie_wavelength(beam.mass, velocity);

  Field1D u = make_source(grid, beam);
  double z = 0.0;
  bool masked = false;
  for (const auto& st : geometry.stations) {
    u = fresnel_propagate(u, st.z - z, lambda);
    if (masked) detail::check_edge_guard(u);
    apply_absorbing_taper(u);
    u = apply_mask(u, vdw_phase_mask(st.grating, velocity, grid));
    masked = true;
    z = st.z;
  }
  u = fresnel_propagate(u, geometry.z_detector - z, lambda);
  if (masked) detail::check_edge_guard(u);
  return bin_intensity(u);
}

/// Incoherent average over the longitudinal velocity distribution:
/// simulate_wave at quadrature nodes of the truncated Gaussian, intensities
/// (never amplitudes) summed with weights that add to 1. Nodes may be
/// evaluated concurrently; the reduction runs in fixed node order so the
/// result is independent of n_threads.
inline DetectorProfile velocity_average(const BeamSpec& beam,
                                        const Geometry& geometry,
                                        const Grid1D& grid,
                                        std::size_t n_velocity_bins,
                                        unsigned n_threads = 1) {
  const auto nodes = velocity_nodes(beam.v_mean, beam.v_sigma, n_velocity_bins);
  std::vector<DetectorProfile> parts;
  parts.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i)
    parts.emplace_back(DetectorProfile(0.0, 1.0, std::vector<double>{0.0}));

  std::exception_ptr failure;
  std::mutex failure_mutex;
  for_each_chunk(nodes.size(), n_threads, [&](std::size_t i) {
    try {
      parts[i] = simulate_wave(nodes[i].x, beam, geometry, grid);
    } catch (...) {
      std::scoped_lock lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  });
  if (failure) std::rethrow_exception(failure);

  std::vector<double> counts(parts[0].counts.size(), 0.0);
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t b = 0; b < counts.size(); ++b)
      counts[b] += nodes[i].w * parts[i].counts[b];
  return DetectorProfile(parts[0].x_min, parts[0].bin_width, std::move(counts));
}

}  // namespace slitsim
