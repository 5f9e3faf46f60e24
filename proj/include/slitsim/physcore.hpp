#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "slitsim/constants.hpp"
#include "slitsim/errors.hpp"

namespace slitsim {

/// Molecular species and longitudinal velocity distribution of the incident
/// beam. Mass is accepted in atomic mass units and stored in kg.
struct BeamSpec {
  double mass;          // kg
  double v_mean;        // m/s
  double v_sigma;       // m/s
  double source_width;  // m, transverse extent of the source
  double divergence;    // rad, half-angle of the transverse angular spread

  BeamSpec(double mass_amu, double v_mean_, double v_sigma_,
           double source_width_, double divergence_)
      : mass(mass_amu * constants::amu_kg),
        v_mean(v_mean_),
        v_sigma(v_sigma_),
        source_width(source_width_),
        divergence(divergence_) {
    if (!(mass_amu > 0.0)) throw DomainError("BeamSpec: mass must be positive");
    if (!(v_mean > 0.0)) throw DomainError("BeamSpec: v_mean must be positive");
    if (!(v_sigma >= 0.0)) throw DomainError("BeamSpec: v_sigma must be >= 0");
    if (!(source_width >= 0.0))
      throw DomainError("BeamSpec: source_width must be >= 0");
    if (!(divergence >= 0.0))
      throw DomainError("BeamSpec: divergence must be >= 0");
    // Velocities are drawn from a Gaussian truncated at +-3 sigma, so this
    // bound keeps every sampled velocity strictly positive.
    if (!(3.0 * v_sigma < v_mean))
      throw DomainError("BeamSpec: need 3*v_sigma < v_mean");
    if (!(divergence < 0.1))
      throw DomainError("BeamSpec: divergence must stay paraxial (< 0.1 rad)");
  }
};

/// Geometric and interaction parameters of one diffraction grating.
/// c3 is the non-retarded molecule-wall coefficient of V(xi) = -C3/xi^3;
/// c3 = 0 disables the wall interaction entirely.
struct Grating {
  double period;      // m
  double slit_width;  // m, geometric open width
  double depth;       // m, thickness along the beam
  std::size_t n_slits;
  double c3;  // J m^3

  /// Optional classical-model override: when set, the ray tracer uses this
  /// open width verbatim instead of the computed effective width.
  std::optional<double> effective_width_override;

  Grating(double period_, double slit_width_, double depth_,
          std::size_t n_slits_, double c3_,
          std::optional<double> effective_width_override_ = std::nullopt)
      : period(period_),
        slit_width(slit_width_),
        depth(depth_),
        n_slits(n_slits_),
        c3(c3_),
        effective_width_override(effective_width_override_) {
    if (!(slit_width > 0.0 && slit_width < period))
      throw DomainError("Grating: need 0 < slit_width < period");
    if (!(depth >= 0.0)) throw DomainError("Grating: depth must be >= 0");
    if (n_slits < 1) throw DomainError("Grating: need at least one slit");
    if (!(c3 >= 0.0)) throw DomainError("Grating: c3 must be >= 0");
    if (effective_width_override &&
        !(*effective_width_override >= 0.0 &&
          *effective_width_override <= slit_width))
      throw DomainError(
          "Grating: effective width override must lie in [0, slit_width]");
  }

  /// Center of slit j; slits are centered about x = 0.
  double slit_center(std::size_t j) const {
    return (static_cast<double>(j) -
            0.5 * static_cast<double>(n_slits - 1)) *
           period;
  }

  /// Transverse extent of the open structure (outer wall to outer wall).
  double illuminated_span() const {
    return static_cast<double>(n_slits - 1) * period + slit_width;
  }
};

struct Station {
  double z;  // m
  Grating grating;
};

/// Longitudinal layout: grating stations in beam order plus detector plane.
struct Geometry {
  std::vector<Station> stations;
  double z_detector;  // m

  Geometry(std::vector<Station> stations_, double z_detector_)
      : stations(std::move(stations_)), z_detector(z_detector_) {
    double prev = 0.0;
    bool first = true;
    for (const auto& s : stations) {
      if (first && !(s.z >= 0.0))
        throw DomainError("Geometry: first station must be at z >= 0");
      if (!first && !(s.z > prev))
        throw DomainError("Geometry: station positions must strictly increase");
      prev = s.z;
      first = false;
    }
    const double last = stations.empty() ? 0.0 : stations.back().z;
    if (!(z_detector > last))
      throw DomainError("Geometry: detector must sit past the last station");
    if (!(z_detector > 0.0))
      throw DomainError("Geometry: detector must be at z > 0");
  }
};

/// Binned transverse intensity (wave model) or hit-count (ray model) record.
struct DetectorProfile {
  double x_min;      // m, left edge of the first bin
  double bin_width;  // m
  std::vector<double> counts;
  double total;

  DetectorProfile(double x_min_, double bin_width_, std::vector<double> counts_)
      : x_min(x_min_), bin_width(bin_width_), counts(std::move(counts_)) {
    if (!(bin_width > 0.0))
      throw DomainError("DetectorProfile: bin_width must be positive");
    if (counts.empty()) throw DomainError("DetectorProfile: no bins");
    double sum = 0.0;
    for (double c : counts) {
      if (!(c >= 0.0) || !std::isfinite(c))
        throw DomainError("DetectorProfile: counts must be finite and >= 0");
      sum += c;
    }
    total = sum;
  }

  std::size_t n_bins() const { return counts.size(); }
  double center(std::size_t i) const {
    return x_min + (static_cast<double>(i) + 0.5) * bin_width;
  }
  double span() const { return bin_width * static_cast<double>(counts.size()); }
};

/// lambda = h / (m v)
inline double de_broglie_wavelength(double mass, double velocity) {
  if (!(mass > 0.0)) throw DomainError("de_broglie_wavelength: mass <= 0");
  if (!(velocity > 0.0))
    throw DomainError("de_broglie_wavelength: velocity <= 0");
  return constants::planck / (mass * velocity);
}

/// Full-revival self-imaging distance 2 d^2 / lambda. The half distance
/// d^2/lambda produces the image shifted by half a period.
inline double talbot_length(double period, double wavelength) {
  if (!(period > 0.0)) throw DomainError("talbot_length: period <= 0");
  if (!(wavelength > 0.0)) throw DomainError("talbot_length: wavelength <= 0");
  if (!(wavelength < period))
    throw DomainError("talbot_length: requires wavelength < period");
  return 2.0 * period * period / wavelength;
}

}  // namespace slitsim
