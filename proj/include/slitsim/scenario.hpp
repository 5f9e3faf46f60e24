#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "slitsim/config.hpp"
#include "slitsim/constants.hpp"
#include "slitsim/errors.hpp"
#include "slitsim/fft.hpp"
#include "slitsim/physcore.hpp"

namespace slitsim {

enum class ModelChoice { classical, quantum, both };
enum class SweepParam { none, v_mean, c3, slit_width };

inline const char* sweep_param_key(SweepParam p) {
  switch (p) {
    case SweepParam::v_mean: return "v_mean_mps";
    case SweepParam::c3: return "c3_Jm3";
    case SweepParam::slit_width: return "slit_width_m";
    default: return "none";
  }
}

/// Fully resolved declarative run description. Values live in SI units; the
/// raw key-value map is retained verbatim for the run manifest.
struct Scenario {
  BeamSpec beam;
  Geometry geometry;
  ModelChoice model;

  SweepParam sweep_param;
  std::vector<double> sweep_values;  // empty when sweep_param == none

  std::size_t n_rays;
  std::uint64_t seed;

  std::size_t grid_samples;
  double grid_width;
  std::size_t n_velocity_bins;
  bool far_field;
  double far_field_half_range;  // sin(theta)
  std::size_t far_field_bins;

  double det_x_min;
  double det_x_max;
  std::size_t det_bins;

  std::optional<double> reference_period;  // auto when unset
  double threshold_fraction;
  std::optional<double> min_separation;    // auto when unset
  std::optional<double> acceptance_angle;  // beam divergence when unset

  std::string out_dir;

  std::map<std::string, std::string> resolved;
};

namespace detail {

inline Geometry parse_stations(FlatConfig& cfg) {
  std::vector<Station> stations;
  for (int k = 1;; ++k) {
    const std::string prefix = "station." + std::to_string(k) + ".";
    if (!cfg.has(prefix + "z_m")) break;
    const double z = cfg.get_double(prefix + "z_m");
    std::optional<double> override_w;
    if (cfg.has(prefix + "w_eff_manual_m"))
      override_w = cfg.get_double(prefix + "w_eff_manual_m");
    try {
      Grating g(cfg.get_double(prefix + "period_m"),
                cfg.get_double(prefix + "slit_width_m"),
                cfg.get_double(prefix + "depth_m"),
                static_cast<std::size_t>(cfg.get_int(prefix + "n_slits")),
                cfg.get_double(prefix + "c3_Jm3"), override_w);
      stations.push_back(Station{z, g});
    } catch (const DomainError& e) {
      throw ConfigError(cfg.origin() + ": station " + std::to_string(k) +
                        ": " + e.what());
    }
  }
  if (stations.empty())
    throw ConfigError(cfg.origin() + ": no stations (need station.1.z_m ...)");
  try {
    return Geometry(std::move(stations), cfg.get_double("geometry.z_detector_m"));
  } catch (const DomainError& e) {
    throw ConfigError(cfg.origin() + ": " + e.what());
  }
}

}  // namespace detail

inline Scenario build_scenario(FlatConfig cfg) {
  BeamSpec beam = [&] {
    try {
      return BeamSpec(cfg.get_double("beam.mass_amu"),
                      cfg.get_double("beam.v_mean_mps"),
                      cfg.get_double("beam.v_sigma_mps"),
                      cfg.get_double("beam.source_width_m"),
                      cfg.get_double("beam.divergence_rad"));
    } catch (const DomainError& e) {
      throw ConfigError(cfg.origin() + ": beam: " + e.what());
    }
  }();
  Geometry geometry = detail::parse_stations(cfg);

  const std::string model_s = cfg.get_string("model");
  ModelChoice model;
  if (model_s == "classical") model = ModelChoice::classical;
  else if (model_s == "quantum") model = ModelChoice::quantum;
  else if (model_s == "both") model = ModelChoice::both;
  else
    throw ConfigError(cfg.origin() +
                      ": model must be classical, quantum, or both");

  SweepParam sweep_param = SweepParam::none;
  std::vector<double> sweep_values;
  if (cfg.has("sweep.parameter")) {
    const std::string p = cfg.get_string("sweep.parameter");
    if (p == "v_mean_mps") sweep_param = SweepParam::v_mean;
    else if (p == "c3_Jm3") sweep_param = SweepParam::c3;
    else if (p == "slit_width_m") sweep_param = SweepParam::slit_width;
    else
      throw ConfigError(cfg.origin() +
                        ": sweep.parameter must be v_mean_mps, c3_Jm3, or "
                        "slit_width_m");
    sweep_values = cfg.get_double_list("sweep.values");
  }

  const long long n_rays = cfg.get_int_or("monte_carlo.n_rays", 100000);
  const long long seed = cfg.get_int_or("monte_carlo.seed", 1);
  if (n_rays < 1) throw ConfigError(cfg.origin() + ": monte_carlo.n_rays < 1");

  const long long grid_samples = cfg.get_int_or("wave.grid_samples", 16384);
  const double grid_width = cfg.get_double_or("wave.grid_width_m", 0.0);
  const long long n_vel = cfg.get_int_or("wave.n_velocity_bins", 1);
  const bool far_field = cfg.get_bool_or("wave.far_field", false);
  const double ff_half = cfg.get_double_or("wave.far_field_half_range", 1.0);
  const long long ff_bins = cfg.get_int_or("wave.far_field_bins", 801);
  if (n_vel < 1) throw ConfigError(cfg.origin() + ": wave.n_velocity_bins < 1");

  const bool needs_wave = model != ModelChoice::classical;
  if (needs_wave && !far_field) {
    if (grid_samples < 16 || !is_power_of_two(static_cast<std::size_t>(grid_samples)))
      throw ConfigError(cfg.origin() +
                        ": wave.grid_samples must be a power of two >= 16");
    if (!(grid_width > 0.0))
      throw ConfigError(cfg.origin() + ": wave.grid_width_m required for the "
                        "wave model");
  }

  const double det_x_min = cfg.get_double("detector.x_min_m");
  const double det_x_max = cfg.get_double("detector.x_max_m");
  const long long det_bins = cfg.get_int("detector.n_bins");
  if (!(det_x_max > det_x_min) || det_bins < 1)
    throw ConfigError(cfg.origin() + ": empty detector window");

  std::optional<double> reference_period;
  const std::string ref_s = cfg.get_string_or("analysis.reference_period_m", "auto");
  if (ref_s != "auto") {
    FlatConfig tmp;  // reuse numeric parsing with diagnostics
    tmp.set("analysis.reference_period_m", ref_s);
    const double v = tmp.get_double("analysis.reference_period_m");
    if (!(v > 0.0))
      throw ConfigError(cfg.origin() + ": analysis.reference_period_m <= 0");
    reference_period = v;
  }
  const double threshold = cfg.get_double_or("analysis.threshold_fraction", 0.05);
  if (!(threshold > 0.0 && threshold < 1.0))
    throw ConfigError(cfg.origin() + ": analysis.threshold_fraction in (0,1)");
  std::optional<double> min_separation;
  const std::string sep_s = cfg.get_string_or("analysis.min_separation_m", "auto");
  if (sep_s != "auto") {
    FlatConfig tmp;
    tmp.set("analysis.min_separation_m", sep_s);
    min_separation = tmp.get_double("analysis.min_separation_m");
  }

  std::optional<double> acceptance;
  if (cfg.has("classical.acceptance_angle_rad"))
    acceptance = cfg.get_double("classical.acceptance_angle_rad");

  const std::string out_dir = cfg.get_string("output.dir");

  cfg.reject_unconsumed();

  std::map<std::string, std::string> resolved;
  for (const auto& [k, e] : cfg.entries()) resolved[k] = e.value;

  return Scenario{std::move(beam),
                  std::move(geometry),
                  model,
                  sweep_param,
                  std::move(sweep_values),
                  static_cast<std::size_t>(n_rays),
                  static_cast<std::uint64_t>(seed),
                  static_cast<std::size_t>(grid_samples),
                  grid_width,
                  static_cast<std::size_t>(n_vel),
                  far_field,
                  ff_half,
                  static_cast<std::size_t>(ff_bins),
                  det_x_min,
                  det_x_max,
                  static_cast<std::size_t>(det_bins),
                  reference_period,
                  threshold,
                  min_separation,
                  acceptance,
                  out_dir,
                  std::move(resolved)};
}

/// Beam and geometry with one sweep value applied. Every swept value passes
/// through the normal type invariants.
inline std::pair<BeamSpec, Geometry> apply_sweep(const Scenario& s,
                                                 SweepParam param,
                                                 double value) {
  try {
    BeamSpec beam = s.beam;
    if (param == SweepParam::v_mean) {
      beam = BeamSpec(beam.mass / constants::amu_kg, value, beam.v_sigma,
                      beam.source_width, beam.divergence);
    }
    std::vector<Station> stations;
    stations.reserve(s.geometry.stations.size());
    for (const auto& st : s.geometry.stations) {
      const Grating& g = st.grating;
      double c3 = g.c3;
      double slit_width = g.slit_width;
      if (param == SweepParam::c3) c3 = value;
      if (param == SweepParam::slit_width) slit_width = value;
      stations.push_back(Station{
          st.z, Grating(g.period, slit_width, g.depth, g.n_slits, c3,
                        g.effective_width_override)});
    }
    return {std::move(beam), Geometry(std::move(stations), s.geometry.z_detector)};
  } catch (const DomainError& e) {
    throw ConfigError(std::string("sweep value violates an invariant: ") +
                      e.what());
  }
}

}  // namespace slitsim
