#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "slitsim/analysis.hpp"
#include "slitsim/errors.hpp"
#include "slitsim/raytrace.hpp"
#include "slitsim/scenario.hpp"
#include "slitsim/version.hpp"
#include "slitsim/wavefield.hpp"

namespace slitsim {

struct RunOptions {
  unsigned threads = 1;
};

struct RunSummary {
  std::vector<std::string> files;
};

namespace detail {

/// Shortest round-tripping decimal form; locale-independent, so CSV bodies
/// are byte-stable across machines and thread counts.
inline std::string fmt(double v) {
  std::array<char, 40> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

inline std::string fmt(std::int64_t v) { return std::to_string(v); }

inline void write_text_file(const std::filesystem::path& path,
                            const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write output file: " + path.string());
  out << body;
}

inline void write_profile_csv(const std::filesystem::path& path,
                              const DetectorProfile& p, bool far_field) {
  std::string body = far_field ? "sin_theta,intensity,normalized_intensity\n"
                               : "x_m,intensity,normalized_intensity\n";
  double peak = 0.0;
  for (double c : p.counts) peak = std::max(peak, c);
  for (std::size_t i = 0; i < p.n_bins(); ++i) {
    const double norm = peak > 0.0 ? p.counts[i] / peak : 0.0;
    body += fmt(p.center(i));
    body += ',';
    body += fmt(p.counts[i]);
    body += ',';
    body += fmt(norm);
    body += '\n';
  }
  write_text_file(path, body);
}

struct PointRow {
  double sweep_value;
  double v_fourier;
  double v_minmax;
  double period;
  int peaks;
};

}  // namespace detail

/// Observables of one detector profile: both visibility definitions, the
/// fringe period actually used, and the principal-maximum count.
inline detail::PointRow analyze_profile(const Scenario& s,
                                        const DetectorProfile& profile,
                                        double sweep_value) {
  const double period =
      s.reference_period ? *s.reference_period : fringe_period(profile);
  const double v_f = visibility(profile, period, VisibilityMethod::fourier);
  const double v_mm = visibility(profile, period, VisibilityMethod::minmax);
  const double min_sep = s.min_separation
                             ? *s.min_separation
                             : std::max(0.5 * period, 1.5 * profile.bin_width);
  const int peaks =
      count_principal_maxima(profile, s.threshold_fraction, min_sep);
  return {sweep_value, v_f, v_mm, period, peaks};
}

/// Classical shadow profile for one sweep point.
inline DetectorProfile classical_profile(const Scenario& s,
                                         const BeamSpec& beam,
                                         const Geometry& geometry,
                                         unsigned threads) {
  const auto rays = sample_beam(beam, s.n_rays, s.seed);
  const double acceptance = s.acceptance_angle.value_or(beam.divergence);
  const auto result = trace_rays(
      rays, geometry, beam, acceptance,
      DetectorWindow{s.det_x_min, s.det_x_max, s.det_bins}, threads);
  return result.profile;
}

namespace detail {

/// Bins whose centers fall inside [x_min, x_max]; the wave grid is usually
/// much wider than the detector of interest.
inline DetectorProfile crop_profile(const DetectorProfile& p, double x_min,
                                    double x_max) {
  std::vector<double> counts;
  double new_x_min = p.x_min;
  bool first = true;
  for (std::size_t i = 0; i < p.n_bins(); ++i) {
    const double c = p.center(i);
    if (c < x_min || c > x_max) continue;
    if (first) {
      new_x_min = p.x_min + static_cast<double>(i) * p.bin_width;
      first = false;
    }
    counts.push_back(p.counts[i]);
  }
  if (counts.empty())
    throw ConfigError("detector window lies outside the wave grid");
  return DetectorProfile(new_x_min, p.bin_width, std::move(counts));
}

}  // namespace detail

/// Quantum profile for one sweep point: velocity-averaged Fresnel pipeline,
/// or the direct angular-spectrum diagnostic when far-field mode is on
/// (the regime wavelength ~ period, where paraxial propagation fails).
inline DetectorProfile quantum_profile(const Scenario& s, const BeamSpec& beam,
                                       const Geometry& geometry,
                                       unsigned threads) {
  if (!s.far_field) {
    const Grid1D grid = Grid1D::centered(s.grid_width, s.grid_samples);
    return detail::crop_profile(
        velocity_average(beam, geometry, grid, s.n_velocity_bins, threads),
        s.det_x_min, s.det_x_max);
  }
  if (geometry.stations.size() != 1)
    throw ConfigError("far-field mode supports exactly one grating station");
  const Grating& g = geometry.stations.front().grating;
  const double span =
      static_cast<double>(g.n_slits + 2) * g.period;
  const std::size_t n = static_cast<std::size_t>(
      std::ceil(span / (g.slit_width / 16.0)));
  const Grid1D grid = Grid1D::centered(span, n);

  const auto nodes = velocity_nodes(beam.v_mean, beam.v_sigma, s.n_velocity_bins);
  std::vector<double> counts;
  double x_min = 0.0, bw = 0.0;
  for (const auto& node : nodes) {
    const double lambda = de_broglie_wavelength(beam.mass, node.x);
    const auto mask = vdw_phase_mask(g, node.x, grid);
    const auto p = farfield_profile(mask, lambda, -s.far_field_half_range,
                                    s.far_field_half_range, s.far_field_bins);
    if (counts.empty()) {
      counts.assign(p.n_bins(), 0.0);
      x_min = p.x_min;
      bw = p.bin_width;
    }
    for (std::size_t b = 0; b < counts.size(); ++b)
      counts[b] += node.w * p.counts[b];
  }
  return DetectorProfile(x_min, bw, std::move(counts));
}

namespace detail {

struct ModelOutputs {
  std::vector<PointRow> rows;
  std::vector<DetectorProfile> profiles;
};

inline std::string point_tag(const Scenario& s, std::size_t idx) {
  if (s.sweep_param == SweepParam::none) return "";
  return "_s" + std::to_string(idx);
}

inline ModelOutputs run_model(const Scenario& s, ModelChoice which,
                              unsigned threads) {
  ModelOutputs out;
  const std::size_t n_points =
      s.sweep_param == SweepParam::none ? 1 : s.sweep_values.size();
  for (std::size_t i = 0; i < n_points; ++i) {
    const double value =
        s.sweep_param == SweepParam::none ? 0.0 : s.sweep_values[i];
    const auto [beam, geometry] = s.sweep_param == SweepParam::none
                                      ? std::pair{s.beam, s.geometry}
                                      : apply_sweep(s, s.sweep_param, value);
    DetectorProfile profile =
        which == ModelChoice::classical
            ? classical_profile(s, beam, geometry, threads)
            : quantum_profile(s, beam, geometry, threads);
    out.rows.push_back(analyze_profile(s, profile, value));
    out.profiles.push_back(std::move(profile));
  }
  return out;
}

inline void write_visibility_csv(const std::filesystem::path& path,
                                 const std::vector<PointRow>& rows) {
  std::string body =
      "sweep_value,visibility_fourier,visibility_minmax,fringe_period_m,"
      "peak_count\n";
  for (const auto& r : rows) {
    body += fmt(r.sweep_value);
    body += ',';
    body += fmt(r.v_fourier);
    body += ',';
    body += fmt(r.v_minmax);
    body += ',';
    body += fmt(r.period);
    body += ',';
    body += std::to_string(r.peaks);
    body += '\n';
  }
  write_text_file(path, body);
}

inline void write_extrema_csv(const std::filesystem::path& path,
                              const ExtremaReport& e, bool far_field) {
  std::string body = far_field ? "kind,sin_theta,intensity\n"
                               : "kind,x_m,intensity\n";
  for (const auto& p : e.maxima) {
    body += "max,";
    body += fmt(p.x);
    body += ',';
    body += fmt(p.value);
    body += '\n';
  }
  for (const auto& p : e.minima) {
    body += "min,";
    body += fmt(p.x);
    body += ',';
    body += fmt(p.value);
    body += '\n';
  }
  write_text_file(path, body);
}

inline void write_manifest(const std::filesystem::path& path,
                           const Scenario& s, const RunOptions& options,
                           const std::string& command, double wall_time_s,
                           const std::vector<std::string>& outputs) {
  nlohmann::json j;
  j["artifact"] = "slitsim";
  j["version"] = version;
  j["command"] = command;
  j["seed"] = s.seed;
  j["threads"] = options.threads;
  j["wall_time_s"] = wall_time_s;
  j["resolved_config"] = s.resolved;
  j["outputs"] = outputs;
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace detail

/// Executes the configured models over the sweep and writes, per model and
/// sweep point, profile_<tag>.csv plus a per-model visibility table and the
/// run manifest.
inline RunSummary run_scenario(const Scenario& s, const RunOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  namespace fs = std::filesystem;
  fs::create_directories(s.out_dir);
  RunSummary summary;

  std::vector<std::pair<ModelChoice, std::string>> models;
  if (s.model == ModelChoice::classical || s.model == ModelChoice::both)
    models.emplace_back(ModelChoice::classical, "classical");
  if (s.model == ModelChoice::quantum || s.model == ModelChoice::both)
    models.emplace_back(ModelChoice::quantum, "quantum");

  for (const auto& [which, name] : models) {
    const auto out = detail::run_model(s, which, options.threads);
    const bool far_field = which == ModelChoice::quantum && s.far_field;
    for (std::size_t i = 0; i < out.profiles.size(); ++i) {
      const std::string file =
          "profile_" + name + detail::point_tag(s, i) + ".csv";
      detail::write_profile_csv(fs::path(s.out_dir) / file, out.profiles[i],
                                far_field);
      summary.files.push_back(file);
    }
    const std::string vis_file = "visibility_" + name + ".csv";
    detail::write_visibility_csv(fs::path(s.out_dir) / vis_file, out.rows);
    summary.files.push_back(vis_file);
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  detail::write_manifest(fs::path(s.out_dir) / "run_manifest.json", s, options,
                         "simulate", wall, summary.files);
  summary.files.push_back("run_manifest.json");
  return summary;
}

/// Side-by-side model comparison over a velocity sweep: everything
/// run_scenario writes, plus compare.csv and per-point extremum-position
/// tables for each model.
inline RunSummary compare_models(const Scenario& s, const RunOptions& options) {
  if (s.model != ModelChoice::both)
    throw ConfigError("compare requires model = both");
  if (s.sweep_param != SweepParam::v_mean)
    throw ConfigError("compare requires a sweep over v_mean_mps");

  const auto t0 = std::chrono::steady_clock::now();
  namespace fs = std::filesystem;
  fs::create_directories(s.out_dir);
  RunSummary summary;

  const auto classical = detail::run_model(s, ModelChoice::classical,
                                           options.threads);
  const auto quantum = detail::run_model(s, ModelChoice::quantum,
                                         options.threads);

  for (std::size_t i = 0; i < classical.profiles.size(); ++i) {
    const std::string tag = detail::point_tag(s, i);
    detail::write_profile_csv(fs::path(s.out_dir) / ("profile_classical" + tag + ".csv"),
                              classical.profiles[i], false);
    detail::write_profile_csv(fs::path(s.out_dir) / ("profile_quantum" + tag + ".csv"),
                              quantum.profiles[i], s.far_field);
    summary.files.push_back("profile_classical" + tag + ".csv");
    summary.files.push_back("profile_quantum" + tag + ".csv");
  }
  detail::write_visibility_csv(fs::path(s.out_dir) / "visibility_classical.csv",
                               classical.rows);
  detail::write_visibility_csv(fs::path(s.out_dir) / "visibility_quantum.csv",
                               quantum.rows);
  summary.files.push_back("visibility_classical.csv");
  summary.files.push_back("visibility_quantum.csv");

  std::string body =
      "sweep_value,visibility_classical,visibility_quantum,peaks_classical,"
      "peaks_quantum\n";
  for (std::size_t i = 0; i < classical.rows.size(); ++i) {
    body += detail::fmt(classical.rows[i].sweep_value);
    body += ',';
    body += detail::fmt(classical.rows[i].v_fourier);
    body += ',';
    body += detail::fmt(quantum.rows[i].v_fourier);
    body += ',';
    body += std::to_string(classical.rows[i].peaks);
    body += ',';
    body += std::to_string(quantum.rows[i].peaks);
    body += '\n';
  }
  detail::write_text_file(fs::path(s.out_dir) / "compare.csv", body);
  summary.files.push_back("compare.csv");

  for (std::size_t i = 0; i < classical.rows.size(); ++i) {
    const std::string tag = detail::point_tag(s, i);
    for (const auto& [rows, profiles, name, ff] :
         {std::tuple{&classical.rows, &classical.profiles,
                     std::string("classical"), false},
          std::tuple{&quantum.rows, &quantum.profiles, std::string("quantum"),
                     s.far_field}}) {
      const double min_sep =
          s.min_separation
              ? *s.min_separation
              : std::max(0.5 * (*rows)[i].period,
                         1.5 * (*profiles)[i].bin_width);
      const auto extrema =
          find_extrema((*profiles)[i], s.threshold_fraction, min_sep);
      const std::string file = "extrema_" + name + tag + ".csv";
      detail::write_extrema_csv(fs::path(s.out_dir) / file, extrema, ff);
      summary.files.push_back(file);
    }
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  detail::write_manifest(fs::path(s.out_dir) / "run_manifest.json", s, options,
                         "compare", wall, summary.files);
  summary.files.push_back("run_manifest.json");
  return summary;
}

/// Static checks only: type invariants are already enforced by construction;
/// this adds the numerical-guard preconditions that runs would trip at
/// runtime (mask resolution, wave-grid sizing, paraxial guard, detector
/// envelope), without doing any computation.
inline void validate_scenario(const Scenario& s) {
  const std::size_t n_points =
      s.sweep_param == SweepParam::none ? 1 : s.sweep_values.size();
  for (std::size_t i = 0; i < n_points; ++i) {
    const double value =
        s.sweep_param == SweepParam::none ? 0.0 : s.sweep_values[i];
    const auto [beam, geometry] = s.sweep_param == SweepParam::none
                                      ? std::pair{s.beam, s.geometry}
                                      : apply_sweep(s, s.sweep_param, value);

    if (s.model != ModelChoice::quantum) {
      const double reach =
          0.5 * beam.source_width + beam.divergence * geometry.z_detector;
      if (-reach < s.det_x_min || reach > s.det_x_max)
        throw ConfigError("detector window misses the beam envelope");
      const double acceptance = s.acceptance_angle.value_or(beam.divergence);
      for (const auto& st : geometry.stations) {
        if (st.grating.c3 > 0.0 && !st.grating.effective_width_override &&
            !(acceptance > 0.0))
          throw ConfigError(
              "classical model with c3 > 0 needs a positive acceptance angle "
              "(beam divergence or classical.acceptance_angle_rad)");
      }
    }

    if (s.model != ModelChoice::classical) {
      if (s.far_field) {
        if (geometry.stations.size() != 1)
          throw ConfigError("far-field mode supports exactly one station");
      } else {
        const Grid1D grid = Grid1D::centered(s.grid_width, s.grid_samples);
        for (const auto& st : geometry.stations) {
          if (grid.dx > st.grating.slit_width / 16.0 * (1.0 + 1e-12))
            throw GuardError("wave grid under-resolved: need dx <= slit_width/16");
          if (grid.span() < 4.0 * st.grating.illuminated_span())
            throw GuardError(
                "wave grid narrower than 4x the illuminated grating span");
        }
        const double v_slowest = beam.v_mean - 3.0 * beam.v_sigma;
        const double lambda_max = de_broglie_wavelength(beam.mass, v_slowest);
        if (!(lambda_max < 100.0 * grid.dx))
          throw GuardError("paraxial guard: wavelength >= 100 dx at the "
                           "slowest velocity node");
      }
    }
  }
}

}  // namespace slitsim
