#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "slitsim/errors.hpp"
#include "slitsim/grating.hpp"
#include "slitsim/parallel.hpp"
#include "slitsim/physcore.hpp"
#include "slitsim/rng.hpp"

namespace slitsim {

/// One classical trajectory: x(z) = x0 + theta * z at longitudinal speed v.
struct RaySample {
  double x0;     // m
  double theta;  // rad
  double v;      // m/s
};

/// Draws n rays: x0 uniform over the source width, theta uniform over
/// +-divergence, v Gaussian (v_mean, v_sigma) truncated at +-3 sigma.
/// Each ray uses its own counter-based substream of `seed`, so the result is
/// identical regardless of chunking, and the transverse pair (x0, theta) is
/// drawn before v, so it is unchanged between beams that differ only in the
/// velocity distribution.
inline std::vector<RaySample> sample_beam(const BeamSpec& beam, std::size_t n,
                                          std::uint64_t seed) {
  if (n < 1) throw DomainError("sample_beam: need n >= 1");
  std::vector<RaySample> rays(n);
  for (std::size_t i = 0; i < n; ++i) {
    CounterRng rng(seed, i);
    const double x0 = (rng.next_double() - 0.5) * beam.source_width;
    const double theta = (rng.next_double() - 0.5) * 2.0 * beam.divergence;
    const double v = beam.v_sigma > 0.0
                         ? beam.v_mean +
                               beam.v_sigma * rng.next_truncated_gaussian(3.0)
                         : beam.v_mean;
    rays[i] = RaySample{x0, theta, v};
  }
  return rays;
}

struct DetectorWindow {
  double x_min;  // m
  double x_max;  // m
  std::size_t n_bins;
};

struct TraceResult {
  DetectorProfile profile;
  std::uint64_t n_survivors;  // rays transmitted by every station
  std::uint64_t n_overflow;   // survivors outside [x_min, x_max), incl. the
                              // exact right edge
};

namespace detail {

/// Open width a station presents to a ray of speed v in the classical
/// model: manual override if set, else the geometric width narrowed by the
/// wall interaction.
inline double classical_open_width(const Grating& g, double mass, double v,
                                   double acceptance_angle) {
  if (g.effective_width_override) return *g.effective_width_override;
  if (g.c3 == 0.0) return g.slit_width;
  return effective_slit_width(g, mass, v, acceptance_angle);
}

}  // namespace detail

/// Straight-line transport of rays through the stations. A ray survives a
/// station iff its transverse position falls inside one of the open windows
/// (width = classical effective width, centered as the geometric slits);
/// survivors are histogrammed at the detector with left-closed right-open
/// bins. Rays are never bent: all wall physics enters through the effective
/// width. The merged histogram is independent of n_threads.
inline TraceResult trace_rays(std::span<const RaySample> rays,
                              const Geometry& geometry, const BeamSpec& beam,
                              double acceptance_angle,
                              const DetectorWindow& window,
                              unsigned n_threads = 1) {
  if (window.n_bins < 1) throw ConfigError("trace_rays: need at least one bin");
  if (!(window.x_max > window.x_min))
    throw ConfigError("trace_rays: empty detector window");

  // The geometric envelope of the beam must fit in the detector window.
  const double reach =
      0.5 * beam.source_width + beam.divergence * geometry.z_detector;
  if (-reach < window.x_min || reach > window.x_max)
    throw ConfigError("trace_rays: detector window misses the beam envelope");

  const double bin_width =
      (window.x_max - window.x_min) / static_cast<double>(window.n_bins);

  constexpr std::size_t chunk_size = 1 << 16;
  const std::size_t n_chunks = (rays.size() + chunk_size - 1) / chunk_size;

  struct ChunkTally {
    std::vector<std::uint64_t> bins;
    std::uint64_t survivors = 0;
    std::uint64_t overflow = 0;
  };
  std::vector<ChunkTally> tallies(n_chunks);

  for_each_chunk(n_chunks, n_threads, [&](std::size_t c) {
    ChunkTally tally;
    tally.bins.assign(window.n_bins, 0);
    const std::size_t begin = c * chunk_size;
    const std::size_t end = std::min(begin + chunk_size, rays.size());
    for (std::size_t i = begin; i < end; ++i) {
      const RaySample& r = rays[i];
      bool alive = true;
      for (const auto& st : geometry.stations) {
        const double pos = r.x0 + r.theta * st.z;
        const long j = detail::nearest_slit(st.grating, pos);
        if (j < 0) {
          alive = false;
          break;
        }
        const double w_open = detail::classical_open_width(
            st.grating, beam.mass, r.v, acceptance_angle);
        if (std::abs(pos - st.grating.slit_center(
                               static_cast<std::size_t>(j))) > 0.5 * w_open) {
          alive = false;
          break;
        }
      }
      if (!alive) continue;
      ++tally.survivors;
      const double xd = r.x0 + r.theta * geometry.z_detector;
      const double t = (xd - window.x_min) / bin_width;
      if (t >= 0.0 && t < static_cast<double>(window.n_bins))
        ++tally.bins[static_cast<std::size_t>(t)];
      else
        ++tally.overflow;
    }
    tallies[c] = std::move(tally);
  });

  std::vector<double> counts(window.n_bins, 0.0);
  std::uint64_t survivors = 0, overflow = 0;
  for (const auto& tally : tallies) {
    for (std::size_t b = 0; b < window.n_bins; ++b)
      counts[b] += static_cast<double>(tally.bins[b]);
    survivors += tally.survivors;
    overflow += tally.overflow;
  }

  return TraceResult{DetectorProfile(window.x_min, bin_width, std::move(counts)),
                     survivors, overflow};
}

}  // namespace slitsim
