#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "slitsim/errors.hpp"
#include "slitsim/fft.hpp"
#include "slitsim/grating.hpp"
#include "slitsim/physcore.hpp"

namespace slitsim {

enum class VisibilityMethod { fourier, minmax };

struct VisibilityReport {
  double velocity;          // m/s
  double reference_period;  // m
  double visibility;        // in [0, 1]
  VisibilityMethod method;
  int peak_count;
};

namespace detail {

/// Bin index range [first, last) of the largest centered window holding a
/// whole number of reference periods; throws when fewer than 3 fit.
inline std::pair<std::size_t, std::size_t> centered_period_window(
    const DetectorProfile& p, double period) {
  const double k = std::floor(p.span() / period + 1e-9);
  if (k < 3.0)
    throw GuardError("visibility: profile shorter than 3 reference periods");
  const double center = p.x_min + 0.5 * p.span();
  const double half = 0.5 * k * period;
  std::size_t first = p.n_bins(), last = 0;
  for (std::size_t i = 0; i < p.n_bins(); ++i) {
    const double c = p.center(i);
    if (c >= center - half && c < center + half) {
      first = std::min(first, i);
      last = std::max(last, i + 1);
    }
  }
  if (first >= last) throw GuardError("visibility: empty analysis window");
  return {first, last};
}

}  // namespace detail

/// Fringe contrast of a profile against a reference period.
/// fourier: V = 2 |c1| / c0 with c_k the projections onto harmonics of the
/// reference period over a whole number of periods, clamped to [0, 1].
/// minmax: (Imax - Imin) / (Imax + Imin) over period-folded bins.
inline double visibility(const DetectorProfile& profile,
                         double reference_period, VisibilityMethod method) {
  if (!(reference_period > 0.0))
    throw DomainError("visibility: reference period <= 0");
  if (!(profile.total > 0.0))
    throw GuardError("visibility: degenerate input, zero total intensity");
  const auto [first, last] =
      detail::centered_period_window(profile, reference_period);

  if (method == VisibilityMethod::fourier) {
    double c0 = 0.0;
    Complex c1(0.0, 0.0);
    for (std::size_t i = first; i < last; ++i) {
      const double I = profile.counts[i];
      const double ang =
          -2.0 * std::numbers::pi * profile.center(i) / reference_period;
      c0 += I;
      c1 += I * Complex(std::cos(ang), std::sin(ang));
    }
    if (!(c0 > 0.0))
      throw GuardError("visibility: zero intensity in analysis window");
    return std::clamp(2.0 * std::abs(c1) / c0, 0.0, 1.0);
  }

  const std::size_t n_fold = std::max<std::size_t>(
      4, static_cast<std::size_t>(
             std::min(4096.0, std::round(reference_period / profile.bin_width))));
  std::vector<double> sum(n_fold, 0.0);
  std::vector<std::size_t> cnt(n_fold, 0);
  for (std::size_t i = first; i < last; ++i) {
    double ph = std::fmod(profile.center(i) - profile.x_min, reference_period) /
                reference_period;
    if (ph < 0.0) ph += 1.0;
    std::size_t b = static_cast<std::size_t>(ph * static_cast<double>(n_fold));
    if (b >= n_fold) b = n_fold - 1;
    sum[b] += profile.counts[i];
    ++cnt[b];
  }
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (std::size_t b = 0; b < n_fold; ++b) {
    if (cnt[b] == 0) continue;
    const double mean = sum[b] / static_cast<double>(cnt[b]);
    if (!any) {
      lo = hi = mean;
      any = true;
    } else {
      lo = std::min(lo, mean);
      hi = std::max(hi, mean);
    }
  }
  if (!any || hi + lo == 0.0)
    throw GuardError("visibility: zero intensity in analysis window");
  return std::clamp((hi - lo) / (hi + lo), 0.0, 1.0);
}

struct Peak {
  double x;
  double value;
};

/// Local maxima above threshold_fraction of the global maximum, thinned so
/// accepted peaks are pairwise at least min_separation apart. Among
/// conflicting maxima the larger wins; on exact ties the leftmost. Plateaus
/// count once, anchored at their leftmost bin; boundary bins may be peaks.
inline std::vector<Peak> find_principal_maxima(const DetectorProfile& profile,
                                               double threshold_fraction,
                                               double min_separation) {
  if (!(threshold_fraction > 0.0 && threshold_fraction < 1.0))
    throw DomainError("find_principal_maxima: threshold_fraction in (0,1)");
  if (!(min_separation > profile.bin_width))
    throw DomainError("find_principal_maxima: min_separation <= bin_width");

  const auto& I = profile.counts;
  const std::size_t n = I.size();
  double global_max = 0.0;
  for (double v : I) global_max = std::max(global_max, v);
  if (global_max == 0.0) return {};
  const double threshold = threshold_fraction * global_max;

  std::vector<Peak> candidates;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && I[j + 1] == I[i]) ++j;  // plateau [i, j]
    const bool rises = (i == 0) || (I[i - 1] < I[i]);
    const bool falls = (j == n - 1) || (I[j + 1] < I[i]);
    if (rises && falls && I[i] > threshold)
      candidates.push_back({profile.center(i), I[i]});
    i = j + 1;
  }

  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Peak& a, const Peak& b) {
                     if (a.value != b.value) return a.value > b.value;
                     return a.x < b.x;
                   });
  std::vector<Peak> accepted;
  for (const auto& c : candidates) {
    bool ok = true;
    for (const auto& a : accepted) {
      if (std::abs(c.x - a.x) < min_separation) {
        ok = false;
        break;
      }
    }
    if (ok) accepted.push_back(c);
  }
  std::sort(accepted.begin(), accepted.end(),
            [](const Peak& a, const Peak& b) { return a.x < b.x; });
  return accepted;
}

inline int count_principal_maxima(const DetectorProfile& profile,
                                  double threshold_fraction,
                                  double min_separation) {
  return static_cast<int>(
      find_principal_maxima(profile, threshold_fraction, min_separation).size());
}

struct ExtremaReport {
  std::vector<Peak> maxima;
  std::vector<Peak> minima;
};

/// Principal maxima plus the principal minima (found as maxima of the
/// inverted profile), with the same thinning rules.
inline ExtremaReport find_extrema(const DetectorProfile& profile,
                                  double threshold_fraction,
                                  double min_separation) {
  ExtremaReport report;
  report.maxima =
      find_principal_maxima(profile, threshold_fraction, min_separation);
  double global_max = 0.0;
  for (double v : profile.counts) global_max = std::max(global_max, v);
  if (global_max == 0.0) return report;
  std::vector<double> inverted(profile.counts.size());
  for (std::size_t i = 0; i < inverted.size(); ++i)
    inverted[i] = global_max - profile.counts[i];
  DetectorProfile flipped(profile.x_min, profile.bin_width, std::move(inverted));
  for (const auto& p : find_principal_maxima(flipped, threshold_fraction,
                                             min_separation))
    report.minima.push_back({p.x, global_max - p.value});
  return report;
}

/// Period of the dominant nonzero harmonic, refined by quadratic
/// interpolation of the neighboring spectral magnitudes. Requires the peak
/// to stand at least 3x above the median magnitude.
inline double fringe_period(const DetectorProfile& profile) {
  const std::size_t n = profile.n_bins();
  if (n < 8) throw GuardError("fringe_period: too few bins");
  double mean = profile.total / static_cast<double>(n);
  std::vector<Complex> a(n);
  for (std::size_t i = 0; i < n; ++i)
    a[i] = Complex(profile.counts[i] - mean, 0.0);
  const auto spec = fft_any(a, false);

  const std::size_t half = n / 2;
  std::vector<double> mag(half);
  for (std::size_t k = 1; k <= half; ++k) mag[k - 1] = std::abs(spec[k]);
  std::size_t kmax = 1;
  for (std::size_t k = 1; k <= half; ++k)
    if (mag[k - 1] > mag[kmax - 1]) kmax = k;

  std::vector<double> sorted = mag;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2,
                   sorted.end());
  const double median = sorted[sorted.size() / 2];
  if (!(mag[kmax - 1] >= 3.0 * median) || mag[kmax - 1] == 0.0)
    throw GuardError("fringe_period: no dominant harmonic (flat profile)");

  double delta = 0.0;
  if (kmax >= 2 && kmax < half) {
    const double ym = mag[kmax - 2], y0 = mag[kmax - 1], yp = mag[kmax];
    const double denom = ym - 2.0 * y0 + yp;
    if (denom != 0.0) delta = std::clamp(0.5 * (ym - yp) / denom, -0.5, 0.5);
  }
  return profile.span() / (static_cast<double>(kmax) + delta);
}

/// Far-field diagnostic: the squared magnitude of the aperture transform
/// evaluated on a sin(theta) axis, valid at any wavelength-to-period ratio
/// (no paraxial propagation involved). Bin centers carry sin(theta); counts
/// carry intensity.
inline DetectorProfile farfield_profile(const TransmissionMask& mask,
                                        double wavelength, double sin_min,
                                        double sin_max, std::size_t n_bins) {
  if (!(wavelength > 0.0)) throw DomainError("farfield_profile: wavelength <= 0");
  if (!(sin_max > sin_min) || n_bins < 2)
    throw ConfigError("farfield_profile: empty angular window");
  const double bw = (sin_max - sin_min) / static_cast<double>(n_bins);

  // samples with nonzero transmission, with precomputed complex amplitude
  std::vector<double> xs;
  std::vector<Complex> ts;
  xs.reserve(mask.grid.n);
  ts.reserve(mask.grid.n);
  for (std::size_t i = 0; i < mask.grid.n; ++i) {
    if (mask.amplitude[i] == 0.0) continue;
    xs.push_back(mask.grid.x(i));
    ts.push_back(std::polar(mask.amplitude[i], mask.phase[i]));
  }

  std::vector<double> counts(n_bins, 0.0);
  for (std::size_t b = 0; b < n_bins; ++b) {
    const double s = sin_min + (static_cast<double>(b) + 0.5) * bw;
    const double kx = 2.0 * std::numbers::pi * s / wavelength;
    Complex acc(0.0, 0.0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double ang = -kx * xs[i];
      acc += ts[i] * Complex(std::cos(ang), std::sin(ang));
    }
    counts[b] = std::norm(acc * mask.grid.dx);
  }
  return DetectorProfile(sin_min, bw, std::move(counts));
}

}  // namespace slitsim
