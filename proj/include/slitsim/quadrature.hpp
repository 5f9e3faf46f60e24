#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "slitsim/errors.hpp"

namespace slitsim {

struct QuadNode {
  double x;
  double w;
};

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre recurrence.
inline std::vector<QuadNode> gauss_legendre(std::size_t n) {
  if (n < 1) throw DomainError("gauss_legendre: need n >= 1");
  std::vector<QuadNode> nodes(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi *
                        (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = {-x, w};
    nodes[n - 1 - i] = {x, w};
  }
  if (n % 2 == 1) nodes[n / 2].x = 0.0;
  return nodes;
}

/// Quadrature nodes for averaging over a Gaussian velocity distribution
/// truncated at +-3 sigma: Gauss-Legendre abscissae on the truncated
/// interval, weighted by the normal density and renormalized so the weights
/// sum to exactly 1. sigma = 0 or n = 1 degenerates to the single mean node.
inline std::vector<QuadNode> velocity_nodes(double v_mean, double v_sigma,
                                            std::size_t n) {
  if (n < 1) throw DomainError("velocity_nodes: need n >= 1");
  if (v_sigma == 0.0 || n == 1) return {{v_mean, 1.0}};

  const auto gl = gauss_legendre(n);
  std::vector<QuadNode> nodes(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 3.0 * gl[i].x;  // in sigma units
    nodes[i].x = v_mean + v_sigma * t;
    nodes[i].w = gl[i].w * std::exp(-0.5 * t * t);
    sum += nodes[i].w;
  }
  for (auto& nd : nodes) nd.w /= sum;
  return nodes;
}

}  // namespace slitsim
