#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "mmslab/space.hpp"

namespace mmslab::testing {

// Points in the unit square with Euclidean distances and the given weights
// (uniform when empty).
inline FiniteMMS random_planar(std::mt19937_64& rng, std::size_t n,
                               std::vector<double> weights = {}) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<PointRecord> pts(n);
  for (std::size_t i = 0; i < n; ++i) pts[i] = {static_cast<int>(i), {unit(rng), unit(rng)}, ""};
  std::vector<double> dist(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      dist[i * n + j] = std::hypot(pts[i].coords[0] - pts[j].coords[0],
                                   pts[i].coords[1] - pts[j].coords[1]);
    }
  }
  if (weights.empty()) weights.assign(n, 1.0 / static_cast<double>(n));
  return FiniteMMS(std::move(pts), std::move(dist), std::move(weights), {});
}

inline FiniteMMS from_matrix(std::vector<std::vector<double>> d, std::vector<double> w = {}) {
  const std::size_t n = d.size();
  std::vector<double> flat;
  for (const auto& row : d) flat.insert(flat.end(), row.begin(), row.end());
  if (w.empty()) w.assign(n, 1.0);
  return FiniteMMS({}, std::move(flat), std::move(w), {});
}

// Regular polygon with chord distances.
inline FiniteMMS polygon(std::size_t n, double radius = 1.0) {
  std::vector<std::vector<double>> d(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double a = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n);
      const double b = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(n);
      d[i][j] = std::hypot(radius * (std::cos(a) - std::cos(b)), radius * (std::sin(a) - std::sin(b)));
    }
  }
  return from_matrix(d);
}

}  // namespace mmslab::testing
