#include "mmslab/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mmslab/error.hpp"

namespace mmslab {

FiniteMMS::FiniteMMS(std::vector<PointRecord> points, std::vector<double> dist,
                     std::vector<double> weights, Provenance meta)
    : n_(weights.size()),
      points_(std::move(points)),
      dist_(std::move(dist)),
      weights_(std::move(weights)),
      meta_(std::move(meta)) {
  if (dist_.size() != n_ * n_) {
    fail(ErrorCode::kFormat, "distance matrix has " + std::to_string(dist_.size()) +
                                 " entries, expected " + std::to_string(n_ * n_));
  }
  if (points_.empty()) {
    points_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) points_[i].id = static_cast<int>(i);
  } else if (points_.size() != n_) {
    fail(ErrorCode::kFormat, "point list and weight list differ in length");
  }
}

double FiniteMMS::total_mass() const noexcept {
  return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

double FiniteMMS::diameter() const noexcept {
  double diam = 0.0;
  for (double v : dist_) diam = std::max(diam, v);
  return diam;
}

double FiniteMMS::mass_of(std::span<const std::size_t> indices) const noexcept {
  double mass = 0.0;
  for (std::size_t i : indices) mass += weights_[i];
  return mass;
}

const char* to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::kNonFinite:
      return "non_finite";
    case Violation::Kind::kNegativeDistance:
      return "negative_distance";
    case Violation::Kind::kNonzeroDiagonal:
      return "nonzero_diagonal";
    case Violation::Kind::kAsymmetry:
      return "asymmetry";
    case Violation::Kind::kTriangle:
      return "triangle";
    case Violation::Kind::kNonPositiveWeight:
      return "non_positive_weight";
  }
  return "unknown";
}

SpaceDiagnostics validate_space(const FiniteMMS& space, double tol,
                                std::size_t max_reported) {
  SpaceDiagnostics diag;
  const std::size_t n = space.size();
  auto report = [&](Violation v) {
    ++diag.violation_count;
    if (diag.violations.size() < max_reported) diag.violations.push_back(v);
  };

  for (std::size_t i = 0; i < n; ++i) {
    const double w = space.weight(i);
    if (!std::isfinite(w)) {
      report({Violation::Kind::kNonFinite, i, i, i, w});
    } else if (w <= 0.0) {
      report({Violation::Kind::kNonPositiveWeight, i, i, i, w});
    }
  }

  bool finite = true;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double dij = space.d(i, j);
      if (!std::isfinite(dij)) {
        report({Violation::Kind::kNonFinite, i, j, j, dij});
        finite = false;
        continue;
      }
      if (i == j) {
        if (std::abs(dij) > tol) report({Violation::Kind::kNonzeroDiagonal, i, i, i, dij});
        continue;
      }
      if (dij < -tol) report({Violation::Kind::kNegativeDistance, i, j, j, -dij});
      if (i < j) {
        const double asym = std::abs(dij - space.d(j, i));
        if (asym > tol) report({Violation::Kind::kAsymmetry, i, j, j, asym});
      }
    }
  }
  if (!finite) return diag;

  // d(i,k) <= d(i,j) + d(j,k); the k loop runs over contiguous rows.
  std::vector<double> defect(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row_i = space.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double dij = row_i[j];
      const auto row_j = space.row(j);
      double worst = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        defect[k] = row_i[k] - dij - row_j[k];
        worst = std::max(worst, defect[k]);
      }
      if (worst > diag.worst_triangle_defect) diag.worst_triangle_defect = worst;
      if (worst > tol) {
        for (std::size_t k = 0; k < n; ++k) {
          if (defect[k] > tol && i < k) {
            report({Violation::Kind::kTriangle, i, j, k, defect[k]});
          }
        }
      }
    }
  }
  return diag;
}

FiniteMMS scale(const FiniteMMS& space, double factor) {
  require(factor > 0.0 && std::isfinite(factor), "scale factor must be positive");
  std::vector<double> dist(space.distances().begin(), space.distances().end());
  for (double& v : dist) v /= factor;
  std::vector<PointRecord> points(space.points().begin(), space.points().end());
  Provenance meta = space.meta();
  meta.pitch /= factor;
  meta.params["scale_factor"] =
      factor * (meta.params.count("scale_factor") ? meta.params["scale_factor"] : 1.0);
  return FiniteMMS(std::move(points), std::move(dist),
                   std::vector<double>(space.weights().begin(), space.weights().end()),
                   std::move(meta));
}

std::vector<std::size_t> ball_indices(const FiniteMMS& space, std::size_t center,
                                      double radius, BallKind kind) {
  require(center < space.size(), "ball center out of range");
  require(radius > 0.0, "ball radius must be positive");
  // Relative slack keeps ball membership stable under scaling round-off.
  const double slack = 1e-12 * radius;
  std::vector<std::size_t> idx;
  const auto row = space.row(center);
  for (std::size_t j = 0; j < space.size(); ++j) {
    const bool inside =
        kind == BallKind::kClosed ? row[j] <= radius + slack : row[j] < radius - slack;
    if (inside) idx.push_back(j);
  }
  return idx;
}

FiniteMMS restrict_to(const FiniteMMS& space, std::span<const std::size_t> indices) {
  const std::size_t m = indices.size();
  std::vector<PointRecord> points;
  std::vector<double> dist(m * m);
  std::vector<double> weights;
  points.reserve(m);
  weights.reserve(m);
  for (std::size_t a = 0; a < m; ++a) {
    require(indices[a] < space.size(), "restriction index out of range");
    points.push_back(space.point(indices[a]));
    weights.push_back(space.weight(indices[a]));
    for (std::size_t b = 0; b < m; ++b) dist[a * m + b] = space.d(indices[a], indices[b]);
  }
  Provenance meta = space.meta();
  meta.generator += meta.generator.empty() ? "restriction" : "/restriction";
  return FiniteMMS(std::move(points), std::move(dist), std::move(weights), std::move(meta));
}

FiniteMMS ball(const FiniteMMS& space, std::size_t center, double radius, BallKind kind) {
  const auto idx = ball_indices(space, center, radius, kind);
  if (idx.empty()) fail(ErrorCode::kPrecondition, "ball is empty");
  return restrict_to(space, idx);
}

std::vector<double> nearest_neighbor_distances(const FiniteMMS& space) {
  const std::size_t n = space.size();
  std::vector<double> nn(n, n > 1 ? std::numeric_limits<double>::infinity() : 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = space.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && row[j] < nn[i]) nn[i] = row[j];
    }
  }
  return nn;
}

double effective_pitch(const FiniteMMS& space) {
  if (space.meta().pitch > 0.0) return space.meta().pitch;
  const auto nn = nearest_neighbor_distances(space);
  double pitch = 0.0;
  for (double v : nn) pitch = std::max(pitch, v);
  return pitch;
}

}  // namespace mmslab
