#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace mmslab {

struct PointRecord {
  int id = 0;
  std::vector<double> coords;  // optional ambient coordinates
  std::string label;
};

// Which generator produced a space and with what parameters. `pitch` is the
// discretization scale that default tolerances are derived from (0 if none).
struct Provenance {
  std::string generator;
  std::map<std::string, double> params;
  double pitch = 0.0;
};

// A finite metric measure space: n points, a dense symmetric distance
// matrix and strictly positive weights. Immutable after construction.
//
// The constructor only checks shapes; metric and measure axioms are
// checked by validate_space so that malformed inputs can be diagnosed
// rather than rejected.
class FiniteMMS {
 public:
  FiniteMMS() = default;
  FiniteMMS(std::vector<PointRecord> points, std::vector<double> dist,
            std::vector<double> weights, Provenance meta = {});

  std::size_t size() const noexcept { return n_; }
  bool empty() const noexcept { return n_ == 0; }

  double d(std::size_t i, std::size_t j) const noexcept { return dist_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const {
    return {dist_.data() + i * n_, n_};
  }
  std::span<const double> distances() const noexcept { return dist_; }

  double weight(std::size_t i) const noexcept { return weights_[i]; }
  std::span<const double> weights() const noexcept { return weights_; }

  const PointRecord& point(std::size_t i) const noexcept { return points_[i]; }
  std::span<const PointRecord> points() const noexcept { return points_; }

  const Provenance& meta() const noexcept { return meta_; }

  double total_mass() const noexcept;
  double diameter() const noexcept;
  double mass_of(std::span<const std::size_t> indices) const noexcept;

 private:
  std::size_t n_ = 0;
  std::vector<PointRecord> points_;
  std::vector<double> dist_;
  std::vector<double> weights_;
  Provenance meta_;
};

struct Violation {
  enum class Kind {
    kNonFinite,
    kNegativeDistance,
    kNonzeroDiagonal,
    kAsymmetry,
    kTriangle,
    kNonPositiveWeight,
  };
  Kind kind;
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t k = 0;
  double amount = 0.0;
};

const char* to_string(Violation::Kind kind);

struct SpaceDiagnostics {
  std::vector<Violation> violations;  // capped at max_reported entries
  std::size_t violation_count = 0;    // uncapped
  double worst_triangle_defect = 0.0;
  bool ok() const noexcept { return violation_count == 0; }
};

SpaceDiagnostics validate_space(const FiniteMMS& space, double tol = 1e-9,
                                std::size_t max_reported = 64);

// Distances divided by factor, weights unchanged: (X, d/factor, m).
FiniteMMS scale(const FiniteMMS& space, double factor);

enum class BallKind { kOpen, kClosed };

std::vector<std::size_t> ball_indices(const FiniteMMS& space, std::size_t center,
                                      double radius, BallKind kind = BallKind::kClosed);

// Sub-space on the given indices (in the given order). Point ids are kept,
// so restricted points can be traced back to the parent space.
FiniteMMS restrict_to(const FiniteMMS& space, std::span<const std::size_t> indices);

FiniteMMS ball(const FiniteMMS& space, std::size_t center, double radius,
               BallKind kind = BallKind::kClosed);

// Distance from each point to its nearest other point (0 for a singleton).
std::vector<double> nearest_neighbor_distances(const FiniteMMS& space);

// Discretization pitch: meta().pitch if recorded, else the largest
// nearest-neighbor distance.
double effective_pitch(const FiniteMMS& space);

}  // namespace mmslab
