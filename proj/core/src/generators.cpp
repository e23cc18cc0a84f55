#include "mmslab/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mmslab/error.hpp"

namespace mmslab {
namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

std::size_t cells_for(double length, double pitch) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(length / pitch - 1e-9)));
}

double cos2(double x) {
  const double c = std::cos(x);
  return c * c;
}

std::string bead_key(std::size_t k, const char* field) {
  return "bead" + std::to_string(k + 1) + "." + field;
}

}  // namespace

FiniteMMS segment_space(double pitch) {
  require(pitch > 0.0 && pitch < kHalfPi, "segment pitch must lie in (0, pi/2)");
  FiniteMMS s = necklace(NecklaceParams{{}, pitch, 8});
  Provenance meta = s.meta();
  meta.generator = "segment";
  return FiniteMMS({s.points().begin(), s.points().end()},
                   {s.distances().begin(), s.distances().end()},
                   {s.weights().begin(), s.weights().end()}, std::move(meta));
}

FiniteMMS circle_space(double radius, std::size_t count) {
  require(radius > 0.0, "circle radius must be positive");
  require(count >= 3, "circle needs at least 3 cells");
  const double step = 2.0 * std::numbers::pi / static_cast<double>(count);
  std::vector<PointRecord> points(count);
  std::vector<double> dist(count * count);
  for (std::size_t i = 0; i < count; ++i) {
    const double theta = step * static_cast<double>(i);
    points[i] = {static_cast<int>(i), {radius * std::cos(theta), radius * std::sin(theta)}, {}};
    for (std::size_t j = 0; j < count; ++j) {
      const std::size_t delta = i > j ? i - j : j - i;
      dist[i * count + j] = radius * step * static_cast<double>(std::min(delta, count - delta));
    }
  }
  Provenance meta{"circle", {{"radius", radius}, {"count", static_cast<double>(count)}},
                  radius * step};
  return FiniteMMS(std::move(points), std::move(dist),
                   std::vector<double>(count, radius * step), std::move(meta));
}

std::size_t hawaiian_index(std::size_t res, std::size_t k, std::size_t j) {
  return 1 + (k - 1) * (res - 1) + (j - 1);
}

std::vector<std::size_t> hawaiian_reflection(std::size_t n, std::size_t res, std::size_t k) {
  require(k >= 1 && k <= n, "circle index out of range");
  std::vector<std::size_t> perm(1 + n * (res - 1));
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  for (std::size_t j = 1; j < res; ++j) {
    perm[hawaiian_index(res, k, j)] = hawaiian_index(res, k, res - j);
  }
  return perm;
}

FiniteMMS hawaiian_truncation(std::size_t n, std::size_t res) {
  require(n >= 1, "earring needs at least one circle");
  require(res >= 3, "earring needs at least 3 cells per circle");
  const std::size_t size = 1 + n * (res - 1);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(res);

  std::vector<PointRecord> points(size);
  std::vector<double> weights(size, 0.0);
  std::vector<std::size_t> circle(size, 0);
  std::vector<std::size_t> pos(size, 0);
  std::vector<double> to_base(size, 0.0);
  points[0] = {0, {0.0, 0.0}, "base"};
  for (std::size_t k = 1; k <= n; ++k) {
    const double R = 1.0 / static_cast<double>(k * k);
    weights[0] += R * step;
    for (std::size_t j = 1; j < res; ++j) {
      const std::size_t i = hawaiian_index(res, k, j);
      const double theta = step * static_cast<double>(j);
      points[i] = {static_cast<int>(i), {R - R * std::cos(theta), R * std::sin(theta)},
                   "circle" + std::to_string(k)};
      weights[i] = R * step;
      circle[i] = k;
      pos[i] = j;
      to_base[i] = R * step * static_cast<double>(std::min(j, res - j));
    }
  }

  std::vector<double> dist(size * size, 0.0);
  for (std::size_t a = 0; a < size; ++a) {
    for (std::size_t b = a + 1; b < size; ++b) {
      double d;
      if (circle[a] != 0 && circle[a] == circle[b]) {
        const double R = 1.0 / static_cast<double>(circle[a] * circle[a]);
        const std::size_t delta = pos[b] > pos[a] ? pos[b] - pos[a] : pos[a] - pos[b];
        d = R * step * static_cast<double>(std::min(delta, res - delta));
      } else {
        d = to_base[a] + to_base[b];
      }
      dist[a * size + b] = dist[b * size + a] = d;
    }
  }
  const double Rn = 1.0 / static_cast<double>(n * n);
  Provenance meta{"earring", {{"n", static_cast<double>(n)}, {"res", static_cast<double>(res)}},
                  Rn * step};
  return FiniteMMS(std::move(points), std::move(dist), std::move(weights), std::move(meta));
}

void check_necklace_params(const NecklaceParams& params) {
  require(params.pitch > 0.0 && params.pitch < kHalfPi, "necklace pitch must lie in (0, pi/2)");
  require(params.fiber_cells >= 1, "fiber_cells must be positive");
  for (std::size_t k = 0; k < params.beads.size(); ++k) {
    const Bead& b = params.beads[k];
    require(b.r > 0.0 && b.r <= 1.0, "bead size must lie in (0, 1]");
    require(b.x >= b.r / 4.0 && b.x <= kHalfPi - b.r / 4.0,
            "bead " + std::to_string(k + 1) + " does not fit inside [0, pi/2]");
    if (k > 0) {
      const Bead& p = params.beads[k - 1];
      require(p.x + p.r / 4.0 < b.x - b.r / 4.0,
              "beads must be sorted by position and pairwise disjoint");
    }
  }
}

double diamond_half_height(const Bead& bead, double x) {
  return std::max(0.0, (bead.r / 4.0 - std::abs(x - bead.x)) / 9.0);
}

NecklaceLayout necklace_layout(const NecklaceParams& params) {
  check_necklace_params(params);
  NecklaceLayout layout;
  layout.params = params;
  layout.fibers.resize(params.beads.size());

  auto add_segment = [&](double lo, double hi) {
    if (hi - lo <= 1e-12) return;
    const std::size_t m = cells_for(hi - lo, params.pitch);
    const double w = (hi - lo) / static_cast<double>(m);
    for (std::size_t i = 0; i < m; ++i) {
      NecklaceCell c;
      c.x = lo + (static_cast<double>(i) + 0.5) * w;
      c.dx = w;
      layout.segment_cells.push_back(layout.cells.size());
      layout.cells.push_back(c);
    }
  };

  double left = 0.0;
  for (std::size_t k = 0; k < params.beads.size(); ++k) {
    const Bead& b = params.beads[k];
    const double lo = b.x - b.r / 4.0;
    const double hi = b.x + b.r / 4.0;
    add_segment(left, lo);
    const std::size_t cols = cells_for(hi - lo, params.pitch);
    const double w = (hi - lo) / static_cast<double>(cols);
    const std::size_t m = params.fiber_cells;
    for (std::size_t f = 0; f < cols; ++f) {
      NecklaceFiber fiber;
      fiber.x = lo + (static_cast<double>(f) + 0.5) * w;
      fiber.half_height = diamond_half_height(b, fiber.x);
      const double dy = 2.0 * fiber.half_height / static_cast<double>(m);
      for (std::size_t j = 0; j < m; ++j) {
        NecklaceCell c;
        c.x = fiber.x;
        c.y = -fiber.half_height + (static_cast<double>(j) + 0.5) * dy;
        c.dx = w;
        c.dy = dy;
        c.bead = static_cast<int>(k);
        c.fiber = f;
        c.ycell = j;
        fiber.cells.push_back(layout.cells.size());
        layout.cells.push_back(c);
      }
      layout.fibers[k].push_back(std::move(fiber));
    }
    left = hi;
  }
  add_segment(left, kHalfPi);
  return layout;
}

NecklaceLayout necklace_layout(const FiniteMMS& space) {
  const Provenance& meta = space.meta();
  require(meta.generator == "necklace" || meta.generator == "segment",
          "space was not produced by the necklace generator");
  auto param = [&](const std::string& key) {
    const auto it = meta.params.find(key);
    if (it == meta.params.end()) fail(ErrorCode::kFormat, "necklace meta lacks " + key);
    return it->second;
  };
  NecklaceParams params;
  params.pitch = param("requested_pitch");
  params.fiber_cells = static_cast<std::size_t>(param("fiber_cells"));
  const auto beads = static_cast<std::size_t>(param("beads"));
  for (std::size_t k = 0; k < beads; ++k) {
    params.beads.push_back({param(bead_key(k, "x")), param(bead_key(k, "r"))});
  }
  NecklaceLayout layout = necklace_layout(params);
  if (layout.cells.size() != space.size()) {
    fail(ErrorCode::kFormat, "necklace meta does not match the point count");
  }
  return layout;
}

FiniteMMS necklace(const NecklaceParams& params) {
  const NecklaceLayout layout = necklace_layout(params);
  const std::size_t n = layout.cells.size();
  std::vector<PointRecord> points(n);
  std::vector<double> weights(n);
  double max_width = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const NecklaceCell& c = layout.cells[i];
    points[i] = {static_cast<int>(i), {c.x, c.y},
                 c.bead < 0 ? "segment" : "diamond" + std::to_string(c.bead + 1)};
    const double share = c.bead < 0 ? 1.0 : 1.0 / static_cast<double>(params.fiber_cells);
    weights[i] = cos2(c.x) * c.dx * share;
    max_width = std::max(max_width, c.dx);
  }

  // Paths between different pieces pass through diamond vertices, where the
  // fiber has height zero; the boundary slope 1/9 makes |dy| <= |dx| there.
  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const NecklaceCell& a = layout.cells[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      const NecklaceCell& b = layout.cells[j];
      double d = std::abs(a.x - b.x);
      if (a.bead >= 0 && a.bead == b.bead) d = std::max(d, std::abs(a.y - b.y));
      dist[i * n + j] = dist[j * n + i] = d;
    }
  }

  Provenance meta;
  meta.generator = "necklace";
  meta.pitch = max_width;
  meta.params["requested_pitch"] = params.pitch;
  meta.params["fiber_cells"] = static_cast<double>(params.fiber_cells);
  meta.params["beads"] = static_cast<double>(params.beads.size());
  for (std::size_t k = 0; k < params.beads.size(); ++k) {
    meta.params[bead_key(k, "x")] = params.beads[k].x;
    meta.params[bead_key(k, "r")] = params.beads[k].r;
  }
  return FiniteMMS(std::move(points), std::move(dist), std::move(weights), std::move(meta));
}

FiniteMMS euclidean_ball_grid(int k, double r, double pitch) {
  require(k >= 1 && k <= 3, "ball grid dimension must be 1, 2 or 3");
  require(r > 0.0 && pitch > 0.0, "ball radius and pitch must be positive");
  const long span = static_cast<long>(std::floor(r / pitch + 1e-9));
  const double limit = r * (1.0 + 1e-12);
  std::vector<PointRecord> points;
  const long ylim = k >= 2 ? span : 0;
  const long zlim = k >= 3 ? span : 0;
  for (long a = -span; a <= span; ++a) {
    for (long b = -ylim; b <= ylim; ++b) {
      for (long c = -zlim; c <= zlim; ++c) {
        std::vector<double> z{a * pitch, b * pitch, c * pitch};
        z.resize(static_cast<std::size_t>(k));
        double norm2 = 0.0;
        for (double v : z) norm2 += v * v;
        if (std::sqrt(norm2) <= limit) {
          points.push_back({static_cast<int>(points.size()), std::move(z), {}});
        }
      }
    }
  }
  const std::size_t n = points.size();
  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double acc = 0.0;
      for (int c = 0; c < k; ++c) {
        const double diff = points[i].coords[c] - points[j].coords[c];
        acc += diff * diff;
      }
      dist[i * n + j] = dist[j * n + i] = std::sqrt(acc);
    }
  }
  Provenance meta{"ball", {{"k", static_cast<double>(k)}, {"r", r}}, pitch};
  return FiniteMMS(std::move(points), std::move(dist),
                   std::vector<double>(n, std::pow(pitch, k)), std::move(meta));
}

}  // namespace mmslab
