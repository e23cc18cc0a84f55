#include "mmslab/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "mmslab/error.hpp"
#include "mmslab/parallel.hpp"

namespace mmslab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Directed Hausdorff-style gap: max over a in A of the distance to the
// nearest b in B; both inputs sorted.
double directed_gap(const std::vector<double>& A, const std::vector<double>& B) {
  double worst = 0.0;
  std::size_t j = 0;
  for (double a : A) {
    while (j + 1 < B.size() && B[j + 1] <= a) ++j;
    double best = std::abs(a - B[j]);
    if (j + 1 < B.size()) best = std::min(best, std::abs(B[j + 1] - a));
    worst = std::max(worst, best);
  }
  return worst;
}

double sorted_hausdorff(const std::vector<double>& A, const std::vector<double>& B) {
  return std::max(directed_gap(A, B), directed_gap(B, A));
}

std::vector<double> sorted_row(const FiniteMMS& s, std::size_t i) {
  const auto row = s.row(i);
  std::vector<double> r(row.begin(), row.end());
  std::sort(r.begin(), r.end());
  return r;
}

std::vector<Eigen::VectorXd> unit_ball_lattice(int k, double pitch) {
  std::vector<Eigen::VectorXd> pts;
  const long span = static_cast<long>(std::floor(1.0 / pitch));
  const long ylim = k >= 2 ? span : 0;
  const long zlim = k >= 3 ? span : 0;
  for (long a = -span; a <= span; ++a) {
    for (long b = -ylim; b <= ylim; ++b) {
      for (long c = -zlim; c <= zlim; ++c) {
        Eigen::Vector3d z(a * pitch, b * pitch, c * pitch);
        if (z.norm() <= 1.0 + 1e-12) pts.push_back(z.head(k));
      }
    }
  }
  return pts;
}

// Upper bound on d_GH between a point set with coordinates phi (already in
// the ball of radius r) and the full ball, for distance matrix dist:
// (dis phi + 2 c) / 2 where c is the covering radius of phi in the ball.
double embedding_bound(const std::vector<double>& dist, const std::vector<Eigen::VectorXd>& phi,
                       int k, double r) {
  const std::size_t n = phi.size();
  double dis = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      dis = std::max(dis, std::abs(dist[i * n + j] - (phi[i] - phi[j]).norm()));
    }
  }
  double cover = 0.0;
  if (k == 1) {
    std::vector<double> t;
    for (const auto& p : phi) t.push_back(p(0));
    std::sort(t.begin(), t.end());
    cover = std::max(t.front() + r, r - t.back());
    for (std::size_t i = 0; i + 1 < t.size(); ++i) cover = std::max(cover, 0.5 * (t[i + 1] - t[i]));
  } else {
    const double pitch = k == 2 ? 1.0 / 16.0 : 1.0 / 8.0;
    for (const auto& z : unit_ball_lattice(k, pitch)) {
      double nearest = kInf;
      for (const auto& p : phi) nearest = std::min(nearest, (r * z - p).norm());
      cover = std::max(cover, nearest);
    }
    cover += r * pitch * std::sqrt(static_cast<double>(k)) / 2.0;
  }
  return 0.5 * (dis + 2.0 * cover);
}

}  // namespace

double correspondence_distortion(const FiniteMMS& X, const FiniteMMS& Y,
                                 const std::vector<std::pair<std::size_t, std::size_t>>& rel) {
  double dis = 0.0;
  for (std::size_t a = 0; a < rel.size(); ++a) {
    for (std::size_t b = a + 1; b < rel.size(); ++b) {
      dis = std::max(dis, std::abs(X.d(rel[a].first, rel[b].first) -
                                   Y.d(rel[a].second, rel[b].second)));
    }
  }
  return dis;
}

GHResult gh_exact(const FiniteMMS& X, const FiniteMMS& Y, std::size_t max_size,
                  std::size_t node_budget) {
  const std::size_t nx = X.size();
  const std::size_t ny = Y.size();
  require(nx > 0 && ny > 0, "GH distance needs nonempty spaces");
  if (nx > max_size || ny > max_size) {
    fail(ErrorCode::kBudgetExceeded, "gh_exact supports at most " + std::to_string(max_size) +
                                         " points per space");
  }
  const double floor_bound = 2.0 * gh_lower_bound(X, Y);
  double best = kInf;
  std::vector<std::pair<std::size_t, std::size_t>> best_rel;
  std::vector<std::pair<std::size_t, std::size_t>> rel;
  std::vector<std::size_t> cover(ny, 0);
  bool done = false;
  bool truncated = false;
  std::size_t nodes = 0;
  auto tick = [&] {
    if (++nodes > node_budget && best < kInf) truncated = done = true;
    return done;
  };

  // A pair (x, y) in a correspondence of distortion D forces the distance
  // rows of x and y within Hausdorff distance D of each other.
  std::vector<double> row_gap(nx * ny);
  {
    std::vector<std::vector<double>> ry(ny);
    for (std::size_t j = 0; j < ny; ++j) ry[j] = sorted_row(Y, j);
    for (std::size_t i = 0; i < nx; ++i) {
      const auto rx = sorted_row(X, i);
      for (std::size_t j = 0; j < ny; ++j) row_gap[i * ny + j] = sorted_hausdorff(rx, ry[j]);
    }
  }

  auto added = [&](std::size_t x, std::size_t y) {
    double dis = row_gap[x * ny + y];
    for (const auto& [i, j] : rel) dis = std::max(dis, std::abs(X.d(x, i) - Y.d(y, j)));
    return dis;
  };
  auto finish = [&](double dis) {
    if (dis < best) {
      best = dis;
      best_rel = rel;
      done = best <= floor_bound * (1.0 + 1e-12) + 1e-15;
    }
  };
  // Candidate partners of `fixed` (an x when by_x, else a y) sorted by the
  // distortion they add, dropping those that cannot beat `best`.
  auto candidates = [&](std::size_t fixed, bool by_x, double dis) {
    std::vector<std::pair<double, std::size_t>> c;
    const std::size_t m = by_x ? ny : nx;
    for (std::size_t o = 0; o < m; ++o) {
      const double nd = std::max(dis, by_x ? added(fixed, o) : added(o, fixed));
      if (nd < best) c.emplace_back(nd, o);
    }
    std::sort(c.begin(), c.end());
    return c;
  };
  std::vector<std::size_t> uncovered;
  auto extend = [&](auto&& self, std::size_t u, double dis) -> void {
    if (tick()) return;
    if (u == uncovered.size()) {
      finish(dis);
      return;
    }
    const std::size_t y = uncovered[u];
    for (const auto& [nd, x] : candidates(y, false, dis)) {
      if (done || nd >= best) break;
      rel.emplace_back(x, y);
      self(self, u + 1, nd);
      rel.pop_back();
    }
  };
  auto assign = [&](auto&& self, std::size_t x, double dis) -> void {
    if (tick()) return;
    if (x == nx) {
      uncovered.clear();
      for (std::size_t y = 0; y < ny; ++y) {
        if (!cover[y]) uncovered.push_back(y);
      }
      extend(extend, 0, dis);
      return;
    }
    for (const auto& [nd, y] : candidates(x, true, dis)) {
      if (done || nd >= best) break;
      rel.emplace_back(x, y);
      // Forward check: every later x and every y must keep a partner.
      bool viable = true;
      for (std::size_t x2 = x + 1; x2 < nx && viable; ++x2) {
        bool any = false;
        for (std::size_t y2 = 0; y2 < ny && !any; ++y2) any = added(x2, y2) < best;
        viable = any;
      }
      for (std::size_t y2 = 0; y2 < ny && viable; ++y2) {
        if (cover[y2] || y2 == y) continue;
        bool any = false;
        for (std::size_t x2 = 0; x2 < nx && !any; ++x2) any = added(x2, y2) < best;
        viable = any;
      }
      if (viable) {
        ++cover[y];
        self(self, x + 1, nd);
        --cover[y];
      }
      rel.pop_back();
    }
  };
  assign(assign, 0, 0.0);

  GHResult r;
  std::sort(best_rel.begin(), best_rel.end());
  r.witness.relation = std::move(best_rel);
  r.witness.distortion = correspondence_distortion(X, Y, r.witness.relation);
  r.value = 0.5 * r.witness.distortion;
  r.exact = !truncated;
  r.lower = truncated ? 0.5 * floor_bound : r.value;
  r.nodes = nodes;
  return r;
}

double gh_lower_bound(const FiniteMMS& X, const FiniteMMS& Y) {
  require(!X.empty() && !Y.empty(), "GH distance needs nonempty spaces");
  double bound = std::abs(X.diameter() - Y.diameter());

  std::vector<double> dx(X.distances().begin(), X.distances().end());
  std::vector<double> dy(Y.distances().begin(), Y.distances().end());
  std::sort(dx.begin(), dx.end());
  std::sort(dy.begin(), dy.end());
  bound = std::max(bound, sorted_hausdorff(dx, dy));

  std::vector<std::vector<double>> rx(X.size());
  std::vector<std::vector<double>> ry(Y.size());
  for (std::size_t i = 0; i < X.size(); ++i) rx[i] = sorted_row(X, i);
  for (std::size_t j = 0; j < Y.size(); ++j) ry[j] = sorted_row(Y, j);
  std::vector<double> best_y(Y.size(), kInf);
  for (std::size_t i = 0; i < X.size(); ++i) {
    double best_x = kInf;
    for (std::size_t j = 0; j < Y.size(); ++j) {
      const double h = sorted_hausdorff(rx[i], ry[j]);
      best_x = std::min(best_x, h);
      best_y[j] = std::min(best_y[j], h);
    }
    bound = std::max(bound, best_x);
  }
  for (double h : best_y) bound = std::max(bound, h);
  return 0.5 * bound;
}

std::pair<std::vector<std::size_t>, double> farthest_point_sample(
    const FiniteMMS& space, const std::vector<std::size_t>& candidates, std::size_t start,
    std::size_t count) {
  require(!candidates.empty() && count > 0, "sampling needs candidates and a positive count");
  require(std::find(candidates.begin(), candidates.end(), start) != candidates.end(),
          "sampling start must be a candidate");
  std::vector<std::size_t> sample{start};
  std::vector<double> gap(candidates.size());
  for (std::size_t c = 0; c < candidates.size(); ++c) gap[c] = space.d(start, candidates[c]);
  while (sample.size() < std::min(count, candidates.size())) {
    std::size_t arg = 0;
    for (std::size_t c = 1; c < candidates.size(); ++c) {
      if (gap[c] > gap[arg]) arg = c;
    }
    if (gap[arg] <= 0.0) break;
    const std::size_t p = candidates[arg];
    sample.push_back(p);
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      gap[c] = std::min(gap[c], space.d(p, candidates[c]));
    }
  }
  const double radius = *std::max_element(gap.begin(), gap.end());
  return {sample, radius};
}

std::pair<FiniteMMS, double> euclidean_ball_sample(int k, double r, std::size_t count) {
  require(k >= 1 && k <= 3, "model ball dimension must be 1, 2 or 3");
  require(r > 0.0 && count > 0, "model ball needs a positive radius and count");
  std::vector<Eigen::VectorXd> pts;
  double radius = 0.0;
  if (k == 1) {
    if (count == 1) {
      pts.push_back(Eigen::VectorXd::Zero(1));
      radius = r;
    } else {
      for (std::size_t i = 0; i < count; ++i) {
        pts.push_back(Eigen::VectorXd::Constant(
            1, -r + 2.0 * r * static_cast<double>(i) / static_cast<double>(count - 1)));
      }
      radius = r / static_cast<double>(count - 1);
    }
  } else {
    const double pitch = k == 2 ? 1.0 / 24.0 : 1.0 / 10.0;
    const auto lattice = unit_ball_lattice(k, pitch);
    std::vector<double> gap(lattice.size());
    std::size_t origin = 0;
    for (std::size_t c = 0; c < lattice.size(); ++c) {
      if (lattice[c].norm() < lattice[origin].norm()) origin = c;
    }
    pts.push_back(lattice[origin]);
    for (std::size_t c = 0; c < lattice.size(); ++c) gap[c] = (lattice[c] - lattice[origin]).norm();
    while (pts.size() < count) {
      const std::size_t arg =
          static_cast<std::size_t>(std::max_element(gap.begin(), gap.end()) - gap.begin());
      pts.push_back(lattice[arg]);
      for (std::size_t c = 0; c < lattice.size(); ++c) {
        gap[c] = std::min(gap[c], (lattice[c] - lattice[arg]).norm());
      }
    }
    radius = *std::max_element(gap.begin(), gap.end()) + pitch * std::sqrt(double(k)) / 2.0;
    for (auto& p : pts) p *= r;
    radius *= r;
  }
  const std::size_t n = pts.size();
  std::vector<PointRecord> records(n);
  std::vector<double> dist(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    records[i] = {static_cast<int>(i), std::vector<double>(pts[i].data(), pts[i].data() + k), {}};
    for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = (pts[i] - pts[j]).norm();
  }
  Provenance meta{"model_ball", {{"k", double(k)}, {"r", r}}, 0.0};
  return {FiniteMMS(std::move(records), std::move(dist), std::vector<double>(n, 1.0 / n),
                    std::move(meta)),
          radius};
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kIn:
      return "in";
    case Verdict::kOut:
      return "out";
    case Verdict::kInconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

std::vector<double> scan_radii(const FiniteMMS& space, double delta, const ScanOptions& options) {
  require(delta > 0.0, "delta must be positive");
  const double lo = std::max(delta / 8.0, options.min_pitches * effective_pitch(space));
  std::vector<double> radii;
  if (lo >= delta || options.r_samples == 0) return radii;
  // r_samples levels from lo up to (but excluding) delta.
  const double ratio = std::pow(delta / lo, 1.0 / static_cast<double>(options.r_samples));
  for (std::size_t i = 0; i < options.r_samples; ++i) {
    radii.push_back(lo * std::pow(ratio, static_cast<double>(i)));
  }
  return radii;
}

std::vector<ScanResult> epsilon_regular_scan(const FiniteMMS& space, std::size_t x, double eps,
                                             double delta, const std::vector<int>& k_set,
                                             const ScanOptions& options) {
  require(x < space.size(), "point out of range");
  require(eps > 0.0 && delta > 0.0, "eps and delta must be positive");
  const auto radii = scan_radii(space, delta, options);
  const double pitch = effective_pitch(space);
  std::vector<ScanResult> results;
  for (int k : k_set) {
    require(k >= 1 && k <= 3, "model dimension must be 1, 2 or 3");
    ScanResult res;
    res.k = k;
    for (double r : radii) {
      ScanLevel lv;
      lv.r = r;
      lv.threshold = eps * r;
      const auto ball = ball_indices(space, x, r, BallKind::kClosed);
      lv.ball_size = ball.size();
      lv.degenerate = ball.size() <= 1 || ball.size() == space.size();
      if (lv.degenerate) {
        res.levels.push_back(lv);
        continue;
      }

      const auto [sub, hx] = farthest_point_sample(space, ball, x, options.subsample);
      const auto [model, hy] = euclidean_ball_sample(k, r, options.subsample);
      const auto gh =
          gh_exact(restrict_to(space, sub), model, std::max<std::size_t>(8, options.subsample),
                   options.gh_nodes);
      lv.estimate = gh.value;
      lv.estimate_lower = gh.lower;
      lv.error = hx + hy;

      double diam = 0.0;
      std::size_t fa = ball.front();
      std::size_t fb = ball.front();
      for (std::size_t a : ball) {
        for (std::size_t b : ball) {
          if (space.d(a, b) > diam) {
            diam = space.d(a, b);
            fa = a;
            fb = b;
          }
        }
      }
      lv.resolution = pitch;
      double lower = std::max(0.5 * std::abs(diam - 2.0 * r), lv.estimate_lower - lv.error) - pitch;
      if (k == 1) {
        // Among three points of an interval one lies between the others.
        const auto tri = farthest_point_sample(space, ball, x, options.triple_sample).first;
        double best = 0.0;
        for (std::size_t i = 0; i < tri.size(); ++i) {
          for (std::size_t j = i + 1; j < tri.size(); ++j) {
            for (std::size_t l = j + 1; l < tri.size(); ++l) {
              const double ab = space.d(tri[i], tri[j]);
              const double bc = space.d(tri[j], tri[l]);
              const double ac = space.d(tri[i], tri[l]);
              best = std::max(best, std::min({ab + bc - ac, ab + ac - bc, ac + bc - ab}));
            }
          }
        }
        lv.betweenness = best / 6.0;
        lower = std::max(lower, lv.betweenness);
      }
      lv.lower = std::max(0.0, lower);

      double explicit_upper = kInf;
      if (k == 1) {
        const std::size_t m = ball.size();
        std::vector<Eigen::VectorXd> phi(m);
        std::vector<double> dist(m * m);
        for (std::size_t i = 0; i < m; ++i) {
          const double t = 0.5 * (space.d(fa, ball[i]) - space.d(fb, ball[i]));
          phi[i] = Eigen::VectorXd::Constant(1, std::clamp(t, -r, r));
          for (std::size_t j = 0; j < m; ++j) dist[i * m + j] = space.d(ball[i], ball[j]);
        }
        explicit_upper = embedding_bound(dist, phi, 1, r);
      } else {
        const auto [emb, he] = farthest_point_sample(space, ball, x, options.embed_sample);
        const std::size_t m = emb.size();
        if (m > static_cast<std::size_t>(k)) {
          Eigen::MatrixXd D2(m, m);
          std::vector<double> dist(m * m);
          for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
              dist[i * m + j] = space.d(emb[i], emb[j]);
              D2(i, j) = dist[i * m + j] * dist[i * m + j];
            }
          }
          const Eigen::MatrixXd J =
              Eigen::MatrixXd::Identity(m, m) - Eigen::MatrixXd::Constant(m, m, 1.0 / m);
          const Eigen::MatrixXd G = -0.5 * J * D2 * J;
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(G);
          std::vector<Eigen::VectorXd> phi(m, Eigen::VectorXd::Zero(k));
          for (int c = 0; c < k; ++c) {
            const Eigen::Index col = static_cast<Eigen::Index>(m) - 1 - c;
            const double lambda = std::max(0.0, eig.eigenvalues()(col));
            for (std::size_t i = 0; i < m; ++i) {
              phi[i](c) = eig.eigenvectors()(static_cast<Eigen::Index>(i), col) * std::sqrt(lambda);
            }
          }
          const Eigen::VectorXd origin = phi[0];  // the sample starts at x
          for (auto& p : phi) {
            p -= origin;
            if (p.norm() > r) p *= r / p.norm();
          }
          explicit_upper = embedding_bound(dist, phi, k, r) + he;
        }
      }
      lv.upper = std::min(lv.estimate + lv.error, explicit_upper) + pitch;

      if (lv.upper < lv.threshold) {
        lv.status = Verdict::kIn;
      } else if (lv.lower > lv.threshold) {
        lv.status = Verdict::kOut;
      }
      res.levels.push_back(lv);
    }

    bool any_out = false;
    bool all_in = true;
    std::size_t live = 0;
    double out_margin = -kInf;
    double in_margin = kInf;
    for (const auto& lv : res.levels) {
      if (lv.degenerate) continue;
      ++live;
      if (lv.status == Verdict::kOut) {
        any_out = true;
        out_margin = std::max(out_margin, lv.lower - lv.threshold);
      }
      if (lv.status != Verdict::kIn) all_in = false;
      in_margin = std::min(in_margin, lv.threshold - lv.upper);
    }
    if (any_out) {
      res.verdict = Verdict::kOut;
      res.margin = out_margin;
    } else if (live > 0 && all_in) {
      res.verdict = Verdict::kIn;
      res.margin = in_margin;
    }
    results.push_back(std::move(res));
  }
  return results;
}

RegularMassReport regular_set_measure(const FiniteMMS& space, double eps, double delta,
                                      const std::vector<int>& k_set, std::size_t budget,
                                      const ScanOptions& options) {
  require(budget > 0, "scan budget must be positive");
  RegularMassReport report;
  report.k_set = k_set;
  report.total_mass = space.total_mass();
  report.per_k.resize(k_set.size());
  const std::size_t n = space.size();
  const std::size_t stride = std::max<std::size_t>(1, (n + budget - 1) / budget);
  for (std::size_t i = 0; i < n; i += stride) report.scanned.push_back(i);

  std::vector<std::vector<Verdict>> verdicts(report.scanned.size());
  parallel_for(report.scanned.size(), [&](std::size_t s) {
    const auto res = epsilon_regular_scan(space, report.scanned[s], eps, delta, k_set, options);
    for (const auto& r : res) verdicts[s].push_back(r.verdict);
  });

  auto add = [](RegularMass& m, Verdict v, double w) {
    (v == Verdict::kIn ? m.in : v == Verdict::kOut ? m.out : m.inconclusive) += w;
  };
  for (std::size_t s = 0; s < report.scanned.size(); ++s) {
    const double w = space.weight(report.scanned[s]);
    report.scanned_mass += w;
    bool any_in = false;
    bool all_out = !k_set.empty();
    for (std::size_t k = 0; k < k_set.size(); ++k) {
      add(report.per_k[k], verdicts[s][k], w);
      any_in = any_in || verdicts[s][k] == Verdict::kIn;
      all_out = all_out && verdicts[s][k] == Verdict::kOut;
    }
    add(report.overall, any_in ? Verdict::kIn : all_out ? Verdict::kOut : Verdict::kInconclusive,
        w);
  }
  return report;
}

}  // namespace mmslab
