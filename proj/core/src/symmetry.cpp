#include "mmslab/symmetry.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include <Eigen/Geometry>

#include "mmslab/error.hpp"
#include "mmslab/parallel.hpp"

namespace mmslab {

Permutation identity_permutation(std::size_t n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

Permutation compose(const Permutation& f, const Permutation& g) {
  require(f.size() == g.size(), "cannot compose permutations of different sizes");
  Permutation h(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) h[i] = f[g[i]];
  return h;
}

Permutation inverse(const Permutation& f) {
  Permutation h(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) h[f[i]] = i;
  return h;
}

bool is_identity(const Permutation& f) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] != i) return false;
  }
  return true;
}

double default_iso_tol(const FiniteMMS& space) { return 1e-9 * std::max(1.0, space.diameter()); }

IsometryMap make_isometry(const FiniteMMS& space, const Permutation& perm, double meas_tol) {
  const std::size_t n = space.size();
  require(perm.size() == n, "permutation has the wrong size");
  std::vector<char> hit(n, 0);
  for (std::size_t p : perm) {
    require(p < n && !hit[p], "map is not a bijection");
    hit[p] = 1;
  }
  IsometryMap m;
  m.perm = perm;
  for (std::size_t i = 0; i < n; ++i) {
    m.measure_defect = std::max(m.measure_defect, std::abs(space.weight(perm[i]) - space.weight(i)));
    for (std::size_t j = i + 1; j < n; ++j) {
      m.distortion = std::max(m.distortion, std::abs(space.d(perm[i], perm[j]) - space.d(i, j)));
    }
  }
  m.measure_preserving = m.measure_defect <= meas_tol;
  return m;
}

Enumeration enumerate_isometries(const FiniteMMS& space, const EnumerationOptions& options) {
  const std::size_t n = space.size();
  Enumeration result;
  result.iso_tol = options.iso_tol >= 0.0 ? options.iso_tol : default_iso_tol(space);
  const double tol = result.iso_tol;
  if (n == 0) {
    result.complete = true;
    return result;
  }

  // Compatible images: equal sorted distance rows. Row sums bound the
  // comparisons to pairs whose sums are within n * tol.
  std::vector<std::vector<double>> profile(n);
  std::vector<double> row_sum(n);
  for (std::size_t p = 0; p < n; ++p) {
    const auto row = space.row(p);
    profile[p].assign(row.begin(), row.end());
    std::sort(profile[p].begin(), profile[p].end());
    row_sum[p] = std::accumulate(profile[p].begin(), profile[p].end(), 0.0);
  }
  std::vector<std::size_t> by_sum(n);
  std::iota(by_sum.begin(), by_sum.end(), 0);
  std::sort(by_sum.begin(), by_sum.end(),
            [&](std::size_t a, std::size_t b) { return row_sum[a] < row_sum[b]; });
  std::vector<std::vector<std::size_t>> compat(n);
  const double sum_slack = static_cast<double>(n) * tol + 1e-12 * std::max(1.0, row_sum[by_sum.back()]);
  for (std::size_t a = 0; a < n; ++a) {
    const std::size_t p = by_sum[a];
    for (std::size_t b = a; b < n && row_sum[by_sum[b]] - row_sum[p] <= sum_slack; ++b) {
      const std::size_t q = by_sum[b];
      bool same = true;
      for (std::size_t k = 0; k < n && same; ++k) same = std::abs(profile[p][k] - profile[q][k]) <= tol;
      if (same) {
        compat[p].push_back(q);
        if (q != p) compat[q].push_back(p);
      }
    }
  }
  for (auto& c : compat) std::sort(c.begin(), c.end());

  // Assignment order: nearest to the assigned set first, then fewest images.
  std::vector<std::size_t> order;
  {
    std::vector<char> placed(n, 0);
    std::vector<double> mind(n, std::numeric_limits<double>::infinity());
    for (std::size_t step = 0; step < n; ++step) {
      std::size_t best = n;
      for (std::size_t p = 0; p < n; ++p) {
        if (placed[p]) continue;
        if (best == n || mind[p] < mind[best] ||
            (mind[p] == mind[best] && compat[p].size() < compat[best].size())) {
          best = p;
        }
      }
      placed[best] = 1;
      order.push_back(best);
      const auto row = space.row(best);
      for (std::size_t p = 0; p < n; ++p) mind[p] = std::min(mind[p], row[p]);
    }
  }

  std::atomic<std::size_t> nodes{0};
  std::atomic<std::size_t> found{0};
  std::atomic<bool> truncated{false};
  const auto& first = compat[order[0]];
  std::vector<std::vector<Permutation>> branch_maps(first.size());

  parallel_for(first.size(), [&](std::size_t branch) {
    Permutation img(n, n);
    std::vector<char> used(n, 0);
    img[order[0]] = first[branch];
    used[first[branch]] = 1;
    auto search = [&](auto&& self, std::size_t k) -> void {
      if (truncated.load(std::memory_order_relaxed)) return;
      if (k == n) {
        branch_maps[branch].push_back(img);
        if (++found >= options.max_maps) truncated = true;
        return;
      }
      if (++nodes > options.node_budget) {
        truncated = true;
        return;
      }
      const std::size_t p = order[k];
      const auto row_p = space.row(p);
      for (std::size_t q : compat[p]) {
        if (used[q]) continue;
        const auto row_q = space.row(q);
        bool ok = true;
        for (std::size_t i = 0; i < k && ok; ++i) {
          const std::size_t a = order[i];
          ok = std::abs(row_q[img[a]] - row_p[a]) <= tol;
        }
        if (!ok) continue;
        img[p] = q;
        used[q] = 1;
        self(self, k + 1);
        used[q] = 0;
        img[p] = n;
        if (truncated.load(std::memory_order_relaxed)) return;
      }
    };
    search(search, 1);
  });

  std::vector<Permutation> all;
  for (auto& maps : branch_maps) {
    for (auto& m : maps) all.push_back(std::move(m));
  }
  std::sort(all.begin(), all.end());
  result.maps.resize(all.size());
  parallel_for(all.size(), [&](std::size_t i) {
    result.maps[i] = make_isometry(space, all[i], options.meas_tol);
  });
  result.nodes = nodes.load();
  result.complete = !truncated.load();
  return result;
}

FixedSet fixed_set(const FiniteMMS& space, const Permutation& g, double fix_tol) {
  require(g.size() == space.size(), "permutation has the wrong size");
  FixedSet fix;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (space.d(i, g[i]) <= fix_tol) {
      fix.cells.push_back(i);
      fix.measure += space.weight(i);
    }
  }
  return fix;
}

double fixed_mass_in_ball(const FiniteMMS& space, const FixedSet& fix, std::size_t x, double s) {
  const auto ball = ball_indices(space, x, s, BallKind::kOpen);
  std::vector<char> in(space.size(), 0);
  for (std::size_t b : ball) in[b] = 1;
  double mass = 0.0;
  for (std::size_t c : fix.cells) {
    if (in[c]) mass += space.weight(c);
  }
  return mass;
}

Subgroup generate_subgroup(const std::vector<Permutation>& gens, std::size_t budget) {
  require(!gens.empty(), "subgroup needs at least one generator");
  const std::size_t n = gens.front().size();
  for (const auto& g : gens) require(g.size() == n, "generators act on different point sets");
  Subgroup group;
  group.generators = gens;
  std::set<Permutation> seen{identity_permutation(n)};
  std::vector<Permutation> frontier{identity_permutation(n)};
  group.closed = true;
  while (!frontier.empty() && group.closed) {
    std::vector<Permutation> next;
    for (const auto& e : frontier) {
      for (const auto& g : gens) {
        Permutation h = compose(g, e);
        if (seen.count(h)) continue;
        if (seen.size() >= budget) {
          group.closed = false;
          break;
        }
        seen.insert(h);
        next.push_back(std::move(h));
      }
      if (!group.closed) break;
    }
    frontier = std::move(next);
  }
  group.elements.assign(seen.begin(), seen.end());
  return group;
}

double displacement_on(const FiniteMMS& space, const Permutation& g,
                       const std::vector<std::size_t>& K) {
  double worst = 0.0;
  for (std::size_t y : K) worst = std::max(worst, space.d(y, g[y]));
  return worst;
}

double displacement(const FiniteMMS& space, const Subgroup& group, double r, std::size_t x) {
  require(!group.elements.empty(), "subgroup is empty");
  const auto ball = ball_indices(space, x, r / 2.0, BallKind::kOpen);
  double worst = 0.0;
  for (const auto& g : group.elements) worst = std::max(worst, displacement_on(space, g, ball));
  return worst;
}

ProbeResult small_subgroup_probe(const FiniteMMS& space, double eps,
                                 const std::vector<std::size_t>& K,
                                 const EnumerationOptions& options) {
  require(eps > 0.0, "probe radius must be positive");
  require(!K.empty(), "probe set K must be nonempty");
  const Enumeration en = enumerate_isometries(space, options);
  ProbeResult result;
  result.inconclusive = !en.complete;

  std::vector<std::pair<double, std::size_t>> cand;
  for (std::size_t i = 0; i < en.maps.size(); ++i) {
    if (is_identity(en.maps[i].perm)) continue;
    const double disp = displacement_on(space, en.maps[i].perm, K);
    if (disp < eps) cand.emplace_back(disp, i);
  }
  std::sort(cand.begin(), cand.end());
  result.candidates = cand.size();
  for (const auto& [disp, i] : cand) {
    Subgroup group = generate_subgroup({en.maps[i].perm});
    if (!group.closed) continue;
    double worst = 0.0;
    for (const auto& g : group.elements) worst = std::max(worst, displacement_on(space, g, K));
    if (worst < eps) {
      result.found = true;
      result.group = std::move(group);
      result.group_displacement = worst;
      return result;
    }
  }
  return result;
}

double sup_affine_norm(const Eigen::MatrixXd& A, const Eigen::VectorXd& w, double radius) {
  require(radius >= 0.0, "radius must be nonnegative");
  const Eigen::Index k = A.cols();
  const Eigen::MatrixXd M = A.transpose() * A;
  const Eigen::VectorXd b = A.transpose() * w;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(M);
  const Eigen::VectorXd mu = eig.eigenvalues();
  const Eigen::MatrixXd V = eig.eigenvectors();
  const Eigen::VectorXd bp = V.transpose() * b;
  const double mu_max = mu(k - 1);
  const double top_tol = 1e-12 * (1.0 + std::abs(mu_max));

  // Stationary points of |A y + w|^2 on |y| = radius solve (M - lambda) y = -b;
  // the maximum has lambda >= mu_max.
  auto y_at = [&](double lambda) {
    Eigen::VectorXd yp(k);
    for (Eigen::Index i = 0; i < k; ++i) yp(i) = bp(i) / (lambda - mu(i));
    return yp;
  };
  double top_b = 0.0;
  double rest = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) {
    if (mu(i) >= mu_max - top_tol) {
      top_b += bp(i) * bp(i);
    } else {
      rest += bp(i) * bp(i) / ((mu_max - mu(i)) * (mu_max - mu(i)));
    }
  }
  Eigen::VectorXd yp(k);
  if (top_b <= 1e-28 * (1.0 + b.squaredNorm()) && rest <= radius * radius) {
    yp.setZero();
    for (Eigen::Index i = 0; i < k; ++i) {
      if (mu(i) < mu_max - top_tol) yp(i) = bp(i) / (mu_max - mu(i));
    }
    yp(k - 1) = std::sqrt(std::max(0.0, radius * radius - rest));
  } else {
    double lo = mu_max;
    double hi = mu_max + std::sqrt(b.squaredNorm()) / std::max(radius, 1e-300) + 1.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      if (y_at(mid).squaredNorm() > radius * radius) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    yp = y_at(hi);
  }
  const Eigen::VectorXd y = V * yp;
  return std::max((A * y + w).norm(), (A * (-y) + w).norm());
}

double power_displacement(const EuclideanIsometry& g, std::size_t n) {
  const Eigen::Index k = g.Q.rows();
  Eigen::MatrixXd Qn = Eigen::MatrixXd::Identity(k, k);
  Eigen::VectorXd wn = Eigen::VectorXd::Zero(k);
  for (std::size_t i = 0; i < n; ++i) {
    Qn = g.Q * Qn;
    wn = g.Q * wn + g.v;
  }
  return sup_affine_norm(Qn - Eigen::MatrixXd::Identity(k, k), wn, 0.5);
}

EuclideanIsometry random_small_isometry(std::mt19937_64& rng, int k, double lo, double hi) {
  require(k == 2 || k == 3, "isometry dimension must be 2 or 3");
  require(0.0 < lo && lo < hi, "displacement window must satisfy 0 < lo < hi");
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (;;) {
    // Angle and shift on a log scale between lo/4 and 2 hi.
    const double angle = lo / 4.0 * std::pow(8.0 * hi / lo, unit(rng));
    const double shift = lo / 4.0 * std::pow(8.0 * hi / lo, unit(rng)) * unit(rng);
    EuclideanIsometry g;
    if (k == 2) {
      g.Q = Eigen::Rotation2Dd(angle).toRotationMatrix();
    } else {
      Eigen::Vector3d axis(normal(rng), normal(rng), normal(rng));
      g.Q = Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
    }
    g.v = Eigen::VectorXd::Zero(k);
    for (int i = 0; i < k; ++i) g.v(i) = normal(rng);
    g.v *= shift / g.v.norm();
    const double d = power_displacement(g, 1);
    if (d > lo && d < hi) return g;
  }
}

EscapeResult euclidean_power_escape(const EuclideanIsometry& g, double threshold,
                                    std::size_t max_pow) {
  const Eigen::Index k = g.Q.rows();
  require(k >= 1 && g.Q.cols() == k && g.v.size() == k, "isometry has inconsistent shape");
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(k, k);
  require((g.Q.transpose() * g.Q - I).norm() <= 1e-9, "Q must be orthogonal");
  require((g.Q - I).norm() + g.v.norm() > 1e-12, "isometry must differ from the identity");

  EscapeResult r;
  Eigen::MatrixXd Qn = I;
  Eigen::VectorXd wn = Eigen::VectorXd::Zero(k);
  for (std::size_t n = 1; n <= max_pow; ++n) {
    Qn = g.Q * Qn;
    wn = g.Q * wn + g.v;
    r.displacement = sup_affine_norm(Qn - I, wn, 0.5);
    if (n == 1) r.initial_displacement = r.displacement;
    if (r.displacement >= threshold) {
      r.found = true;
      r.n = n;
      return r;
    }
  }
  r.n = max_pow;
  return r;
}

ConditionAReport condition_a_scan(const FiniteMMS& space, std::size_t x, double s,
                                  double fix_tol, const EnumerationOptions& options) {
  require(x < space.size(), "point out of range");
  require(s > 0.0, "radius must be positive");
  if (fix_tol < 0.0) fix_tol = effective_pitch(space);
  ConditionAReport r;
  r.enumeration = enumerate_isometries(space, options);
  r.complete = r.enumeration.complete;
  r.ball_mass = space.mass_of(ball_indices(space, x, s, BallKind::kOpen));
  r.no_nontrivial = true;
  for (std::size_t i = 0; i < r.enumeration.maps.size(); ++i) {
    const auto& g = r.enumeration.maps[i].perm;
    if (is_identity(g)) continue;
    const double mass = fixed_mass_in_ball(space, fixed_set(space, g, fix_tol), x, s);
    if (r.no_nontrivial || mass > r.fix_sup) {
      r.fix_sup = mass;
      r.argmax = i;
    }
    r.no_nontrivial = false;
  }
  r.fix_sup_normalized = r.fix_sup / r.ball_mass;
  r.gap = r.ball_mass - r.fix_sup;
  r.holds = r.complete && r.fix_sup < r.ball_mass;
  return r;
}

LargeFixReport large_fix_implies_small_displacement(const FiniteMMS& space, const Permutation& f,
                                                    std::size_t x, std::size_t N,
                                                    double fix_tol) {
  require(N >= 1, "N must be positive");
  require(f.size() == space.size(), "permutation has the wrong size");
  if (fix_tol < 0.0) fix_tol = effective_pitch(space);
  const double big = static_cast<double>(N);
  const auto ball = ball_indices(space, x, big, BallKind::kOpen);
  std::vector<char> in(space.size(), 0);
  for (std::size_t b : ball) in[b] = 1;

  LargeFixReport r;
  r.min_small_ball = std::numeric_limits<double>::infinity();
  for (std::size_t y : ball) {
    double mass = 0.0;
    for (std::size_t z : ball_indices(space, y, 1.0 / big, BallKind::kOpen)) {
      if (in[z]) mass += space.weight(z);
    }
    r.min_small_ball = std::min(r.min_small_ball, mass);
    r.max_displacement = std::max(r.max_displacement, space.d(y, f[y]));
    if (space.d(y, f[y]) > fix_tol) r.moved_mass += space.weight(y);
  }
  r.xi = r.min_small_ball / space.mass_of(ball);
  r.hypothesis = r.moved_mass < r.min_small_ball;
  r.bound = 2.0 / big + effective_pitch(space);
  r.conclusion = r.max_displacement < r.bound;
  r.implication_holds = !r.hypothesis || r.conclusion;
  return r;
}

CriticalScale critical_scale(const FiniteMMS& space, const Subgroup& group, std::size_t x,
                             double lo, double hi, double tol) {
  require(0.0 < lo && lo < hi, "bracket must satisfy 0 < lo < hi");
  require(tol > 0.0, "tolerance must be positive");
  auto gap = [&](double r) { return displacement(space, group, r, x) - r / 20.0; };
  CriticalScale c;
  double g_lo = gap(lo);
  double g_hi = gap(hi);
  if (!(g_lo >= 0.0 && g_hi < 0.0)) return c;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double g_mid = gap(mid);
    if (g_mid >= 0.0) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
      g_hi = g_mid;
    }
  }
  c.found = true;
  c.lo = lo;
  c.hi = hi;
  c.r = 0.5 * (lo + hi);
  c.defect = std::min(std::abs(g_lo), std::abs(g_hi));
  return c;
}

}  // namespace mmslab
