#include "jnr/range.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <utility>
#include <limits>
#include <numbers>
#include <numeric>

#include "jnr/error.hpp"

namespace jnr {

namespace {

std::span<const double> as_span(const Vec& v) {
  return {v.data(), static_cast<size_t>(v.size())};
}

void check_grid_size(int count) {
  if (count < 1) throw Error(ErrorKind::InvalidInput, "direction grid needs at least one direction");
}

// Columns span the tangent space of the sphere at unit u.
Eigen::MatrixXd tangent_basis(const Vec& u) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(u);
  const Eigen::MatrixXd q = qr.householderQ();
  return q.rightCols(u.size() - 1);
}

std::pair<double, int> smallest_gap(const std::vector<double>& values) {
  double best = std::numeric_limits<double>::infinity();
  int at = 0;
  for (size_t k = 0; k + 1 < values.size(); ++k) {
    const double g = values[k + 1] - values[k];
    if (g < best) {
      best = g;
      at = static_cast<int>(k);
    }
  }
  return {best, at};
}

std::vector<double> eigenvalues_at(const MatrixPencil& pencil, const Vec& u) {
  return eig_hermitian(pencil.combine(as_span(u))).values;
}

// Downhill simplex with restarts; stops once f <= target or the simplex
// collapses below 1e-13.
template <class F>
std::pair<Vec, double> nelder_mead(F f, Vec x0, double step, double target, int max_evals = 20000) {
  const int m = static_cast<int>(x0.size());
  int evals = 0;
  Vec best = x0;
  double fbest = f(best);
  for (int restart = 0; restart < 4 && fbest > target && evals < max_evals; ++restart) {
    std::vector<Vec> pts(m + 1, best);
    std::vector<double> vals(m + 1, fbest);
    for (int j = 0; j < m; ++j) {
      pts[j + 1](j) += step;
      vals[j + 1] = f(pts[j + 1]);
    }
    evals += m;
    while (evals < max_evals) {
      std::vector<int> idx(m + 1);
      std::iota(idx.begin(), idx.end(), 0);
      std::sort(idx.begin(), idx.end(), [&](int a, int b) { return vals[a] < vals[b]; });
      const int lo = idx.front();
      const int hi = idx.back();
      const int second = idx[m - 1];
      double size = 0.0;
      for (const auto& p : pts) size = std::max(size, (p - pts[lo]).norm());
      if (vals[lo] <= target || size < 1e-13) break;

      Vec centroid = Vec::Zero(m);
      for (int j = 0; j <= m; ++j)
        if (j != hi) centroid += pts[j];
      centroid /= m;
      const Vec refl = centroid + (centroid - pts[hi]);
      const double fr = f(refl);
      ++evals;
      if (fr < vals[lo]) {
        const Vec exp = centroid + 2.0 * (centroid - pts[hi]);
        const double fe = f(exp);
        ++evals;
        if (fe < fr) {
          pts[hi] = exp;
          vals[hi] = fe;
        } else {
          pts[hi] = refl;
          vals[hi] = fr;
        }
      } else if (fr < vals[second]) {
        pts[hi] = refl;
        vals[hi] = fr;
      } else {
        const Vec con = fr < vals[hi] ? Vec(centroid + 0.5 * (refl - centroid))
                                      : Vec(centroid + 0.5 * (pts[hi] - centroid));
        const double fc = f(con);
        ++evals;
        if (fc < std::min(fr, vals[hi])) {
          pts[hi] = con;
          vals[hi] = fc;
        } else {
          for (int j = 0; j <= m; ++j) {
            if (j == lo) continue;
            pts[j] = pts[lo] + 0.5 * (pts[j] - pts[lo]);
            vals[j] = f(pts[j]);
          }
          evals += m;
        }
      }
    }
    const auto it = std::min_element(vals.begin(), vals.end());
    const double size = step;
    if (*it < fbest) {
      fbest = *it;
      best = pts[static_cast<size_t>(it - vals.begin())];
    }
    step = std::max(1e-3 * size, 1e-10);
  }
  return {best, fbest};
}

struct Sample {
  double t;
  std::vector<Vec> points;  // one per branch, simple or not
};

}  // namespace

const char* to_string(GridScheme s) {
  switch (s) {
    case GridScheme::uniform_angle: return "uniform_angle";
    case GridScheme::fibonacci_sphere: return "fibonacci_sphere";
    case GridScheme::random_sphere: return "random_sphere";
  }
  return "unknown";
}

DirectionGrid DirectionGrid::uniform_angle(int count, double offset) {
  check_grid_size(count);
  DirectionGrid g;
  g.n = 2;
  g.scheme = GridScheme::uniform_angle;
  g.directions.reserve(count);
  for (int k = 0; k < count; ++k) {
    const double theta = 2.0 * std::numbers::pi * (k + offset) / count;
    Vec u(2);
    u << std::cos(theta), std::sin(theta);
    g.directions.push_back(u);
  }
  return g;
}

DirectionGrid DirectionGrid::fibonacci_sphere(int count) {
  check_grid_size(count);
  DirectionGrid g;
  g.n = 3;
  g.scheme = GridScheme::fibonacci_sphere;
  g.directions.reserve(count);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < count; ++k) {
    const double z = 1.0 - (2.0 * k + 1.0) / count;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * k;
    Vec u(3);
    u << r * std::cos(phi), r * std::sin(phi), z;
    g.directions.push_back(u.normalized());
  }
  return g;
}

DirectionGrid DirectionGrid::random_sphere(int n, int count, Rng& rng) {
  check_grid_size(count);
  if (n < 1) throw Error(ErrorKind::InvalidInput, "sphere dimension must be positive");
  DirectionGrid g;
  g.n = n;
  g.scheme = GridScheme::random_sphere;
  std::normal_distribution<double> normal;
  while (static_cast<int>(g.directions.size()) < count) {
    Vec u(n);
    for (int j = 0; j < n; ++j) u(j) = normal(rng);
    const double len = u.norm();
    if (len < 1e-12) continue;
    g.directions.push_back(u / len);
  }
  return g;
}

DirectionGrid DirectionGrid::standard(int n, int count, std::uint64_t seed) {
  if (n == 2) return uniform_angle(count);
  if (n == 3) return fibonacci_sphere(count);
  Rng rng(seed);
  return random_sphere(n, count, rng);
}

double DirectionGrid::mesh() const {
  if (directions.empty()) return 0.0;
  const double count = static_cast<double>(directions.size());
  if (n == 2) return 2.0 * std::numbers::pi / count;
  // Area of S^{n-1} shared evenly, then taken to the 1/(n-1) power.
  const double area = 2.0 * std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0);
  return std::pow(area / count, 1.0 / (n - 1));
}

std::vector<Vec> BoundaryCloud::coordinates() const {
  std::vector<Vec> out;
  out.reserve(points.size());
  for (const auto& r : points) out.push_back(r.point);
  return out;
}

double support_function(const MatrixPencil& pencil, const Vec& u) {
  if (u.size() != pencil.n()) throw Error(ErrorKind::DimensionMismatch, "direction length differs from n");
  return lambda_max(pencil.combine(as_span(u)));
}

SupportTable support_table(const MatrixPencil& pencil, const DirectionGrid& grid) {
  SupportTable t{grid, {}};
  t.values.reserve(grid.directions.size());
  for (const auto& u : grid.directions) t.values.push_back(support_function(pencil, u));
  return t;
}

BoundaryCloud trace_boundary_cloud(const MatrixPencil& pencil, const DirectionGrid& grid) {
  if (grid.n != pencil.n()) throw Error(ErrorKind::DimensionMismatch, "grid dimension differs from n");
  BoundaryCloud cloud;
  cloud.n = pencil.n();
  cloud.points.reserve(grid.directions.size() * static_cast<size_t>(pencil.d()));
  for (const auto& u : grid.directions) {
    const EigenSystem es = eig_hermitian(pencil.combine(as_span(u)));
    for (int k = 0; k < es.size(); ++k) {
      if (!es.simple(k)) {
        ++cloud.skipped;
        continue;
      }
      CloudRecord r;
      r.point = expectation(pencil, es.vectors.col(k));
      r.direction = u;
      r.branch = k;
      r.eigenvalue = es.values[k];
      cloud.points.push_back(std::move(r));
    }
  }
  return cloud;
}

std::vector<DegenerateDirection> find_degenerate_directions(const MatrixPencil& pencil,
                                                            const DirectionGrid& grid, int max_count) {
  const int n = pencil.n();
  if (grid.n != n) throw Error(ErrorKind::DimensionMismatch, "grid dimension differs from n");
  std::vector<DegenerateDirection> found;
  if (n < 2 || n > 3 || pencil.d() < 2 || grid.directions.empty()) return found;
  const double scale = std::max(pencil.scale(), std::numeric_limits<double>::min());
  const double mesh = grid.mesh();

  std::vector<std::pair<double, int>> order;
  order.reserve(grid.directions.size());
  for (size_t i = 0; i < grid.directions.size(); ++i) {
    order.emplace_back(smallest_gap(eigenvalues_at(pencil, grid.directions[i])).first, static_cast<int>(i));
  }
  std::sort(order.begin(), order.end());

  std::vector<Vec> seeds;
  for (const auto& [gap, i] : order) {
    if (gap > 4.0 * mesh * scale || static_cast<int>(seeds.size()) >= 4 * max_count) break;
    const Vec& u = grid.directions[i];
    bool near = false;
    for (const auto& s : seeds) near = near || (s - u).norm() < 4.0 * mesh;
    if (!near) seeds.push_back(u);
  }

  for (const auto& seed : seeds) {
    const Eigen::MatrixXd q = tangent_basis(seed);
    auto at = [&](const Vec& x) -> Vec { return (seed + q * x).normalized(); };
    const auto [x, best] = nelder_mead(
        [&](const Vec& y) { return smallest_gap(eigenvalues_at(pencil, at(y))).first; }, Vec::Zero(n - 1),
        mesh, 1e-15 * scale);
    if (best > 1e-6 * scale) continue;
    const Vec u = at(x);
    bool dup = false;
    for (const auto& f : found) dup = dup || (f.direction - u).norm() < mesh;
    if (dup) continue;
    found.push_back({u, smallest_gap(eigenvalues_at(pencil, u)).second, best});
    if (static_cast<int>(found.size()) >= max_count) break;
  }
  return found;
}

BoundaryCloud refine_near_degeneracies(const MatrixPencil& pencil,
                                       const std::vector<DegenerateDirection>& crossings,
                                       const RingRefinement& options) {
  const int n = pencil.n();
  BoundaryCloud cloud;
  cloud.n = n;
  if (n < 2 || n > 3 || options.rings < 1 || options.initial < 2) return cloud;
  const double spacing = options.spacing * std::max(pencil.scale(), std::numeric_limits<double>::min());

  for (const auto& crossing : crossings) {
    if (crossing.direction.size() != n) throw Error(ErrorKind::DimensionMismatch, "crossing direction length differs from n");
    const Eigen::MatrixXd q = tangent_basis(crossing.direction);
    for (int r = 0; r < options.rings; ++r) {
      const double frac = options.rings == 1 ? 0.0 : static_cast<double>(r) / (options.rings - 1);
      const double eps = options.outer * std::pow(options.inner / options.outer, frac);
      // n = 2: the arc on both sides of the crossing; n = 3: a full circle.
      const double lo = n == 2 ? -1.0 : 0.0;
      const double hi = n == 2 ? 1.0 : 2.0 * std::numbers::pi;
      auto direction = [&](double t) -> Vec {
        if (n == 2) return (crossing.direction + eps * t * q.col(0)).normalized();
        return (crossing.direction + eps * (std::cos(t) * q.col(0) + std::sin(t) * q.col(1))).normalized();
      };
      auto sample = [&](double t) {
        const Vec u = direction(t);
        const HermitianMatrix m = pencil.combine(as_span(u));
        const EigenSystem es = eig_hermitian(m);
        const double tol = options.multiplicity * (1.0 + m.frobenius_norm());
        Sample s{t, {}};
        for (int k = 0; k < es.size(); ++k) {
          const Vec y = expectation(pencil, es.vectors.col(k));
          s.points.push_back(y);
          const bool below = k > 0 && es.values[k] - es.values[k - 1] <= tol;
          const bool above = k + 1 < es.size() && es.values[k + 1] - es.values[k] <= tol;
          if (below || above) {
            ++cloud.skipped;
            continue;
          }
          cloud.points.push_back(CloudRecord{y, u, k, es.values[k], true});
        }
        return s;
      };
      auto far = [&](const Sample& a, const Sample& b) {
        for (size_t k = 0; k < a.points.size(); ++k)
          if ((a.points[k] - b.points[k]).norm() > spacing) return true;
        return false;
      };

      std::vector<std::pair<Sample, Sample>> stack;
      Sample first = sample(lo);
      Sample prev = first;
      for (int i = 1; i <= options.initial; ++i) {
        // The circle closes on its first sample.
        Sample next = (n == 3 && i == options.initial) ? Sample{hi, first.points}
                                                       : sample(lo + (hi - lo) * i / options.initial);
        stack.emplace_back(prev, next);
        prev = std::move(next);
      }
      while (!stack.empty() && static_cast<long>(cloud.points.size()) < options.max_points) {
        auto [a, b] = std::move(stack.back());
        stack.pop_back();
        if (b.t - a.t <= 1e-13 || !far(a, b)) continue;
        Sample m = sample(0.5 * (a.t + b.t));
        stack.emplace_back(m, std::move(b));
        stack.emplace_back(std::move(a), std::move(m));
      }
    }
  }
  return cloud;
}

PlanarRefinement refine_planar_boundary(const MatrixPencil& pencil, const DirectionGrid& grid, double tol,
                                        int max_evaluations) {
  if (pencil.n() != 2 || grid.n != 2) throw Error(ErrorKind::DimensionMismatch, "planar refinement needs n = 2");
  if (grid.scheme != GridScheme::uniform_angle) {
    throw Error(ErrorKind::InvalidInput, "planar refinement needs a uniform angle grid");
  }
  PlanarRefinement out;
  out.cloud.n = 2;
  const int count = grid.size();
  if (count < 3) return out;
  const double target = tol * std::max(pencil.scale(), std::numeric_limits<double>::min());

  struct Contact {
    double theta;
    Vec u;
    Vec y;
    double h;
  };
  auto contact = [&](double theta, bool keep) {
    Vec u(2);
    u << std::cos(theta), std::sin(theta);
    const EigenSystem es = eig_hermitian(pencil.combine(as_span(u)));
    const int top = es.size() - 1;
    Contact c{theta, u, expectation(pencil, es.vectors.col(top)), es.values[top]};
    ++out.evaluations;
    if (keep) {
      if (es.simple(top)) {
        out.cloud.points.push_back(CloudRecord{c.y, u, top, c.h, true});
      } else {
        ++out.cloud.skipped;
      }
    }
    return c;
  };
  // Distance from the apex of the support lines to the chord.
  auto height = [](const Contact& a, const Contact& b) {
    Eigen::Matrix2d m;
    m << a.u(0), a.u(1), b.u(0), b.u(1);
    const double det = m.determinant();
    const Eigen::Vector2d chord = b.y - a.y;
    const double len = chord.norm();
    if (std::abs(det) < 1e-14) return 0.0;
    const Eigen::Vector2d apex = m.inverse() * Eigen::Vector2d(a.h, b.h);
    if (len == 0.0) return (apex - Eigen::Vector2d(a.y)).norm();
    const Eigen::Vector2d rel = apex - Eigen::Vector2d(a.y);
    return std::abs(chord(0) * rel(1) - chord(1) * rel(0)) / len;
  };

  std::vector<Contact> base;
  base.reserve(static_cast<size_t>(count));
  for (const auto& u : grid.directions) base.push_back(contact(std::atan2(u(1), u(0)), false));
  for (int i = 0; i < count; ++i) {
    Contact a = base[static_cast<size_t>(i)];
    Contact b = base[static_cast<size_t>((i + 1) % count)];
    if (b.theta <= a.theta) b.theta += 2.0 * std::numbers::pi;
    std::vector<std::pair<Contact, Contact>> stack{{a, b}};
    while (!stack.empty()) {
      auto [lo, hi] = std::move(stack.back());
      stack.pop_back();
      const double hgt = height(lo, hi);
      if (hgt <= target || hi.theta - lo.theta < 1e-12 || out.evaluations >= max_evaluations) {
        out.bound = std::max(out.bound, hgt);
        continue;
      }
      Contact mid = contact(0.5 * (lo.theta + hi.theta), true);
      stack.emplace_back(mid, std::move(hi));
      stack.emplace_back(std::move(lo), std::move(mid));
    }
  }
  return out;
}

double tangency_residual(const MatrixPencil& pencil, const CloudRecord& record) {
  (void)pencil;
  return std::abs(record.eigenvalue - record.direction.dot(record.point));
}

double default_gap_tolerance(const MatrixPencil& pencil, const DirectionGrid& trace_grid) {
  const double mesh = trace_grid.mesh();
  return std::min(10.0 * mesh * mesh, 1e-2) * pencil.scale();
}

double default_negative_tolerance(const MatrixPencil& pencil) {
  return 1e-9 * std::max(1.0, pencil.scale());
}

MainTheoremReport verify_main_theorem(const MatrixPencil& pencil, const DirectionGrid& trace_grid,
                                      const DirectionGrid& test_grid, std::optional<double> tol,
                                      bool advisory, double planar_refinement) {
  const int n = pencil.n();
  if (test_grid.n != n) throw Error(ErrorKind::DimensionMismatch, "test grid dimension differs from n");
  if (n >= 4 && !advisory) {
    throw Error(ErrorKind::UnsupportedDimension, "hull verification needs n <= 3");
  }
  if (n < 2) throw Error(ErrorKind::UnsupportedDimension, "hull verification needs n >= 2");

  MainTheoremReport rep;
  rep.advisory = n >= 4;
  rep.trace_size = trace_grid.size();
  rep.test_size = test_grid.size();
  rep.tol = tol ? *tol : default_gap_tolerance(pencil, trace_grid);
  rep.tol_neg = default_negative_tolerance(pencil);

  BoundaryCloud cloud = trace_boundary_cloud(pencil, trace_grid);
  rep.cloud_points = static_cast<int>(cloud.points.size());
  rep.skipped = cloud.skipped;
  if (cloud.points.empty()) throw Error(ErrorKind::EmptyCloud, "no simple eigenvalue branch was traced");

  std::vector<double> support;
  support.reserve(test_grid.directions.size());
  for (const auto& u : test_grid.directions) support.push_back(support_function(pencil, u));
  auto gaps_against = [&](const std::vector<Vec>& candidates) {
    std::vector<double> gaps;
    gaps.reserve(support.size());
    for (size_t t = 0; t < support.size(); ++t) {
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& v : candidates) best = std::max(best, test_grid.directions[t].dot(v));
      gaps.push_back(support[t] - best);
    }
    return gaps;
  };

  if (n == 2 && planar_refinement > 0.0 && trace_grid.scheme == GridScheme::uniform_angle) {
    const std::vector<double> uniform = gaps_against(convex_hull(cloud.coordinates()).vertices);
    rep.uniform_max_gap = *std::max_element(uniform.begin(), uniform.end());
    rep.uniform_min_gap = *std::min_element(uniform.begin(), uniform.end());
    PlanarRefinement extra = refine_planar_boundary(pencil, trace_grid, planar_refinement);
    rep.refined = true;
    rep.refined_points = static_cast<int>(extra.cloud.points.size());
    rep.refinement_bound = extra.bound;
    rep.skipped += extra.cloud.skipped;
    cloud.points.insert(cloud.points.end(), std::make_move_iterator(extra.cloud.points.begin()),
                        std::make_move_iterator(extra.cloud.points.end()));
  }

  const std::vector<Vec> coords = cloud.coordinates();
  std::vector<Vec> candidates;
  if (n <= 3) {
    rep.hull = convex_hull(coords);
    candidates = rep.hull.vertices;
  } else {
    candidates = coords;
  }

  rep.gaps = gaps_against(candidates);
  rep.max_gap = -std::numeric_limits<double>::infinity();
  rep.min_gap = std::numeric_limits<double>::infinity();
  for (size_t t = 0; t < rep.gaps.size(); ++t) {
    const double gap = rep.gaps[t];
    if (gap > rep.max_gap) {
      rep.max_gap = gap;
      rep.argmax_direction = test_grid.directions[t];
    }
    rep.min_gap = std::min(rep.min_gap, gap);
    rep.max_abs_gap = std::max(rep.max_abs_gap, std::abs(gap));
  }
  rep.pass = rep.min_gap >= -rep.tol_neg && rep.max_gap <= rep.tol;
  return rep;
}

double facet_deficit(const MatrixPencil& pencil, const ConvexHull& hull) {
  if (hull.flat || hull.vertices.empty()) return 0.0;
  double worst = 0.0;
  if (hull.n == 2) {
    const size_t m = hull.vertices.size();
    for (size_t i = 0; i < m; ++i) {
      const Vec edge = hull.vertices[(i + 1) % m] - hull.vertices[i];
      const double len = edge.norm();
      if (len == 0.0) continue;
      Vec normal(2);
      normal << edge(1) / len, -edge(0) / len;
      worst = std::max(worst, support_function(pencil, normal) - normal.dot(hull.vertices[i]));
    }
    return worst;
  }
  for (const Facet& f : hull.facets) worst = std::max(worst, support_function(pencil, f.normal) - f.offset);
  return worst;
}

StateInclusionReport verify_state_inclusion(const MatrixPencil& pencil, const ConvexHull& hull,
                                            int samples, Rng& rng, double hull_gap) {
  StateInclusionReport rep;
  rep.facet_deficit = facet_deficit(pencil, hull);
  rep.slack = 1e-6 * std::max(1.0, pencil.scale()) + std::max({0.0, hull_gap, rep.facet_deficit});
  for (int s = 0; s < samples; ++s) {
    for (const DensityMatrix& rho : {sample_mixed_state(pencil.d(), rng), sample_pure_state(pencil.d(), rng)}) {
      const double v = hull_violation(hull, project_state(pencil, rho));
      ++rep.samples;
      rep.worst_violation = std::max(rep.worst_violation, v);
      if (v > rep.slack) ++rep.violations;
    }
  }
  return rep;
}

}  // namespace jnr
