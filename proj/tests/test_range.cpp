#include "doctest.h"

#include <cmath>
#include <numbers>

#include "jnr/builtin.hpp"
#include "jnr/hull.hpp"
#include "jnr/range.hpp"

using namespace jnr;

namespace {

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index k = 0;
  for (double x : xs) v(k++) = x;
  return v;
}

Vec random_vec(int n, Rng& rng) {
  std::normal_distribution<double> g;
  Vec v(n);
  for (int j = 0; j < n; ++j) v(j) = g(rng);
  return v;
}

double brute_support(const std::vector<Vec>& pts, const Vec& u) {
  double best = -INFINITY;
  for (const Vec& p : pts) best = std::max(best, u.dot(p));
  return best;
}

MatrixPencil scalar_pencil(std::initializer_list<double> values) {
  std::vector<HermitianMatrix> m;
  for (double a : values) m.push_back(HermitianMatrix::from_real(Eigen::MatrixXd::Constant(1, 1, a)));
  return MatrixPencil(m);
}

}  // namespace

TEST_CASE("direction grids are unit and distinct") {
  Rng rng(1);
  for (const DirectionGrid& g : {DirectionGrid::uniform_angle(360), DirectionGrid::fibonacci_sphere(500),
                                 DirectionGrid::random_sphere(4, 300, rng)}) {
    for (int k = 0; k < g.size(); ++k) {
      CHECK(std::abs(g.directions[k].norm() - 1.0) <= 1e-12);
      if (k > 0) CHECK((g.directions[k] - g.directions[k - 1]).norm() > 0.0);
    }
    CHECK(g.mesh() > 0.0);
  }
  CHECK(DirectionGrid::standard(2, 10).scheme == GridScheme::uniform_angle);
  CHECK(DirectionGrid::standard(3, 10).scheme == GridScheme::fibonacci_sphere);
  CHECK(DirectionGrid::standard(5, 10).scheme == GridScheme::random_sphere);
}

TEST_CASE("support function") {
  const MatrixPencil drop = drop_pencil().to_float();
  CHECK(support_function(drop, vec({1, 0, 0})) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(support_function(drop, vec({1, 0})), Error);

  const MatrixPencil qubit = qubit_disk_pencil().to_float();
  Rng rng(2);
  for (int s = 0; s < 20; ++s) {
    const Vec u = random_vec(2, rng).normalized();
    CHECK(support_function(qubit, u) == doctest::Approx(1.0).epsilon(1e-12));
  }

  const MatrixPencil p = random_pencil(5, 3, rng);
  for (int s = 0; s < 10; ++s) {
    const Vec u = random_vec(3, rng).normalized();
    const HermitianMatrix m = p.combine(std::span<const double>(u.data(), 3));
    CHECK(support_function(p, u) == doctest::Approx(lambda_max(m)).epsilon(1e-12));
    CHECK(support_function(p, Vec(-u)) == doctest::Approx(-lambda_min(m)).epsilon(1e-12));
  }

  const DirectionGrid g = DirectionGrid::fibonacci_sphere(1000);
  const SupportTable t = support_table(drop, g);
  REQUIRE(t.values.size() == 1000);
  for (int k = 0; k < g.size(); ++k) CHECK(std::abs(t.values[k] - drop_support(g.directions[k])) <= 1e-9);
}

TEST_CASE("tracing the qubit disk") {
  const MatrixPencil qubit = qubit_disk_pencil().to_float();
  const BoundaryCloud c = trace_boundary_cloud(qubit, DirectionGrid::uniform_angle(360));
  REQUIRE(c.points.size() == 720);
  CHECK(c.skipped == 0);
  for (const CloudRecord& r : c.points) {
    CHECK(std::abs(r.point.norm() - 1.0) <= 1e-9);
    CHECK(tangency_residual(qubit, r) <= 1e-14);
  }
}

TEST_CASE("tracing the drop") {
  const MatrixPencil drop = drop_pencil().to_float();
  const BoundaryCloud c = trace_boundary_cloud(drop, DirectionGrid::fibonacci_sphere(2000));
  int apex = 0;
  for (const CloudRecord& r : c.points) {
    const bool on_sphere = std::abs(r.point.norm() - 1.0) <= 1e-9;
    const bool at_apex = (r.point - vec({2, 0, 0})).norm() <= 1e-9;
    CHECK((on_sphere || at_apex));
    apex += at_apex;
  }
  CHECK(apex > 0);
}

TEST_CASE("scalar pencil traces a single point") {
  const MatrixPencil p = scalar_pencil({0.5, -2.0, 3.0});
  const BoundaryCloud c = trace_boundary_cloud(p, DirectionGrid::fibonacci_sphere(50));
  CHECK(c.points.size() == 50);
  for (const CloudRecord& r : c.points) CHECK((r.point - vec({0.5, -2.0, 3.0})).norm() <= 1e-15);

  const ConvexHull h = convex_hull(c.coordinates());
  Rng rng(3);
  const StateInclusionReport s = verify_state_inclusion(p, h, 100, rng);
  CHECK(s.violations == 0);
  CHECK(s.worst_violation <= 1e-12);
}

TEST_CASE("tangency residuals on a random pencil") {
  Rng rng(4);
  const MatrixPencil p = random_pencil(5, 3, rng);
  const BoundaryCloud c = trace_boundary_cloud(p, DirectionGrid::fibonacci_sphere(2000));
  double worst = 0.0;
  for (const CloudRecord& r : c.points) worst = std::max(worst, tangency_residual(p, r));
  CHECK(worst <= 1e-8);
  CHECK(c.points.size() + c.skipped == 5 * 2000);
}

TEST_CASE("cloud points lie in the range") {
  Rng rng(5);
  const MatrixPencil p = random_pencil(4, 3, rng);
  const BoundaryCloud c = trace_boundary_cloud(p, DirectionGrid::fibonacci_sphere(300));
  const DirectionGrid test = DirectionGrid::random_sphere(3, 200, rng);
  const SupportTable t = support_table(p, test);
  for (int k = 0; k < test.size(); ++k)
    for (const CloudRecord& r : c.points) CHECK(test.directions[k].dot(r.point) <= t.values[k] + 1e-8 * p.scale());
}

TEST_CASE("rotating the pencil rotates the cloud") {
  Rng rng(6);
  const MatrixPencil a = random_pencil(4, 2, rng);
  const int count = 360;
  const int shift = 25;
  const double theta = 2 * std::numbers::pi * shift / count;
  const double c = std::cos(theta), s = std::sin(theta);
  const MatrixPencil b({a[0] * c + a[1] * s, a[0] * (-s) + a[1] * c});

  const DirectionGrid g = DirectionGrid::uniform_angle(count);
  const BoundaryCloud ca = trace_boundary_cloud(a, g);
  const BoundaryCloud cb = trace_boundary_cloud(b, g);
  REQUIRE(ca.points.size() == cb.points.size());
  REQUIRE(ca.skipped == 0);
  Eigen::Matrix2d back;
  back << c, s, -s, c;
  const int d = a.d();
  for (int j = 0; j < count; ++j)
    for (int k = 0; k < d; ++k) {
      const CloudRecord& rb = cb.points[j * d + k];
      const CloudRecord& ra = ca.points[((j + shift) % count) * d + k];
      CHECK(rb.branch == ra.branch);
      CHECK((rb.point - back * ra.point).norm() <= 1e-9);
    }
}

TEST_CASE("translating the pencil translates the cloud") {
  Rng rng(7);
  const MatrixPencil a = random_pencil(4, 3, rng);
  const Vec shift = vec({0.3, -1.5, 2.0});
  std::vector<HermitianMatrix> m;
  for (int i = 0; i < 3; ++i) m.push_back(a[i] + HermitianMatrix::identity(4) * shift(i));
  const MatrixPencil b(m);
  const DirectionGrid g = DirectionGrid::fibonacci_sphere(400);
  const BoundaryCloud ca = trace_boundary_cloud(a, g);
  const BoundaryCloud cb = trace_boundary_cloud(b, g);
  REQUIRE(ca.points.size() == cb.points.size());
  for (size_t j = 0; j < ca.points.size(); ++j) {
    CHECK(ca.points[j].branch == cb.points[j].branch);
    CHECK((cb.points[j].point - ca.points[j].point - shift).norm() <= 1e-10);
  }
}

TEST_CASE("planar hulls") {
  const std::vector<Vec> square{vec({0, 0}), vec({1, 0}), vec({1, 1}), vec({0, 1}), vec({0.5, 0.5})};
  const ConvexHull h = convex_hull_2d(square);
  CHECK(h.vertices.size() == 4);
  CHECK(hull_support(h, vec({1, 0})) == 1.0);
  for (size_t k = 0; k < h.vertices.size(); ++k) {
    const Vec& p = h.vertices[k];
    const Vec& q = h.vertices[(k + 1) % 4];
    const Vec& r = h.vertices[(k + 2) % 4];
    CHECK((q - p)(0) * (r - q)(1) - (q - p)(1) * (r - q)(0) > 0.0);
  }
  CHECK(hull_violation(h, vec({0.5, 0.5})) < 0.0);
  CHECK(hull_violation(h, vec({2, 0.5})) == doctest::Approx(1.0));

  const std::vector<Vec> line{vec({0, 0}), vec({1, 1}), vec({2, 2})};
  const ConvexHull seg = convex_hull_2d(line);
  CHECK(seg.vertices.size() == 2);
  CHECK(seg.affine_dim == 1);
  const Vec normal = vec({1, -1}).normalized();
  CHECK(hull_support(seg, normal) == doctest::Approx(0.0));
  CHECK(hull_support(seg, vec({1, 1}).normalized()) == doctest::Approx(std::sqrt(8.0)));

  Rng rng(8);
  std::vector<Vec> cloud;
  for (int s = 0; s < 10000; ++s) cloud.push_back(random_vec(2, rng));
  const ConvexHull big = convex_hull_2d(cloud);
  for (int s = 0; s < 200; ++s) {
    const Vec u = random_vec(2, rng).normalized();
    CHECK(std::abs(hull_support(big, u) - brute_support(cloud, u)) <= 1e-12);
  }
}

TEST_CASE("spatial hulls") {
  std::vector<Vec> simplex{vec({0, 0, 0}), vec({1, 0, 0}), vec({0, 1, 0}), vec({0, 0, 1})};
  simplex.push_back(vec({0.25, 0.25, 0.25}));
  const ConvexHull t = convex_hull_3d(simplex);
  CHECK(t.vertices.size() == 4);
  CHECK(t.facets.size() == 4);
  CHECK_FALSE(t.flat);
  for (const Facet& f : t.facets)
    for (const Vec& p : simplex) CHECK(f.normal.dot(p) <= f.offset + 1e-9);

  Rng rng(9);
  std::vector<Vec> sphere;
  for (int s = 0; s < 1000; ++s) sphere.push_back(random_vec(3, rng).normalized());
  CHECK(convex_hull_3d(sphere).vertices.size() == 1000);

  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Vec> cloud;
    for (int s = 0; s < 500; ++s) cloud.push_back(random_vec(3, rng));
    const ConvexHull h = convex_hull_3d(cloud);
    for (const Facet& f : h.facets)
      for (const Vec& p : cloud) CHECK(f.normal.dot(p) <= f.offset + 1e-9 * h.scale);
    for (int s = 0; s < 50; ++s) {
      const Vec u = random_vec(3, rng).normalized();
      CHECK(std::abs(hull_support(h, u) - brute_support(cloud, u)) <= 1e-10);
    }
  }

  const std::vector<Vec> planar{vec({0, 0, 1}), vec({1, 0, 1}), vec({0, 1, 1}), vec({1, 1, 1}), vec({0.5, 0.5, 1})};
  const ConvexHull flat = convex_hull_3d(planar);
  CHECK(flat.flat);
  CHECK(flat.affine_dim == 2);
  CHECK(flat.vertices.size() == 4);
  CHECK(hull_violation(flat, vec({0.5, 0.5, 1.5})) == doctest::Approx(0.5));
}

TEST_CASE("verification on the qubit disk") {
  const MatrixPencil qubit = qubit_disk_pencil().to_float();
  const DirectionGrid trace = DirectionGrid::uniform_angle(720);
  const DirectionGrid test = DirectionGrid::uniform_angle(1440, 0.5);
  // 720 contacts on the circle alone leave 1 - cos(pi / 1440) at these angles.
  const MainTheoremReport plain = verify_main_theorem(qubit, trace, test);
  CHECK(plain.max_gap == doctest::Approx(1.0 - std::cos(std::numbers::pi / 1440)).epsilon(1e-6));
  const MainTheoremReport r = verify_main_theorem(qubit, trace, test, std::nullopt, false, 1e-7);
  CHECK(r.pass);
  CHECK(r.max_gap <= 1e-6);
  CHECK(r.min_gap >= -1e-9);

  Rng rng(10);
  const StateInclusionReport s = verify_state_inclusion(qubit, r.hull, 1000, rng, r.max_gap);
  CHECK(s.violations == 0);
}

TEST_CASE("verification on the drop reproduces its support") {
  const MatrixPencil drop = drop_pencil().to_float();
  const DirectionGrid test = DirectionGrid::fibonacci_sphere(5000);
  const MainTheoremReport r = verify_main_theorem(drop, DirectionGrid::fibonacci_sphere(5000), test);
  for (int k = 0; k < test.size(); ++k) {
    const double hull = drop_support(test.directions[k]) - r.gaps[k];
    CHECK(std::abs(hull - drop_support(test.directions[k])) <= 2e-3);
  }
  CHECK(r.pass);
}

TEST_CASE("verification on the cubic pencil") {
  const MatrixPencil p = chien_nakazato_pencil().to_float();
  const MainTheoremReport r =
      verify_main_theorem(p, DirectionGrid::fibonacci_sphere(20000), DirectionGrid::fibonacci_sphere(5000), 5e-3);
  CHECK(r.pass);
  CHECK(r.max_gap <= 5e-3);
  CHECK(r.min_gap >= -r.tol_neg);

  Rng rng(11);
  const StateInclusionReport s = verify_state_inclusion(p, r.hull, 10000, rng, r.max_gap);
  CHECK(s.samples == 20000);
  CHECK(s.violations == 0);
  CHECK(s.facet_deficit >= r.max_gap);
}

TEST_CASE("denser trace grids never do worse") {
  Rng rng(12);
  const MatrixPencil p = random_pencil(4, 2, rng);
  const DirectionGrid test = DirectionGrid::uniform_angle(1440, 0.6180339887498949);
  const MainTheoremReport coarse = verify_main_theorem(p, DirectionGrid::uniform_angle(360), test);
  const MainTheoremReport fine = verify_main_theorem(p, DirectionGrid::uniform_angle(720), test);
  CHECK(fine.max_gap <= coarse.max_gap + 1e-9);
}

TEST_CASE("planar pencils: refined hull matches the range") {
  Rng rng(13);
  const DirectionGrid trace = DirectionGrid::uniform_angle(1440);
  const DirectionGrid test = DirectionGrid::uniform_angle(1440, 0.6180339887498949);
  for (int trial = 0; trial < 5; ++trial) {
    const MatrixPencil p = random_pencil(2 + trial, 2, rng);
    const MainTheoremReport r = verify_main_theorem(p, trace, test, std::nullopt, false, 1e-7);
    CHECK(r.refined);
    CHECK(r.refinement_bound <= 1e-7);
    CHECK(r.max_gap <= 1e-5);
    CHECK(r.max_gap <= r.refinement_bound + 1e-12);
    CHECK(r.pass);
  }

  const PlanarRefinement pr = refine_planar_boundary(qubit_disk_pencil().to_float(), DirectionGrid::uniform_angle(64), 1e-8);
  CHECK(pr.bound <= 1e-8);
  for (const CloudRecord& rec : pr.cloud.points) CHECK(std::abs(rec.point.norm() - 1.0) <= 1e-9);
}

TEST_CASE("eigenvalue crossings of the cubic pencil") {
  const MatrixPencil p = chien_nakazato_pencil().to_float();
  const std::vector<DegenerateDirection> cr = find_degenerate_directions(p, DirectionGrid::fibonacci_sphere(20000));
  bool up = false, down = false;
  for (const DegenerateDirection& c : cr) {
    CHECK(c.gap <= 1e-6);
    up = up || (c.direction - vec({0, 0, 1})).norm() <= 1e-4;
    down = down || (c.direction - vec({0, 0, -1})).norm() <= 1e-4;
  }
  CHECK(up);
  CHECK(down);

  RingRefinement opts;
  opts.rings = 3;
  const BoundaryCloud rings = refine_near_degeneracies(p, cr, opts);
  CHECK_FALSE(rings.points.empty());
  for (const CloudRecord& r : rings.points) CHECK(tangency_residual(p, r) <= 1e-9);
}

TEST_CASE("high dimension is advisory") {
  Rng rng(14);
  const MatrixPencil p = random_pencil(3, 4, rng);
  const DirectionGrid g = DirectionGrid::random_sphere(4, 100, rng);
  try {
    verify_main_theorem(p, g, g);
    FAIL("expected UnsupportedDimension");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnsupportedDimension);
  }
  const MainTheoremReport r = verify_main_theorem(p, g, g, std::nullopt, true);
  CHECK(r.advisory);
}
