#include "doctest.h"

#include <cmath>

#include "jnr/builtin.hpp"
#include "jnr/cone.hpp"

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

ConeSpec lorentz_cone(Rng& rng) { return ConeSpec::from_polynomial(to_float(lorentz_quadric(3)), vec({1, 0, 0}), rng); }

// l(x) = tr(x_0 I + sum x_i A_i)
Vec trace_functional(const MatrixPencil& p) {
  Vec l(p.n() + 1);
  l(0) = p.d();
  for (int i = 0; i < p.n(); ++i) l(i + 1) = p[i].trace();
  return l;
}

MatrixPencil block_pencil(const MatrixPencil& a, const MatrixPencil& b) {
  std::vector<HermitianMatrix> m;
  const int d = a.d() + b.d();
  for (int i = 0; i < a.n(); ++i) {
    Eigen::MatrixXcd blk = Eigen::MatrixXcd::Zero(d, d);
    blk.topLeftCorner(a.d(), a.d()) = a[i].matrix();
    blk.bottomRightCorner(b.d(), b.d()) = b[i].matrix();
    m.emplace_back(blk);
  }
  return MatrixPencil(m);
}

}  // namespace

TEST_CASE("cone specs") {
  Rng rng(1);
  const ConeSpec l = lorentz_cone(rng);
  CHECK(l.certified.verdict == Verdict::hyperbolic);
  CHECK_FALSE(l.pencil.has_value());

  const ConeSpec s = ConeSpec::from_pencil(chien_nakazato_pencil().to_float(), rng);
  REQUIRE(s.pencil.has_value());
  CHECK(s.e == vec({1, 0, 0, 0}));
  CHECK(coeff_norm2(s.f - to_float(chien_nakazato_cubic())) <= 1e-9);

  const FloatPoly sumsq = to_float(poly_from_terms(2, 2, {{{2, 0}, 1}, {{0, 2}, 1}}));
  CHECK_THROWS_AS(ConeSpec::from_polynomial(sumsq, vec({1, 0}), rng), Error);
}

TEST_CASE("cone membership") {
  Rng rng(2);
  const ConeSpec l = lorentz_cone(rng);
  const ConeMembership at_e = cone_membership(l, vec({1, 0, 0}));
  CHECK(at_e.membership == Membership::inside);
  CHECK(at_e.margin == doctest::Approx(1.0));
  CHECK(at_e.method == "roots");
  CHECK(cone_membership(l, vec({1, 1, 0})).membership == Membership::boundary);
  CHECK(cone_membership(l, vec({1, 2, 0})).membership == Membership::outside);
  CHECK(cone_membership(l, vec({-1, 0, 0})).membership == Membership::outside);

  const ConeSpec s = ConeSpec::from_pencil(chien_nakazato_pencil().to_float(), rng);
  const ConeMembership id = cone_membership(s, vec({1, 0, 0, 0}));
  CHECK(id.membership == Membership::inside);
  CHECK(id.margin == doctest::Approx(1.0));
  CHECK(id.method == "eigen");
}

TEST_CASE("roots and eigenvalues classify alike") {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const ConeSpec s = ConeSpec::from_pencil(random_pencil(2 + trial % 4, 3, rng), rng);
    for (int k = 0; k < 100; ++k) {
      const Vec a = random_vec(4, rng);
      const ConeMembership eig = cone_membership(s, a);
      const ConeMembership roots = cone_membership(s, a, true);
      CHECK(eig.membership == roots.membership);
      CHECK(std::abs(eig.margin - roots.margin) <= 1e-7);
    }
  }
}

TEST_CASE("dual cone membership") {
  Rng rng(4);
  const ConeSpec l = lorentz_cone(rng);
  const BoundaryCloud none;
  CHECK(dual_cone_membership(l, FunctionalPoint::from(vec({1, 0, 0})), none, 500, rng).membership ==
        Membership::inside);
  const DualConeMembership out = dual_cone_membership(l, FunctionalPoint::from(vec({0, 1, 0})), none, 500, rng);
  CHECK(out.membership == Membership::outside);
  REQUIRE(out.witness.has_value());
  CHECK(out.witness->dot(vec({0, 1, 0})) < 0.0);
  CHECK(cone_membership(l, *out.witness).membership != Membership::outside);

  const MatrixPencil p = chien_nakazato_pencil().to_float();
  const ConeSpec s = ConeSpec::from_pencil(p, rng);
  const BoundaryCloud cloud = trace_boundary_cloud(p, DirectionGrid::fibonacci_sphere(2000));
  const DualConeMembership tr = dual_cone_membership(s, FunctionalPoint::from(trace_functional(p)), cloud, 200, rng);
  CHECK(tr.membership == Membership::inside);
  CHECK(tr.margin >= 0.0);
  CHECK_THROWS_AS(dual_cone_membership(s, FunctionalPoint::from(trace_functional(p)), none, 10, rng), Error);
}

TEST_CASE("normal rays") {
  Rng rng(5);
  const ConeSpec l = lorentz_cone(rng);
  const FunctionalPoint r = normal_ray(l, vec({1, 1, 0}));
  CHECK((r.ell.normalized() - vec({2, -2, 0}).normalized()).norm() <= 1e-12);
  CHECK(r.ell.dot(l.e) > 0.0);
  const FunctionalPoint scaled = normal_ray(l, vec({3, 3, 0}));
  CHECK((scaled.ell.normalized() - r.ell.normalized()).norm() <= 1e-12);
  REQUIRE(r.chart_point.has_value());
  CHECK((*r.chart_point - vec({-1, 0})).norm() <= 1e-12);

  const ConeSpec s = ConeSpec::from_pencil(chien_nakazato_pencil().to_float(), rng);
  try {
    normal_ray(s, vec({0, 0, 0, 1}));
    FAIL("expected SingularBoundaryPoint");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularBoundaryPoint);
  }
}

TEST_CASE("normal rays lie in the dual cone") {
  Rng rng(6);
  const MatrixPencil p = random_pencil(4, 3, rng);
  const ConeSpec s = ConeSpec::from_pencil(p, rng);
  const BoundaryCloud cloud = trace_boundary_cloud(p, DirectionGrid::fibonacci_sphere(1000));
  for (const Vec& x : sample_cone_boundary(s, 50, rng)) {
    CHECK(cone_membership(s, x).membership == Membership::boundary);
    const FunctionalPoint r = normal_ray(s, x);
    CHECK(r.ell.dot(s.e) > 0.0);
    CHECK(std::abs(r.ell.normalized().dot(x)) <= 1e-8 * x.norm());
    CHECK(dual_cone_membership(s, r, cloud, 50, rng).membership == Membership::inside);
  }
}

TEST_CASE("boundary sampling without a pencil") {
  Rng rng(7);
  const ConeSpec l = lorentz_cone(rng);
  for (const Vec& x : sample_cone_boundary(l, 100, rng)) {
    CHECK(std::abs(x(0) * x(0) - x(1) * x(1) - x(2) * x(2)) <= 1e-9 * x.squaredNorm());
    CHECK(x(0) > 0.0);
  }
}

TEST_CASE("half-space filter") {
  const Vec e = vec({1, 0, 0});
  const std::vector<FunctionalPoint> pts{FunctionalPoint::from(vec({1, 2, 3})), FunctionalPoint::from(vec({-1, -2, -3})),
                                         FunctionalPoint::from(vec({0, 1, 0})), FunctionalPoint::from(vec({-2, 1, 0}))};
  const std::vector<FunctionalPoint> kept = halfspace_filter(pts, e);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].ell == vec({1, 2, 3}));
  CHECK(kept[1].ell == vec({0, 1, 0}));
  CHECK_FALSE(kept[1].chart_point.has_value());

  Rng rng(8);
  const MatrixPencil p = random_pencil(3, 2, rng);
  std::vector<FunctionalPoint> contacts;
  for (const Vec& c : homogenized_contacts(trace_boundary_cloud(p, DirectionGrid::uniform_angle(100))))
    contacts.push_back(FunctionalPoint::from(c));
  CHECK(halfspace_filter(contacts, e).size() == contacts.size());
}

TEST_CASE("base slices") {
  Rng rng(9);
  const MatrixPencil p = random_pencil(3, 2, rng);
  const Vec tr = trace_functional(p);
  std::vector<Vec> cone_points;
  for (int s = 0; s < 50; ++s) {
    Vec x = random_vec(3, rng);
    x(0) = -lambda_min(p.combine(std::span<const double>(x.data() + 1, 2))) + std::abs(x(0));
    cone_points.push_back(x);
  }
  cone_points.push_back(vec({0, 0, 0}));
  const BaseSlice slice = base_slice(cone_points, tr);
  CHECK(slice.dropped == 1);
  REQUIRE(slice.points.size() == 50);
  for (const Vec& x : slice.points) {
    const HermitianMatrix m = p.homogeneous(std::span<const double>(x.data(), 3));
    CHECK(m.trace() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(lambda_min(m) >= -1e-12);
  }

  const BaseSlice ray = base_slice({vec({2, 0, 0}), vec({5, 0, 0})}, vec({1, 3, -1}));
  REQUIRE(ray.points.size() == 2);
  for (const Vec& x : ray.points) CHECK((x - vec({1, 0, 0})).norm() <= 1e-15);
}

TEST_CASE("density matrices from the base land in the verified hull") {
  Rng rng(10);
  const MatrixPencil p = random_pencil(3, 2, rng);
  const MainTheoremReport r = verify_main_theorem(p, DirectionGrid::uniform_angle(1440),
                                                  DirectionGrid::uniform_angle(1440, 0.6180339887498949),
                                                  std::nullopt, false, 1e-7);
  REQUIRE(r.pass);
  for (int s = 0; s < 500; ++s) {
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Random(3, 3);
    const HermitianMatrix psd(Eigen::MatrixXcd(g * g.adjoint()));
    const DensityMatrix rho(psd * (1.0 / psd.trace()));
    CHECK(hull_violation(r.hull, project_state(p, rho)) <= 1e-6);
  }
}

TEST_CASE("contacts generate the dual cone") {
  Rng rng(11);
  const MatrixPencil p = random_pencil(4, 2, rng);
  const ConeSpec s = ConeSpec::from_pencil(p, rng);
  BoundaryCloud cloud = trace_boundary_cloud(p, DirectionGrid::uniform_angle(720));
  const std::vector<Vec> gens = homogenized_contacts(cloud);
  for (int k = 0; k < 20; ++k) {
    // (1, pi(rho)) is a dual-cone functional for every state rho.
    Vec ell(3);
    ell << 1.0, project_state(p, sample_mixed_state(4, rng));
    REQUIRE(dual_cone_membership(s, FunctionalPoint::from(ell), cloud, 20, rng).membership == Membership::inside);
    const GenerationReport g = generated_by(ell, gens);
    CHECK(g.generated);
    CHECK(g.residual <= 1e-4);
    CHECK(g.active <= 3);
  }
  Vec outside(3);
  outside << 1.0, 10.0, 0.0;
  CHECK_FALSE(generated_by(outside, gens).generated);
}

TEST_CASE("admitting contacts near crossings leaves the planar cone unchanged") {
  Rng rng(12);
  const MatrixPencil p = block_pencil(random_pencil(2, 2, rng), random_pencil(3, 2, rng));
  const DirectionGrid grid = DirectionGrid::uniform_angle(1440);
  BoundaryCloud regular = trace_boundary_cloud(p, grid);
  const BoundaryCloud top = refine_planar_boundary(p, grid, 1e-8).cloud;
  regular.points.insert(regular.points.end(), top.points.begin(), top.points.end());

  const std::vector<DegenerateDirection> crossings = find_degenerate_directions(p, grid);
  CHECK_FALSE(crossings.empty());
  BoundaryCloud all = regular;
  const BoundaryCloud near = refine_near_degeneracies(p, crossings);
  all.points.insert(all.points.end(), near.points.begin(), near.points.end());
  CHECK(all.points.size() > regular.points.size());

  const ConvexHull a = convex_hull(regular.coordinates());
  const ConvexHull b = convex_hull(all.coordinates());
  for (const Vec& u : DirectionGrid::uniform_angle(1440, 0.6180339887498949).directions)
    CHECK(std::abs(hull_support(a, u) - hull_support(b, u)) <= 1e-6);
}
