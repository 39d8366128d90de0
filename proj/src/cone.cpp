#include "jnr/cone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "jnr/error.hpp"

namespace jnr {

namespace {

std::span<const double> as_span(const Vec& v) {
  return {v.data(), static_cast<size_t>(v.size())};
}

Vec gaussian(int n, Rng& rng) {
  std::normal_distribution<double> normal;
  Vec v(n);
  for (int j = 0; j < n; ++j) v(j) = normal(rng);
  return v;
}

Vec unit_e(int nvars) {
  Vec e = Vec::Zero(nvars);
  e(0) = 1.0;
  return e;
}

}  // namespace

ConeSpec ConeSpec::from_polynomial(const FloatPoly& f, const Vec& e, Rng& rng, int trials) {
  ConeSpec spec;
  spec.f = f;
  spec.e = e;
  spec.certified = hyperbolicity_check(f, e, trials, rng);
  if (spec.certified.verdict != Verdict::hyperbolic) {
    throw Error(ErrorKind::InvalidInput,
                std::string("polynomial is not certified hyperbolic: ") + to_string(spec.certified.verdict));
  }
  return spec;
}

ConeSpec ConeSpec::from_pencil(const MatrixPencil& pencil, Rng& rng, int trials) {
  const FloatPoly f = charpoly_float(pencil, rng());
  const double norm1 = coeff_norm1(f);
  for (int k = 0; k < 20; ++k) {
    const Vec x = gaussian(pencil.n() + 1, rng);
    const double scale = norm1 * std::pow(x.cwiseAbs().maxCoeff(), f.degree());
    if (std::abs(eval(f, x) - pencil_det(pencil, x)) > 1e-9 * scale) {
      throw Error(ErrorKind::InvalidInput, "interpolated determinant disagrees with the pencil");
    }
  }
  // f(te - a) = det(tI - M(a)) with M(a) Hermitian, so its roots are the real
  // eigenvalues of M(a). Each trial confirms that they are roots.
  ConeSpec spec;
  spec.f = f;
  spec.e = unit_e(pencil.n() + 1);
  spec.pencil = pencil;
  spec.certified.e = spec.e;
  for (int k = 0; k < trials; ++k) {
    const Vec a = gaussian(pencil.n() + 1, rng);
    const auto line = restrict_to_line(f, Vec(-a), spec.e);
    double cnorm = 0.0;
    for (double c : line) cnorm += std::abs(c);
    for (double t : eig_hermitian(pencil.homogeneous(as_span(a))).values) {
      double v = 0.0;
      for (auto it = line.rbegin(); it != line.rend(); ++it) v = v * t + *it;
      if (std::abs(v) > 1e-8 * cnorm * std::pow(std::max(1.0, std::abs(t)), f.degree())) {
        throw Error(ErrorKind::InvalidInput, "eigenvalue is not a root of the interpolated determinant");
      }
    }
    ++spec.certified.samples_checked;
  }
  spec.certified.verdict = Verdict::hyperbolic;
  return spec;
}

FunctionalPoint FunctionalPoint::from(const Vec& ell) {
  FunctionalPoint p;
  p.ell = ell;
  if (ell.size() > 0 && ell(0) != 0.0) p.chart_point = ell.tail(ell.size() - 1) / ell(0);
  return p;
}

const char* to_string(Membership m) {
  switch (m) {
    case Membership::inside: return "inside";
    case Membership::boundary: return "boundary";
    case Membership::outside: return "outside";
  }
  return "outside";
}

ConeMembership cone_membership(const ConeSpec& spec, const Vec& a, bool force_roots) {
  if (a.size() != spec.nvars()) throw Error(ErrorKind::ArityMismatch, "point has wrong length");
  ConeMembership m;
  m.tolerance = 1e-8 * (1.0 + a.norm());
  if (spec.pencil && !force_roots) {
    m.method = "eigen";
    m.margin = lambda_min(spec.pencil->homogeneous(as_span(a)));
  } else {
    m.method = "roots";
    // f(a + s e) = 0  <=>  t = -s is a root of f(t e - a).
    const auto roots = poly_roots(restrict_to_line(spec.f, a, spec.e));
    m.margin = std::numeric_limits<double>::infinity();
    for (const auto& s : roots) m.margin = std::min(m.margin, -s.real());
  }
  if (m.margin > m.tolerance) {
    m.membership = Membership::inside;
  } else if (m.margin >= -m.tolerance) {
    m.membership = Membership::boundary;
  } else {
    m.membership = Membership::outside;
  }
  return m;
}

std::vector<Vec> sample_cone_boundary(const ConeSpec& spec, int count, Rng& rng) {
  std::vector<Vec> out;
  const int nv = spec.nvars();
  if (spec.pencil) {
    for (int k = 0; k < count; ++k) {
      const Vec u = gaussian(nv - 1, rng).normalized();
      Vec x(nv);
      x(0) = -lambda_min(spec.pencil->combine(as_span(u)));
      x.tail(nv - 1) = u;
      out.push_back(x);
    }
    return out;
  }
  for (int attempt = 0; attempt < 100 * std::max(count, 1) && static_cast<int>(out.size()) < count; ++attempt) {
    const Vec d = gaussian(nv, rng);
    // Roots of t -> f(e + t d) are real; the smallest positive one leaves the cone.
    double first = std::numeric_limits<double>::infinity();
    for (const auto& t : poly_roots(restrict_to_line(spec.f, spec.e, d)))
      if (t.real() > 0) first = std::min(first, t.real());
    if (!std::isfinite(first)) continue;
    out.push_back(spec.e + first * d);
  }
  return out;
}

std::vector<Vec> homogenized_contacts(const BoundaryCloud& cloud) {
  std::vector<Vec> out;
  out.reserve(cloud.points.size());
  for (const auto& r : cloud.points) {
    Vec ell(cloud.n + 1);
    ell(0) = 1.0;
    ell.tail(cloud.n) = r.point;
    out.push_back(ell);
  }
  return out;
}

DualConeMembership dual_cone_membership(const ConeSpec& spec, const FunctionalPoint& ell,
                                        const BoundaryCloud& cloud, int fresh, Rng& rng) {
  const int nv = spec.nvars();
  if (ell.ell.size() != nv) throw Error(ErrorKind::ArityMismatch, "functional has wrong length");
  if (spec.pencil && cloud.points.empty()) {
    throw Error(ErrorKind::EmptyCloud, "dual cone test needs a traced cloud");
  }
  const double len = ell.ell.norm();
  if (len == 0.0) throw Error(ErrorKind::InvalidInput, "functional is zero");
  const Vec l = ell.ell / len;

  std::vector<Vec> points{spec.e};
  for (const auto& r : cloud.points) {
    if (r.branch != 0) continue;
    Vec x(nv);
    x(0) = -r.eigenvalue;
    x.tail(nv - 1) = r.direction;
    points.push_back(x);
  }
  for (auto& x : sample_cone_boundary(spec, fresh, rng)) points.push_back(std::move(x));

  DualConeMembership res;
  res.margin = std::numeric_limits<double>::infinity();
  for (const auto& x : points) {
    const double norm = x.norm();
    if (norm == 0.0) continue;
    const double v = l.dot(x) / norm;
    ++res.evaluations;
    if (v < res.margin) {
      res.margin = v;
      if (v < -1e-8) res.witness = x;
    }
  }
  res.membership = res.margin < -1e-8 ? Membership::outside : Membership::inside;
  if (res.membership == Membership::inside) res.witness.reset();
  return res;
}

FunctionalPoint normal_ray(const ConeSpec& spec, const Vec& x) {
  if (x.size() != spec.nvars()) throw Error(ErrorKind::ArityMismatch, "point has wrong length");
  if (cone_membership(spec, x).membership != Membership::boundary) {
    throw Error(ErrorKind::NotOnVariety, "point is not on the cone boundary");
  }
  Vec g = gradient(spec.f, x);
  const double scale =
      coeff_norm1(spec.f) * std::pow(std::max(1.0, x.cwiseAbs().maxCoeff()), spec.f.degree() - 1);
  if (g.norm() <= 1e-8 * scale) {
    throw Error(ErrorKind::SingularBoundaryPoint, "gradient vanishes at a singular boundary point");
  }
  if (g.dot(spec.e) < 0) g = -g;
  return FunctionalPoint::from(g);
}

std::vector<FunctionalPoint> halfspace_filter(const std::vector<FunctionalPoint>& points, const Vec& e) {
  std::vector<FunctionalPoint> out;
  for (const auto& p : points)
    if (p.ell.dot(e) >= 0.0) out.push_back(p);
  return out;
}

BaseSlice base_slice(const std::vector<Vec>& cone_points, const Vec& ell) {
  if (ell.norm() == 0.0) throw Error(ErrorKind::InvalidInput, "slicing functional is zero");
  BaseSlice s;
  for (const auto& x : cone_points) {
    const double v = ell.dot(x);
    if (v > 1e-10 * ell.norm() * x.norm()) {
      s.points.push_back(x / v);
    } else {
      ++s.dropped;
    }
  }
  return s;
}

GenerationReport generated_by(const Vec& ell, const std::vector<Vec>& generators, double tolerance) {
  GenerationReport rep;
  rep.tolerance = tolerance;
  const double len = ell.norm();
  if (len == 0.0 || generators.empty()) {
    rep.residual = len == 0.0 ? 0.0 : 1.0;
    rep.generated = len == 0.0;
    return rep;
  }
  const size_t limit = 500;
  const size_t count = std::min(limit, generators.size());
  Eigen::MatrixXd g(ell.size(), static_cast<Eigen::Index>(count));
  for (size_t k = 0; k < count; ++k) {
    const Vec& v = generators[k * generators.size() / count];
    g.col(static_cast<Eigen::Index>(k)) = v / v.norm();
  }
  const NnlsResult r = nnls(g, ell / len);
  rep.generators = static_cast<int>(count);
  rep.active = static_cast<int>((r.x.array() > 0).count());
  rep.residual = r.residual;
  rep.generated = rep.residual <= tolerance;
  return rep;
}

}  // namespace jnr
