#include "jnr/dual.hpp"

#include <Eigen/SVD>
#include <boost/geometry.hpp>
#include <boost/geometry/index/rtree.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <iterator>
#include <numeric>

#include "jnr/error.hpp"

namespace jnr {

SymmetricForm::SymmetricForm(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorKind::InvalidInput, "symmetric form needs a nonempty square matrix");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw Error(ErrorKind::InvalidInput, "matrix is not symmetric");
  }
  m_ = 0.5 * (m + m.transpose());
}

FloatPoly SymmetricForm::to_poly() const {
  FloatPoly p(dim(), 2);
  for (int j = 0; j < dim(); ++j)
    for (int k = 0; k < dim(); ++k) {
      Exponent e(static_cast<size_t>(dim()), 0);
      e[j] += 1;
      e[k] += 1;
      p.add_term(e, m_(j, k));
    }
  return p;
}

ExactSymmetricForm::ExactSymmetricForm(int dim, std::vector<Rational> entries)
    : dim_(dim), entries_(std::move(entries)) {
  if (dim < 1 || entries_.size() != static_cast<size_t>(dim) * dim) {
    throw Error(ErrorKind::InvalidInput, "symmetric form needs dim*dim entries");
  }
  for (int j = 0; j < dim; ++j)
    for (int k = j + 1; k < dim; ++k)
      if ((*this)(j, k) != (*this)(k, j)) throw Error(ErrorKind::InvalidInput, "matrix is not symmetric");
}

ExactPoly ExactSymmetricForm::to_poly() const {
  ExactPoly p(dim_, 2);
  for (int j = 0; j < dim_; ++j)
    for (int k = 0; k < dim_; ++k) {
      Exponent e(static_cast<size_t>(dim_), 0);
      e[j] += 1;
      e[k] += 1;
      p.add_term(e, (*this)(j, k));
    }
  return p;
}

SymmetricForm quadric_dual(const SymmetricForm& m) {
  const Eigen::MatrixXd& a = m.matrix();
  const double scale = a.cwiseAbs().maxCoeff();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!(std::abs(lu.determinant()) > 1e-10 * std::pow(scale, m.dim()))) {
    throw Error(ErrorKind::SingularForm, "quadric is singular");
  }
  const Eigen::MatrixXd inv = lu.inverse();
  return SymmetricForm(0.5 * (inv + inv.transpose()));
}

ExactSymmetricForm quadric_dual(const ExactSymmetricForm& m, bool integer_entries) {
  const int d = m.dim();
  // Gauss-Jordan on [M | I].
  std::vector<std::vector<Rational>> aug(d, std::vector<Rational>(2 * d));
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) aug[j][k] = m(j, k);
    aug[j][d + j] = 1;
  }
  for (int col = 0; col < d; ++col) {
    int pivot = col;
    while (pivot < d && aug[pivot][col] == 0) ++pivot;
    if (pivot == d) throw Error(ErrorKind::SingularForm, "quadric is singular");
    std::swap(aug[pivot], aug[col]);
    const Rational inv = 1 / aug[col][col];
    for (auto& v : aug[col]) v *= inv;
    for (int r = 0; r < d; ++r) {
      if (r == col || aug[r][col] == 0) continue;
      const Rational factor = aug[r][col];
      for (int k = 0; k < 2 * d; ++k) aug[r][k] -= factor * aug[col][k];
    }
  }
  std::vector<Rational> out;
  out.reserve(static_cast<size_t>(d) * d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) out.push_back(aug[j][d + k]);
  if (integer_entries) {
    mpz_class den = 1;
    for (const auto& r : out) den = lcm(den, mpz_class(r.get_den()));
    mpz_class num = 0;
    for (const auto& r : out) num = gcd(num, mpz_class(r.get_num() * (den / r.get_den())));
    for (auto& r : out) {
      r = Rational(mpz_class(r.get_num() * (den / r.get_den())) / num);
    }
  }
  return ExactSymmetricForm(d, std::move(out));
}

// ---------------------------------------------------------------------------

namespace {

// Newton iteration on a univariate polynomial (ascending coefficients) until
// the step stalls; double roots converge only linearly, which is the point:
// they end up where the gradient test can reject them.
Complex polish_root(std::span<const double> c, Complex t, bool real) {
  for (int it = 0; it < 100; ++it) {
    Complex p = 0.0;
    Complex dp = 0.0;
    for (size_t k = c.size(); k-- > 0;) {
      dp = dp * t + p;
      p = p * t + c[k];
    }
    if (dp == Complex(0.0)) break;
    Complex step = p / dp;
    if (real) step = step.real();
    t -= step;
    if (std::abs(step) <= 1e-15 * (std::abs(t) + 1.0)) break;
  }
  return t;
}

std::span<const Complex> as_span(const Eigen::VectorXcd& v) {
  return {v.data(), static_cast<size_t>(v.size())};
}

double complex_norm(const std::vector<Complex>& v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

}  // namespace

std::vector<VarietyPoint> sample_variety_points(const FloatPoly& f, int count, Rng& rng) {
  if (f.degree() < 1 || f.is_zero()) throw Error(ErrorKind::InvalidInput, "f must be nonconstant");
  const int n = f.nvars();
  const double norm1 = coeff_norm1(f);
  std::normal_distribution<double> normal;
  std::vector<VarietyPoint> out;
  const long max_trials = 100L * std::max(count, 1);
  for (long trial = 0; trial < max_trials && static_cast<int>(out.size()) < count; ++trial) {
    Vec a(n);
    Vec b(n);
    for (int j = 0; j < n; ++j) {
      a(j) = normal(rng);
      b(j) = normal(rng);
    }
    const auto coeffs = restrict_to_line(f, a, b);
    if (std::all_of(coeffs.begin(), coeffs.end(), [](double c) { return c == 0.0; })) continue;
    const std::vector<Complex> roots = poly_roots(coeffs);
    for (const Complex& root : roots) {
      // A generic line crosses V(f) transversally at regular points, so a
      // repeated root marks a singular point (or a rare tangency).
      bool repeated = false;
      for (const Complex& other : roots)
        if (&other != &root && std::abs(other - root) <= 1e-6 * (1.0 + std::abs(root))) repeated = true;
      if (repeated) continue;
      const bool real = std::abs(root.imag()) <= 1e-9 * (1.0 + std::abs(root));
      if (!real && root.imag() < 0) continue;  // one representative per conjugate pair
      const Complex t = polish_root(coeffs, real ? Complex(root.real()) : root, real);
      Eigen::VectorXcd x = a.cast<Complex>() + t * b.cast<Complex>();
      const double len = x.norm();
      if (!(len > 0) || !std::isfinite(len)) continue;
      x /= len;
      if (std::abs(eval<double, Complex>(f, as_span(x))) > 1e-10 * norm1) continue;
      if (complex_norm(gradient<double, Complex>(f, as_span(x))) <= 1e-8 * norm1) continue;
      out.push_back({std::move(x), real});
      if (static_cast<int>(out.size()) == count) break;
    }
  }
  if (static_cast<int>(out.size()) < count) {
    throw Error(ErrorKind::InsufficientSamples,
                "found " + std::to_string(out.size()) + " of " + std::to_string(count) + " regular points");
  }
  return out;
}

Eigen::VectorXcd tangent_functional(const FloatPoly& f, const Eigen::VectorXcd& x) {
  const auto g = gradient<double, Complex>(f, as_span(x));
  Eigen::VectorXcd ell = Eigen::Map<const Eigen::VectorXcd>(g.data(), static_cast<Eigen::Index>(g.size()));
  const double len = ell.norm();
  if (len == 0.0) throw Error(ErrorKind::SingularBoundaryPoint, "gradient vanishes");
  return ell / len;
}

namespace {

Complex eval_monomial(const Exponent& e, const Eigen::VectorXcd& y) {
  Complex v = 1.0;
  for (size_t j = 0; j < e.size(); ++j)
    for (int k = 0; k < e[j]; ++k) v *= y(static_cast<Eigen::Index>(j));
  return v;
}

Complex eval_form(const FloatPoly& q, const Eigen::VectorXcd& y) {
  return eval<double, Complex>(q, as_span(y));
}

long binomial(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

DualFitResult dual_fit(const FloatPoly& f, int max_degree, Rng& rng) {
  if (max_degree < 1) throw Error(ErrorKind::InvalidInput, "max_degree must be at least 1");
  const int n = f.nvars();
  const int max_monomials = static_cast<int>(binomial(n + max_degree - 1, max_degree));
  const int fit_count = 2 * max_monomials + 20;
  const int held_count = 40;
  const auto pts = sample_variety_points(f, fit_count + held_count, rng);

  std::vector<Eigen::VectorXcd> ells;
  std::vector<bool> real;
  ells.reserve(pts.size());
  for (const auto& p : pts) {
    ells.push_back(tangent_functional(f, p.x));
    real.push_back(p.real);
  }

  DualFitResult res;
  res.samples_used = fit_count;
  res.held_out = held_count;

  // Every tangent hyperplane equal: the dual is a single point.
  bool same = true;
  for (const auto& ell : ells) same = same && std::abs(ells.front().dot(ell)) >= 1.0 - 1e-9;
  if (same) {
    Eigen::Index big = 0;
    ells.front().cwiseAbs().maxCoeff(&big);
    const Complex phase = ells.front()(big) / std::abs(ells.front()(big));
    res.point_dual = (ells.front() / phase).real();
    res.form = FloatPoly(n, 0);
    return res;
  }

  for (int deg = 1; deg <= max_degree; ++deg) {
    const auto monos = monomials(n, deg);
    const Eigen::Index cols = static_cast<Eigen::Index>(monos.size());
    std::vector<Eigen::RowVectorXd> rows;
    for (int s = 0; s < fit_count; ++s) {
      Eigen::RowVectorXd re(cols);
      Eigen::RowVectorXd im(cols);
      for (Eigen::Index j = 0; j < cols; ++j) {
        const Complex v = eval_monomial(monos[j], ells[s]);
        re(j) = v.real();
        im(j) = v.imag();
      }
      rows.push_back(re);
      if (!real[s]) rows.push_back(im);
    }
    Eigen::MatrixXd a(static_cast<Eigen::Index>(rows.size()), cols);
    for (size_t r = 0; r < rows.size(); ++r) a.row(static_cast<Eigen::Index>(r)) = rows[r];

    Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinV);
    const Vec& sigma = svd.singularValues();
    DegreeAttempt att;
    att.degree = deg;
    att.monomials = static_cast<int>(cols);
    att.sigma_ratio = sigma(cols - 1) / sigma(0);
    att.singular_gap = cols > 1 ? sigma(cols - 1) / sigma(cols - 2) : 0.0;
    att.residual_rms = std::numeric_limits<double>::quiet_NaN();

    if (att.sigma_ratio < 1e-8) {
      Vec v = svd.matrixV().col(cols - 1);
      Eigen::Index big = 0;
      v.cwiseAbs().maxCoeff(&big);
      if (v(big) < 0) v = -v;
      FloatPoly q(n, deg);
      for (Eigen::Index j = 0; j < cols; ++j) q.add_term(monos[j], v(j));
      double sum = 0.0;
      for (int s = fit_count; s < fit_count + held_count; ++s) sum += std::norm(eval_form(q, ells[s]));
      att.residual_rms = std::sqrt(sum / held_count);
      if (att.residual_rms <= 1e-6) {
        att.accepted = true;
        res.degree = deg;
        res.form = q;
        res.residual_rms = att.residual_rms;
        res.singular_gap = att.singular_gap;
        res.attempts.push_back(att);
        return res;
      }
    }
    res.attempts.push_back(att);
  }
  throw Error(ErrorKind::NoFormFound, "no dual form up to degree " + std::to_string(max_degree));
}

DualFormReport verify_dual_form(const FloatPoly& f, const FloatPoly& q, int samples, Rng& rng) {
  if (q.nvars() != f.nvars()) throw Error(ErrorKind::ArityMismatch, "form and variety differ in arity");
  const double qn = coeff_norm2(q);
  if (qn == 0.0) throw Error(ErrorKind::InvalidInput, "dual form is zero");
  const FloatPoly qu = q.scaled(1.0 / qn);
  DualFormReport rep;
  double sum = 0.0;
  for (const auto& p : sample_variety_points(f, samples, rng)) {
    const double r = std::abs(eval_form(qu, tangent_functional(f, p.x)));
    sum += r * r;
    rep.max = std::max(rep.max, r);
    ++rep.samples;
  }
  rep.rms = rep.samples ? std::sqrt(sum / rep.samples) : 0.0;
  return rep;
}

// ---------------------------------------------------------------------------

struct CloudIndex::Tree {
  using Point = boost::geometry::model::point<double, 3, boost::geometry::cs::cartesian>;
  using Value = std::pair<Point, int>;
  boost::geometry::index::rtree<Value, boost::geometry::index::rstar<16>> rtree;

  static Point make(const Vec& v) {
    Point p(0.0, 0.0, 0.0);
    if (v.size() > 0) p.set<0>(v(0));
    if (v.size() > 1) p.set<1>(v(1));
    if (v.size() > 2) p.set<2>(v(2));
    return p;
  }
};

CloudIndex::CloudIndex(const BoundaryCloud& cloud, std::vector<int> coords)
    : n_(cloud.n), coords_(std::move(coords)) {
  if (coords_.empty()) {
    coords_.resize(static_cast<size_t>(cloud.n));
    std::iota(coords_.begin(), coords_.end(), 0);
  }
  for (int j : coords_)
    if (j < 0 || j >= cloud.n) throw Error(ErrorKind::DimensionMismatch, "coordinate index out of range");
  points_.reserve(cloud.points.size());
  for (const auto& r : cloud.points) {
    Vec p(coords_.size());
    for (size_t k = 0; k < coords_.size(); ++k) p(static_cast<Eigen::Index>(k)) = r.point(coords_[k]);
    points_.push_back(std::move(p));
  }
  if (coords_.size() <= 3) {
    std::vector<Tree::Value> values;
    values.reserve(points_.size());
    for (size_t i = 0; i < points_.size(); ++i) values.emplace_back(Tree::make(points_[i]), static_cast<int>(i));
    tree_ = std::make_unique<Tree>(Tree{decltype(Tree::rtree)(values)});
  }
}

CloudIndex::~CloudIndex() = default;
CloudIndex::CloudIndex(CloudIndex&&) noexcept = default;
CloudIndex& CloudIndex::operator=(CloudIndex&&) noexcept = default;

std::pair<int, double> CloudIndex::nearest(const Vec& query) const {
  if (points_.empty()) throw Error(ErrorKind::EmptyCloud, "centrality probe needs a traced cloud");
  if (query.size() != static_cast<Eigen::Index>(coords_.size())) {
    throw Error(ErrorKind::DimensionMismatch, "candidate length differs from the compared coordinates");
  }
  int at = -1;
  if (tree_) {
    std::vector<Tree::Value> hit;
    tree_->rtree.query(boost::geometry::index::nearest(Tree::make(query), 1), std::back_inserter(hit));
    at = hit.front().second;
  } else {
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < points_.size(); ++i) {
      const double s = (points_[i] - query).squaredNorm();
      if (s < best) {
        best = s;
        at = static_cast<int>(i);
      }
    }
  }
  return {at, (points_[static_cast<size_t>(at)] - query).norm()};
}

CentralityVerdict central_point_probe(const MatrixPencil& pencil, const Vec& candidate,
                                      const CloudIndex& index, double radius) {
  if (pencil.n() != index.n()) throw Error(ErrorKind::DimensionMismatch, "cloud was traced from another pencil");
  const auto [at, distance] = index.nearest(candidate);
  CentralityVerdict v;
  v.nearest = at;
  v.distance = distance;
  v.central = distance <= radius;
  return v;
}

CentralityVerdict central_point_probe(const MatrixPencil& pencil, const Vec& candidate,
                                      const BoundaryCloud& cloud, double radius,
                                      const std::vector<int>& coords) {
  if (cloud.points.empty()) throw Error(ErrorKind::EmptyCloud, "centrality probe needs a traced cloud");
  if (pencil.n() != cloud.n) throw Error(ErrorKind::DimensionMismatch, "cloud was traced from another pencil");
  return central_point_probe(pencil, candidate, CloudIndex(cloud, coords), radius);
}

bool chien_nakazato_ellipse_test(double y1, double y3) {
  auto conic = [](double a, double c) { return a * a + 5 * c * c - 2 * a * c + 2 * a - 6 * c + 1; };
  if (conic(y1, y3) <= 0.0) return true;
  // Ray from the apex (1, 0) through z: z is in the hull iff the ray meets the
  // ellipse at a parameter t >= 1.
  const double dx = y1 - 1.0;
  const double dz = y3;
  if (dx == 0.0 && dz == 0.0) return true;
  const double a = dx * dx + 5 * dz * dz - 2 * dx * dz;
  const double b = 2 * 1.0 * dx - 2 * 1.0 * dz + 2 * dx - 6 * dz;
  const double c = conic(1.0, 0.0);
  const double disc = b * b - 4 * a * c;
  if (disc < 0) return false;
  return (-b + std::sqrt(disc)) / (2 * a) >= 1.0;
}

}  // namespace jnr
