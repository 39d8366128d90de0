#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jnr/error.hpp"
#include "jnr/linalg.hpp"
#include "jnr/rational.hpp"

namespace jnr {

using Exponent = std::vector<int>;

namespace detail {

inline bool is_zero(double c) { return c == 0.0; }
inline bool is_zero(const Rational& c) { return c == 0; }
inline bool is_zero(const GaussRational& c) { return c.is_zero(); }
inline bool is_zero(const Complex& c) { return c == Complex(0.0); }

template <class S, class C>
S coeff_as(const C& c) {
  if constexpr (std::is_same_v<C, Rational> && !std::is_same_v<S, Rational>) {
    return S(c.get_d());
  } else {
    return S(c);
  }
}

}  // namespace detail

/// Homogeneous polynomial in nvars variables x_0..x_{nvars-1}.
///
/// Terms are kept in descending lexicographic order of exponent vectors, which
/// prints x_0-heavy monomials first. Zero coefficients are never stored.
template <class C>
class MultiPoly {
 public:
  using Terms = std::map<Exponent, C, std::greater<Exponent>>;

  MultiPoly() = default;
  MultiPoly(int nvars, int degree) : nvars_(nvars), degree_(degree) {
    if (nvars < 1 || degree < 0) throw Error(ErrorKind::InvalidInput, "bad polynomial shape");
  }

  static MultiPoly constant(int nvars, const C& c) {
    MultiPoly p(nvars, 0);
    p.add_term(Exponent(static_cast<size_t>(nvars), 0), c);
    return p;
  }

  /// sum_j coeffs[j] * x_j
  static MultiPoly linear(std::span<const C> coeffs) {
    MultiPoly p(static_cast<int>(coeffs.size()), 1);
    for (size_t j = 0; j < coeffs.size(); ++j) {
      Exponent e(coeffs.size(), 0);
      e[j] = 1;
      p.add_term(e, coeffs[j]);
    }
    return p;
  }

  int nvars() const { return nvars_; }
  int degree() const { return degree_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  size_t size() const { return terms_.size(); }

  C coeff(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? C(0) : it->second;
  }

  void add_term(const Exponent& e, const C& c) {
    if (static_cast<int>(e.size()) != nvars_) {
      throw Error(ErrorKind::ArityMismatch, "exponent length differs from nvars");
    }
    int sum = 0;
    for (int k : e) {
      if (k < 0) throw Error(ErrorKind::InvalidInput, "negative exponent");
      sum += k;
    }
    if (sum != degree_) throw Error(ErrorKind::InvalidInput, "term breaks homogeneity");
    if (detail::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second = it->second + c;
      if (detail::is_zero(it->second)) terms_.erase(it);
    }
  }

  MultiPoly operator+(const MultiPoly& o) const {
    if (is_zero() && o.is_zero()) return *this;
    check_compatible(o);
    MultiPoly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
  }

  MultiPoly operator-() const {
    MultiPoly r(nvars_, degree_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, C(0) - c);
    return r;
  }

  MultiPoly operator-(const MultiPoly& o) const { return *this + (-o); }

  MultiPoly operator*(const MultiPoly& o) const {
    if (nvars_ != o.nvars_) throw Error(ErrorKind::ArityMismatch, "product of different arity");
    MultiPoly r(nvars_, degree_ + o.degree_);
    Exponent e(static_cast<size_t>(nvars_));
    for (const auto& [ea, ca] : terms_)
      for (const auto& [eb, cb] : o.terms_) {
        for (int j = 0; j < nvars_; ++j) e[j] = ea[j] + eb[j];
        r.add_term(e, ca * cb);
      }
    return r;
  }

  MultiPoly scaled(const C& s) const {
    MultiPoly r(nvars_, degree_);
    for (const auto& [e, c] : terms_) r.add_term(e, c * s);
    return r;
  }

  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    if (a.is_zero() && b.is_zero()) return a.nvars_ == b.nvars_;
    return a.nvars_ == b.nvars_ && a.degree_ == b.degree_ && a.terms_ == b.terms_;
  }

 private:
  void check_compatible(const MultiPoly& o) const {
    if (nvars_ != o.nvars_) throw Error(ErrorKind::ArityMismatch, "sum of different arity");
    if (degree_ != o.degree_ && !is_zero() && !o.is_zero()) {
      throw Error(ErrorKind::InvalidInput, "sum of different degrees is not homogeneous");
    }
  }

  int nvars_ = 1;
  int degree_ = 0;
  Terms terms_;
};

using ExactPoly = MultiPoly<Rational>;
using FloatPoly = MultiPoly<double>;

FloatPoly to_float(const ExactPoly& p);
/// Sum of absolute coefficient values.
double coeff_norm1(const FloatPoly& p);
/// Euclidean norm of the coefficient vector.
double coeff_norm2(const FloatPoly& p);
/// Drops terms with |c| <= rel * max |c|.
FloatPoly chop(const FloatPoly& p, double rel = 1e-12);
/// All exponent vectors of the given total degree, in descending lex order.
std::vector<Exponent> monomials(int nvars, int degree);
/// "2*x0^2*x1 - 1/2*x2^3"; variables are named prefix0, prefix1, ...
std::string to_string(const ExactPoly& p, const std::string& prefix = "x");
std::string to_string(const FloatPoly& p, const std::string& prefix = "x");

// ---------------------------------------------------------------------------
// Evaluation and differentiation

template <class S>
S power(const S& base, int k) {
  S r(1);
  for (int i = 0; i < k; ++i) r = r * base;
  return r;
}

/// f(x); x.size() must equal nvars.
template <class C, class S>
S eval(const MultiPoly<C>& f, std::span<const S> x) {
  if (static_cast<int>(x.size()) != f.nvars()) {
    throw Error(ErrorKind::ArityMismatch, "evaluation point has wrong length");
  }
  // Power tables: pw[j][k] = x_j^k.
  std::vector<std::vector<S>> pw(x.size());
  for (size_t j = 0; j < x.size(); ++j) {
    pw[j].resize(static_cast<size_t>(f.degree()) + 1);
    pw[j][0] = S(1);
    for (int k = 1; k <= f.degree(); ++k) pw[j][k] = pw[j][k - 1] * x[j];
  }
  S total(0);
  for (const auto& [e, c] : f.terms()) {
    S term = detail::coeff_as<S>(c);
    for (size_t j = 0; j < e.size(); ++j)
      if (e[j] != 0) term = term * pw[j][e[j]];
    total = total + term;
  }
  return total;
}

template <class C>
MultiPoly<C> partial(const MultiPoly<C>& f, int j) {
  MultiPoly<C> r(f.nvars(), std::max(0, f.degree() - 1));
  if (f.degree() == 0) return r;
  for (const auto& [e, c] : f.terms()) {
    if (e[j] == 0) continue;
    Exponent ee = e;
    ee[j] -= 1;
    r.add_term(ee, c * C(e[j]));
  }
  return r;
}

template <class C, class S>
std::vector<S> gradient(const MultiPoly<C>& f, std::span<const S> x) {
  if (static_cast<int>(x.size()) != f.nvars()) {
    throw Error(ErrorKind::ArityMismatch, "gradient point has wrong length");
  }
  std::vector<S> g(x.size());
  for (int j = 0; j < f.nvars(); ++j) g[j] = eval(partial(f, j), x);
  return g;
}

inline double eval(const FloatPoly& f, const Vec& x) {
  return eval<double, double>(f, std::span<const double>(x.data(), static_cast<size_t>(x.size())));
}
inline Vec gradient(const FloatPoly& f, const Vec& x) {
  auto g = gradient<double, double>(f, std::span<const double>(x.data(), static_cast<size_t>(x.size())));
  return Eigen::Map<Vec>(g.data(), static_cast<Eigen::Index>(g.size()));
}

/// Coefficients (ascending in t) of t -> f(base + t * dir).
template <class C, class S>
std::vector<S> restrict_to_line(const MultiPoly<C>& f, std::span<const S> base,
                                std::span<const S> dir) {
  if (static_cast<int>(base.size()) != f.nvars() || static_cast<int>(dir.size()) != f.nvars()) {
    throw Error(ErrorKind::ArityMismatch, "line has wrong length");
  }
  const size_t deg = static_cast<size_t>(f.degree());
  std::vector<S> out(deg + 1, S(0));
  // Powers of each linear factor (base_j + t dir_j)^k as coefficient lists.
  std::vector<std::vector<std::vector<S>>> pw(base.size());
  for (size_t j = 0; j < base.size(); ++j) {
    pw[j].resize(deg + 1);
    pw[j][0] = {S(1)};
    for (size_t k = 1; k <= deg; ++k) {
      const auto& prev = pw[j][k - 1];
      std::vector<S> next(prev.size() + 1, S(0));
      for (size_t i = 0; i < prev.size(); ++i) {
        next[i] = next[i] + prev[i] * base[j];
        next[i + 1] = next[i + 1] + prev[i] * dir[j];
      }
      pw[j][k] = std::move(next);
    }
  }
  for (const auto& [e, c] : f.terms()) {
    std::vector<S> acc{detail::coeff_as<S>(c)};
    for (size_t j = 0; j < e.size(); ++j) {
      if (e[j] == 0) continue;
      const auto& fac = pw[j][e[j]];
      std::vector<S> next(acc.size() + fac.size() - 1, S(0));
      for (size_t a = 0; a < acc.size(); ++a)
        for (size_t b = 0; b < fac.size(); ++b) next[a + b] = next[a + b] + acc[a] * fac[b];
      acc = std::move(next);
    }
    for (size_t i = 0; i < acc.size(); ++i) out[i] = out[i] + acc[i];
  }
  return out;
}

inline std::vector<double> restrict_to_line(const FloatPoly& f, const Vec& base, const Vec& dir) {
  return restrict_to_line<double, double>(
      f, std::span<const double>(base.data(), static_cast<size_t>(base.size())),
      std::span<const double>(dir.data(), static_cast<size_t>(dir.size())));
}

/// Homogeneous pieces of h -> f(x + h): result[k] has degree k in h.
template <class C>
std::vector<MultiPoly<C>> taylor_pieces(const MultiPoly<C>& f, std::span<const C> x) {
  if (static_cast<int>(x.size()) != f.nvars()) {
    throw Error(ErrorKind::ArityMismatch, "expansion point has wrong length");
  }
  const int n = f.nvars();
  std::vector<MultiPoly<C>> pieces;
  for (int k = 0; k <= f.degree(); ++k) pieces.emplace_back(n, k);
  for (const auto& [e, c] : f.terms()) {
    // Expand prod_j (x_j + h_j)^{e_j} by iterating over the sub-exponents s <= e.
    Exponent s(static_cast<size_t>(n), 0);
    while (true) {
      C coef = c;
      int deg = 0;
      for (int j = 0; j < n; ++j) {
        // binomial(e_j, s_j) * x_j^(e_j - s_j)
        long long binom = 1;
        for (int i = 0; i < s[j]; ++i) binom = binom * (e[j] - i) / (i + 1);
        coef = coef * C(static_cast<double>(binom)) * power(x[j], e[j] - s[j]);
        deg += s[j];
      }
      pieces[deg].add_term(s, coef);
      int j = 0;
      while (j < n && s[j] == e[j]) s[j++] = 0;
      if (j == n) break;
      ++s[j];
    }
  }
  return pieces;
}

// ---------------------------------------------------------------------------
// Characteristic polynomial of a pencil

/// Largest d accepted by the exact Leibniz expansion.
inline constexpr int kMaxExactDim = 6;

/// det(x_0 I + x_1 A_1 + ... + x_n A_n), exactly, for d <= 6.
ExactPoly charpoly(const ExactPencil& pencil);
/// Float charpoly by interpolating determinants; any d.
FloatPoly charpoly_float(const MatrixPencil& pencil, std::uint64_t seed = 7);
/// Determinant of the instantiated pencil, by LU.
double pencil_det(const MatrixPencil& pencil, const Vec& x);
/// True iff the product of the factors equals p exactly.
bool verify_factorization(const ExactPoly& p, std::span<const ExactPoly> factors);

// ---------------------------------------------------------------------------
// Univariate roots

/// Roots of sum_k c_k t^k via eigenvalues of the balanced companion matrix.
/// Leading coefficients below 1e-14 * max|c| are treated as zero.
std::vector<Complex> poly_roots(std::span<const double> coeffs);
/// Number of leading zero coefficients c_0, c_1, ... with |c_k| <= tol.
int zero_root_multiplicity(std::span<const double> coeffs, double tol);
int zero_root_multiplicity(std::span<const Rational> coeffs);

/// "Real root" criterion: |Im| <= 1e-7 * (1 + max|root|).
bool all_roots_real(std::span<const Complex> roots, double* worst_imag = nullptr);

// ---------------------------------------------------------------------------
// Hyperbolicity

enum class Verdict { hyperbolic, not_hyperbolic, inconclusive };
const char* to_string(Verdict v);

struct HyperbolicityCertificate {
  Vec e;
  Verdict verdict = Verdict::inconclusive;
  std::optional<Vec> witness;
  double witness_imag = 0.0;  // largest |Im root| found at the witness
  int samples_checked = 0;
};

/// Monte-Carlo test that f(te - a) has only real roots for random a.
HyperbolicityCertificate hyperbolicity_check(const FloatPoly& f, const Vec& e, int trials, Rng& rng);

// ---------------------------------------------------------------------------
// Multiplicity

/// Relative tolerance used to decide that a float Taylor piece vanishes.
inline constexpr double kMultiplicityTol = 1e-7;

/// Order of the first nonvanishing Taylor piece of f at x.
int multiplicity_at(const FloatPoly& f, const Vec& x, double rel_tol = kMultiplicityTol);
int multiplicity_at(const ExactPoly& f, std::span<const Rational> x);

struct MultiplicityReport {
  int multiplicity = 0;          // multiplicity of x on V(f)
  int along_e = 0;               // order of t = 0 in f(x + t e)
  int along_e_minus_x = 0;       // order of t = 0 in f(x + t (e - x))
  bool agree = false;
};

MultiplicityReport check_multiplicity_lemma(const FloatPoly& f, const Vec& e, const Vec& x,
                                            double rel_tol = kMultiplicityTol);
MultiplicityReport check_multiplicity_lemma(const ExactPoly& f, std::span<const Rational> e,
                                            std::span<const Rational> x);

}  // namespace jnr
