#include "jnr/poly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace jnr {

FloatPoly to_float(const ExactPoly& p) {
  FloatPoly r(p.nvars(), p.degree());
  for (const auto& [e, c] : p.terms()) r.add_term(e, c.get_d());
  return r;
}

double coeff_norm1(const FloatPoly& p) {
  double s = 0.0;
  for (const auto& [e, c] : p.terms()) s += std::abs(c);
  return s;
}

double coeff_norm2(const FloatPoly& p) {
  double s = 0.0;
  for (const auto& [e, c] : p.terms()) s += c * c;
  return std::sqrt(s);
}

FloatPoly chop(const FloatPoly& p, double rel) {
  double big = 0.0;
  for (const auto& [e, c] : p.terms()) big = std::max(big, std::abs(c));
  FloatPoly r(p.nvars(), p.degree());
  for (const auto& [e, c] : p.terms())
    if (std::abs(c) > rel * big) r.add_term(e, c);
  return r;
}

std::vector<Exponent> monomials(int nvars, int degree) {
  std::vector<Exponent> out;
  Exponent e(static_cast<size_t>(nvars), 0);
  // Recursive fill, first variable takes the largest share first.
  auto rec = [&](auto&& self, int j, int remaining) -> void {
    if (j == nvars - 1) {
      e[j] = remaining;
      out.push_back(e);
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      e[j] = k;
      self(self, j + 1, remaining - k);
    }
  };
  rec(rec, 0, degree);
  return out;
}

namespace {

std::string monomial_string(const Exponent& e, const std::string& prefix) {
  std::string s;
  for (size_t j = 0; j < e.size(); ++j) {
    if (e[j] == 0) continue;
    if (!s.empty()) s += "*";
    s += prefix + std::to_string(j);
    if (e[j] > 1) s += "^" + std::to_string(e[j]);
  }
  return s;
}

template <class C, class Fmt>
std::string poly_string(const MultiPoly<C>& p, const std::string& prefix, Fmt fmt) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : p.terms()) {
    const bool negative = c < 0;
    const C mag = negative ? C(-c) : c;
    const std::string mono = monomial_string(e, prefix);
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    if (mono.empty()) {
      out += fmt(mag);
    } else if (mag == C(1)) {
      out += mono;
    } else {
      out += fmt(mag) + "*" + mono;
    }
  }
  return out;
}

}  // namespace

std::string to_string(const ExactPoly& p, const std::string& prefix) {
  return poly_string(p, prefix, [](const Rational& r) { return r.get_str(10); });
}

std::string to_string(const FloatPoly& p, const std::string& prefix) {
  return poly_string(p, prefix, [](double c) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", c);
    return std::string(buf);
  });
}

// ---------------------------------------------------------------------------

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::hyperbolic: return "hyperbolic";
    case Verdict::not_hyperbolic: return "not_hyperbolic";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

HyperbolicityCertificate hyperbolicity_check(const FloatPoly& f, const Vec& e, int trials, Rng& rng) {
  if (e.size() != f.nvars()) throw Error(ErrorKind::ArityMismatch, "direction has wrong length");
  if (e.norm() == 0.0) throw Error(ErrorKind::InvalidInput, "hyperbolicity direction is zero");
  const double fe = eval(f, e);
  const double scale = coeff_norm1(f) * std::pow(std::max(1.0, e.cwiseAbs().maxCoeff()), f.degree());
  if (std::abs(fe) < 1e-12 * scale) {
    throw Error(ErrorKind::ZeroAtDirection, "f vanishes at the hyperbolicity direction");
  }

  HyperbolicityCertificate cert;
  cert.e = e;
  std::normal_distribution<double> normal;
  bool ambiguous = false;
  for (int trial = 0; trial < trials; ++trial) {
    Vec a(f.nvars());
    for (Eigen::Index j = 0; j < a.size(); ++j) a(j) = normal(rng);
    ++cert.samples_checked;
    const auto coeffs = restrict_to_line(f, Vec(-a), e);
    const auto roots = poly_roots(coeffs);
    double worst = 0.0;
    if (all_roots_real(roots, &worst)) continue;
    double max_abs = 0.0;
    for (const auto& r : roots) max_abs = std::max(max_abs, std::abs(r));
    if (worst > 1e-6 * (1.0 + max_abs)) {
      cert.verdict = Verdict::not_hyperbolic;
      cert.witness = a;
      cert.witness_imag = worst;
      return cert;
    }
    ambiguous = true;
  }
  // A negative value at e is hyperbolic only after flipping the sign of f.
  cert.verdict = (fe > 0 && !ambiguous) ? Verdict::hyperbolic : Verdict::inconclusive;
  return cert;
}

// ---------------------------------------------------------------------------

int zero_root_multiplicity(std::span<const double> coeffs, double tol) {
  int m = 0;
  while (m < static_cast<int>(coeffs.size()) && std::abs(coeffs[m]) <= tol) ++m;
  return m;
}

int zero_root_multiplicity(std::span<const Rational> coeffs) {
  int m = 0;
  while (m < static_cast<int>(coeffs.size()) && coeffs[m] == 0) ++m;
  return m;
}

namespace {

double max_piece_coeff(const FloatPoly& p) {
  double s = 0.0;
  for (const auto& [e, c] : p.terms()) s = std::max(s, std::abs(c));
  return s;
}

double max_abs(std::span<const double> v) {
  double s = 0.0;
  for (double c : v) s = std::max(s, std::abs(c));
  return s;
}

}  // namespace

int multiplicity_at(const FloatPoly& f, const Vec& x, double rel_tol) {
  const auto pieces =
      taylor_pieces<double>(f, std::span<const double>(x.data(), static_cast<size_t>(x.size())));
  double scale = 0.0;
  for (const auto& p : pieces) scale = std::max(scale, max_piece_coeff(p));
  const double tol = rel_tol * scale;
  if (max_piece_coeff(pieces[0]) > tol) {
    throw Error(ErrorKind::NotOnVariety, "f(x) does not vanish");
  }
  for (size_t k = 1; k < pieces.size(); ++k)
    if (max_piece_coeff(pieces[k]) > tol) return static_cast<int>(k);
  return static_cast<int>(pieces.size());  // f == 0
}

int multiplicity_at(const ExactPoly& f, std::span<const Rational> x) {
  const auto pieces = taylor_pieces<Rational>(f, x);
  if (!pieces[0].is_zero()) throw Error(ErrorKind::NotOnVariety, "f(x) does not vanish");
  for (size_t k = 1; k < pieces.size(); ++k)
    if (!pieces[k].is_zero()) return static_cast<int>(k);
  return static_cast<int>(pieces.size());
}

MultiplicityReport check_multiplicity_lemma(const FloatPoly& f, const Vec& e, const Vec& x,
                                            double rel_tol) {
  MultiplicityReport r;
  r.multiplicity = multiplicity_at(f, x, rel_tol);
  const auto along_e = restrict_to_line(f, x, e);
  const auto along_ex = restrict_to_line(f, x, Vec(e - x));
  r.along_e = zero_root_multiplicity(along_e, rel_tol * max_abs(along_e));
  r.along_e_minus_x = zero_root_multiplicity(along_ex, rel_tol * max_abs(along_ex));
  r.agree = r.multiplicity == r.along_e && r.along_e == r.along_e_minus_x;
  return r;
}

MultiplicityReport check_multiplicity_lemma(const ExactPoly& f, std::span<const Rational> e,
                                            std::span<const Rational> x) {
  MultiplicityReport r;
  r.multiplicity = multiplicity_at(f, x);
  std::vector<Rational> ex(e.size());
  for (size_t j = 0; j < e.size(); ++j) ex[j] = e[j] - x[j];
  const auto along_e = restrict_to_line<Rational, Rational>(f, x, e);
  const auto along_ex = restrict_to_line<Rational, Rational>(f, x, ex);
  r.along_e = zero_root_multiplicity(along_e);
  r.along_e_minus_x = zero_root_multiplicity(along_ex);
  r.agree = r.multiplicity == r.along_e && r.along_e == r.along_e_minus_x;
  return r;
}

}  // namespace jnr
