#include "jnr/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "jnr/error.hpp"

namespace jnr {

namespace {

struct Entry {
  GaussRational exact;
  Complex value;
  bool is_exact = true;
};

// Integer numbers and "p/q" strings are exact; any other number is float.
std::pair<Rational, bool> parse_component(const Json& v, double& value) {
  if (v.is_string()) {
    const Rational r = parse_rational(v.get<std::string>());
    value = r.get_d();
    return {r, true};
  }
  if (v.is_number_integer()) {
    value = v.get<double>();
    return {Rational(v.get<long>()), true};
  }
  if (v.is_number()) {
    value = v.get<double>();
    return {Rational(0), false};
  }
  throw Error(ErrorKind::ParseError, "matrix entry component must be a number or a \"p/q\" string");
}

Entry parse_entry(const Json& v) {
  Entry e;
  double re = 0.0;
  double im = 0.0;
  if (v.is_array()) {
    if (v.size() != 2) throw Error(ErrorKind::ParseError, "matrix entry must be [re, im]");
    auto [r, rx] = parse_component(v[0], re);
    auto [i, ix] = parse_component(v[1], im);
    e.exact = GaussRational(r, i);
    e.is_exact = rx && ix;
  } else {
    auto [r, rx] = parse_component(v, re);
    e.exact = GaussRational(r);
    e.is_exact = rx;
  }
  e.value = Complex(re, im);
  return e;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorKind::ParseError, std::string("malformed JSON: ") + ex.what());
  }
}

int get_int(const Json& obj, const char* key) {
  if (!obj.contains(key) || !obj[key].is_number_integer()) {
    throw Error(ErrorKind::ParseError, std::string("missing integer field '") + key + "'");
  }
  return obj[key].get<int>();
}

std::string rational_string(const Rational& r) { return r.get_str(10); }

}  // namespace

PencilInput parse_pencil_json(const std::string& text) {
  const Json doc = parse_json(text);
  if (!doc.is_object()) throw Error(ErrorKind::ParseError, "pencil JSON must be an object");
  const int d = get_int(doc, "d");
  const int n = get_int(doc, "n");
  if (!doc.contains("matrices") || !doc["matrices"].is_array()) {
    throw Error(ErrorKind::ParseError, "missing array field 'matrices'");
  }
  const Json& mats = doc["matrices"];
  if (d < 1 || n < 1) throw Error(ErrorKind::DimensionMismatch, "d and n must be positive");
  if (static_cast<int>(mats.size()) != n) {
    throw Error(ErrorKind::DimensionMismatch,
                "expected " + std::to_string(n) + " matrices, found " + std::to_string(mats.size()));
  }

  std::vector<HermitianMatrix> floats;
  std::vector<ExactHermitianMatrix> exacts;
  bool all_exact = true;
  for (int i = 0; i < n; ++i) {
    const Json& rows = mats[i];
    if (!rows.is_array()) throw Error(ErrorKind::ParseError, "matrix " + std::to_string(i) + " is not an array");
    if (static_cast<int>(rows.size()) != d) {
      throw Error(ErrorKind::DimensionMismatch, "matrix " + std::to_string(i) + " does not have d rows");
    }
    Eigen::MatrixXcd m(d, d);
    std::vector<GaussRational> ex;
    ex.reserve(static_cast<size_t>(d) * d);
    for (int j = 0; j < d; ++j) {
      if (!rows[j].is_array()) throw Error(ErrorKind::ParseError, "matrix row is not an array");
      if (static_cast<int>(rows[j].size()) != d) {
        throw Error(ErrorKind::DimensionMismatch,
                    "row " + std::to_string(j) + " of matrix " + std::to_string(i) + " does not have d entries");
      }
      for (int k = 0; k < d; ++k) {
        const Entry e = parse_entry(rows[j][k]);
        m(j, k) = e.value;
        ex.push_back(e.exact);
        all_exact = all_exact && e.is_exact;
      }
    }
    try {
      floats.emplace_back(m);
      if (all_exact) exacts.emplace_back(d, std::move(ex));
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::NonHermitianInput) throw;
      throw Error(ErrorKind::NonHermitianInput, "matrix " + std::to_string(i) + ": " + err.what());
    }
  }
  PencilInput in;
  in.pencil = MatrixPencil(std::move(floats));
  if (all_exact) in.exact = ExactPencil(std::move(exacts));
  return in;
}

Json pencil_to_json(const ExactPencil& pencil) {
  Json mats = Json::array();
  for (const auto& a : pencil.coeffs()) {
    Json rows = Json::array();
    for (int j = 0; j < a.dim(); ++j) {
      Json row = Json::array();
      for (int k = 0; k < a.dim(); ++k)
        row.push_back(Json::array({rational_string(a(j, k).re), rational_string(a(j, k).im)}));
      rows.push_back(row);
    }
    mats.push_back(rows);
  }
  return Json{{"d", pencil.d()}, {"n", pencil.n()}, {"matrices", mats}};
}

Json pencil_to_json(const MatrixPencil& pencil) {
  Json mats = Json::array();
  for (const auto& a : pencil.coeffs()) {
    Json rows = Json::array();
    for (int j = 0; j < a.dim(); ++j) {
      Json row = Json::array();
      for (int k = 0; k < a.dim(); ++k) row.push_back(Json::array({a(j, k).real(), a(j, k).imag()}));
      rows.push_back(row);
    }
    mats.push_back(rows);
  }
  return Json{{"d", pencil.d()}, {"n", pencil.n()}, {"matrices", mats}};
}

// ---------------------------------------------------------------------------

PolyInput parse_poly_json(const std::string& text) {
  const Json doc = parse_json(text);
  if (!doc.is_object()) throw Error(ErrorKind::ParseError, "polynomial JSON must be an object");
  const int degree = get_int(doc, "degree");
  if (!doc.contains("terms") || !doc["terms"].is_array()) {
    throw Error(ErrorKind::ParseError, "missing array field 'terms'");
  }
  int nvars = 0;
  if (doc.contains("vars")) {
    if (!doc["vars"].is_array()) throw Error(ErrorKind::ParseError, "'vars' must be an array");
    nvars = static_cast<int>(doc["vars"].size());
  } else if (!doc["terms"].empty()) {
    nvars = static_cast<int>(doc["terms"][0].value("exp", Json::array()).size());
  }
  if (nvars < 1) throw Error(ErrorKind::ParseError, "polynomial has no variables");
  if (degree < 0) throw Error(ErrorKind::ParseError, "degree must be nonnegative");

  FloatPoly fp(nvars, degree);
  ExactPoly ep(nvars, degree);
  bool all_exact = true;
  for (const auto& t : doc["terms"]) {
    if (!t.is_object() || !t.contains("exp") || !t.contains("coeff") || !t["exp"].is_array()) {
      throw Error(ErrorKind::ParseError, "term needs 'exp' and 'coeff'");
    }
    Exponent e;
    for (const auto& k : t["exp"]) {
      if (!k.is_number_integer()) throw Error(ErrorKind::ParseError, "exponents must be integers");
      e.push_back(k.get<int>());
    }
    double value = 0.0;
    auto [r, exact] = parse_component(t["coeff"], value);
    all_exact = all_exact && exact;
    fp.add_term(e, value);
    if (exact) ep.add_term(e, r);
  }
  PolyInput in;
  in.poly = fp;
  if (all_exact) {
    in.exact = ep;
    in.poly = to_float(ep);
  }
  return in;
}

namespace {

Json vars_json(int nvars) {
  Json v = Json::array();
  for (int j = 0; j < nvars; ++j) v.push_back("x" + std::to_string(j));
  return v;
}

}  // namespace

Json poly_to_json(const ExactPoly& p) {
  Json terms = Json::array();
  for (const auto& [e, c] : p.terms()) terms.push_back(Json{{"exp", e}, {"coeff", rational_string(c)}});
  return Json{{"vars", vars_json(p.nvars())}, {"degree", p.degree()}, {"terms", terms}};
}

Json poly_to_json(const FloatPoly& p) {
  Json terms = Json::array();
  for (const auto& [e, c] : p.terms()) terms.push_back(Json{{"exp", e}, {"coeff", c}});
  return Json{{"vars", vars_json(p.nvars())}, {"degree", p.degree()}, {"terms", terms}};
}

// ---------------------------------------------------------------------------

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write '" + path + "'");
  out << content;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string cloud_to_csv(const BoundaryCloud& cloud) {
  std::string out;
  for (int j = 1; j <= cloud.n; ++j) out += "u" + std::to_string(j) + ",";
  out += "branch";
  for (int j = 1; j <= cloud.n; ++j) out += ",y" + std::to_string(j);
  out += ",simple\n";
  for (const auto& r : cloud.points) {
    for (int j = 0; j < cloud.n; ++j) out += format_double(r.direction(j)) + ",";
    out += std::to_string(r.branch);
    for (int j = 0; j < cloud.n; ++j) out += "," + format_double(r.point(j));
    out += r.simple ? ",1\n" : ",0\n";
  }
  return out;
}

std::string render_svg(const std::vector<SvgLayer>& layers) {
  double lo_x = std::numeric_limits<double>::infinity();
  double lo_y = lo_x;
  double hi_x = -lo_x;
  double hi_y = -lo_x;
  for (const auto& layer : layers)
    for (const auto& p : layer.points) {
      lo_x = std::min(lo_x, p(0));
      hi_x = std::max(hi_x, p(0));
      lo_y = std::min(lo_y, p(1));
      hi_y = std::max(hi_y, p(1));
    }
  if (!std::isfinite(lo_x)) lo_x = lo_y = -1.0, hi_x = hi_y = 1.0;
  double w = hi_x - lo_x;
  double h = hi_y - lo_y;
  const double pad = 0.1 * std::max({w, h, 1e-9});
  lo_x -= pad;
  lo_y -= pad;
  w += 2 * pad;
  h += 2 * pad;

  std::ostringstream s;
  // SVG's y axis points down; negate y so the picture keeps its orientation.
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << format_double(lo_x) << " "
    << format_double(-(lo_y + h)) << " " << format_double(w) << " " << format_double(h)
    << "\" width=\"600\" height=\"" << static_cast<int>(600.0 * h / w) << "\">\n";
  for (const auto& layer : layers) {
    if (layer.points.empty()) continue;
    s << "  <" << (layer.closed ? "polygon" : "polyline") << " fill=\"" << layer.fill << "\" stroke=\""
      << layer.stroke << "\" stroke-width=\"" << format_double(layer.width)
      << "\" vector-effect=\"non-scaling-stroke\" points=\"";
    for (size_t i = 0; i < layer.points.size(); ++i) {
      if (i) s << " ";
      s << format_double(layer.points[i](0)) << "," << format_double(-layer.points[i](1));
    }
    s << "\"/>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace jnr
