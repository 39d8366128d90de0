#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "jnr/linalg.hpp"
#include "jnr/poly.hpp"
#include "jnr/range.hpp"

namespace jnr {

using Json = nlohmann::ordered_json;

/// Pencil read from JSON. `exact` is present when every entry is an integer or
/// a "p/q" string.
struct PencilInput {
  MatrixPencil pencil;
  std::optional<ExactPencil> exact;
};

/// {"d": int, "n": int, "matrices": [[[re, im], ...], ...]}, row-major.
/// ParseError on malformed JSON, DimensionMismatch on shape errors,
/// NonHermitianInput naming the matrix and entry.
PencilInput parse_pencil_json(const std::string& text);
Json pencil_to_json(const ExactPencil& pencil);
Json pencil_to_json(const MatrixPencil& pencil);

struct PolyInput {
  FloatPoly poly;
  std::optional<ExactPoly> exact;
};

/// {"vars": [...], "degree": k, "terms": [{"exp": [...], "coeff": "p/q" | number}]}
PolyInput parse_poly_json(const std::string& text);
Json poly_to_json(const ExactPoly& p);
Json poly_to_json(const FloatPoly& p);

/// Reads a whole file; ParseError when it cannot be opened.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// printf("%.17g")
std::string format_double(double v);

/// Columns u1..un, branch, y1..yn, simple.
std::string cloud_to_csv(const BoundaryCloud& cloud);

struct SvgLayer {
  std::vector<Vec> points;
  bool closed = false;
  std::string stroke = "black";
  std::string fill = "none";
  double width = 1.0;
};

/// Flat polyline/polygon writer; viewBox is the data extent plus 10%, y up.
std::string render_svg(const std::vector<SvgLayer>& layers);

}  // namespace jnr
