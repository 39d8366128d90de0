#include "jnr/commands.hpp"

#include <cmath>
#include <iostream>
#include <map>
#include <sstream>

#include "jnr/builtin.hpp"
#include "jnr/cone.hpp"
#include "jnr/dual.hpp"
#include "jnr/io.hpp"
#include "jnr/range.hpp"

namespace jnr {

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError: return exit_code::parse;
    case ErrorKind::DimensionMismatch:
    case ErrorKind::ArityMismatch:
    case ErrorKind::DimensionTooLarge: return exit_code::dimension;
    case ErrorKind::UnsupportedDimension: return exit_code::unsupported;
    case ErrorKind::NoFormFound:
    case ErrorKind::InsufficientSamples: return exit_code::fit_failure;
    default: return exit_code::validation;
  }
}

namespace {

struct Source {
  std::string name;  // builtin name or input path
  std::optional<BuiltinExample> example;
  std::optional<PencilInput> pencil;
  std::optional<PolyInput> poly;
};

Source load_source(const RunConfig& c) {
  if (c.input && c.builtin) throw Error(ErrorKind::InvalidInput, "give either --input or --builtin, not both");
  Source s;
  if (c.builtin) {
    s.name = *c.builtin;
    s.example = builtin(*c.builtin);
    if (s.example->pencil) s.pencil = PencilInput{s.example->pencil->to_float(), s.example->pencil};
    if (s.example->polynomial) s.poly = PolyInput{to_float(*s.example->polynomial), s.example->polynomial};
    return s;
  }
  if (!c.input) throw Error(ErrorKind::InvalidInput, "--input or --builtin is required");
  s.name = *c.input;
  const std::string text = read_file(*c.input);
  Json probe;
  try {
    probe = Json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorKind::ParseError, std::string("malformed JSON: ") + ex.what());
  }
  if (probe.is_object() && probe.contains("terms")) {
    s.poly = parse_poly_json(text);
  } else {
    s.pencil = parse_pencil_json(text);
  }
  return s;
}

const PencilInput& require_pencil(const Source& s) {
  if (!s.pencil) throw Error(ErrorKind::InvalidInput, "'" + s.name + "' does not provide a matrix pencil");
  return *s.pencil;
}

int check_grid(std::optional<int> requested, int fallback) {
  const int g = requested.value_or(fallback);
  if (g < 8) throw Error(ErrorKind::InvalidInput, "grid sizes must be at least 8");
  return g;
}

std::string output_format(const RunConfig& c, const std::string& fallback) {
  const std::string f = c.format.value_or(fallback);
  if (f != "csv" && f != "json" && f != "svg") {
    throw Error(ErrorKind::InvalidInput, "unknown format '" + f + "'");
  }
  return f;
}

Json header(const RunConfig& c, const std::string& source) {
  return Json{{"tool", "jnr"}, {"version", kVersion}, {"command", c.subcommand}, {"source", source},
              {"seed", c.seed}};
}

void emit(const RunConfig& c, std::ostream& out, const std::string& text) {
  if (c.out) {
    write_file(*c.out, text);
  } else {
    out << text;
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json vec_json(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index j = 0; j < v.size(); ++j) a.push_back(v(j));
  return a;
}

int default_trace_grid(int n) { return n == 2 ? 1440 : 20000; }
int default_test_grid(int n) { return n == 2 ? 1440 : 5000; }

DirectionGrid make_grid(int n, int count, std::uint64_t seed, bool test) {
  // The n = 2 test grid is shifted by the golden fraction of a step, so it
  // never lands on angles produced by bisecting the trace grid.
  if (n == 2) return DirectionGrid::uniform_angle(count, test ? 0.6180339887498949 : 0.0);
  return DirectionGrid::standard(n, count, seed);
}

std::vector<Vec> parse_candidates(const std::string& text, int n) {
  std::vector<Vec> out;
  std::stringstream points(text);
  std::string item;
  while (std::getline(points, item, ';')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> vals;
    std::stringstream coords(item);
    std::string num;
    while (std::getline(coords, num, ',')) {
      try {
        size_t used = 0;
        vals.push_back(std::stod(num, &used));
        if (num.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(num);
      } catch (const std::exception&) {
        throw Error(ErrorKind::ParseError, "bad candidate coordinate '" + num + "'");
      }
    }
    Vec v = Vec::Zero(n);
    if (vals.size() == 1) {
      v(0) = vals[0];
    } else if (static_cast<int>(vals.size()) == n) {
      for (int j = 0; j < n; ++j) v(j) = vals[j];
    } else {
      throw Error(ErrorKind::DimensionMismatch, "candidate has " + std::to_string(vals.size()) +
                                                    " coordinates, expected 1 or " + std::to_string(n));
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

int cmd_charpoly(const RunConfig& c, std::ostream& out) {
  const Source src = load_source(c);
  const PencilInput& in = require_pencil(src);
  Json rep = header(c, src.name);
  std::string pretty;
  if (in.exact && in.pencil.d() <= kMaxExactDim) {
    const ExactPoly p = charpoly(*in.exact);
    pretty = to_string(p);
    rep["domain"] = "exact";
    rep["polynomial"] = poly_to_json(p);
    if (src.example && src.example->expected_charpoly) {
      rep["matches_expected"] = p == *src.example->expected_charpoly;
    }
  } else {
    const FloatPoly p = charpoly_float(in.pencil, c.seed);
    pretty = to_string(p);
    rep["domain"] = "float";
    rep["polynomial"] = poly_to_json(p);
  }
  rep["pretty"] = pretty;
  rep["d"] = in.pencil.d();
  rep["n"] = in.pencil.n();
  if (c.out) {
    write_file(*c.out, dump(rep));
    out << pretty << "\n";
  } else {
    out << dump(rep);
  }
  return exit_code::pass;
}

int cmd_trace(const RunConfig& c, std::ostream& out) {
  const Source src = load_source(c);
  const MatrixPencil& pencil = require_pencil(src).pencil;
  const int n = pencil.n();
  if (n < 2) throw Error(ErrorKind::DimensionMismatch, "tracing needs n >= 2");
  const std::string fmt = output_format(c, "csv");
  const int count = check_grid(c.trace_grid, n == 2 ? 360 : 2000);
  const DirectionGrid grid = make_grid(n, count, c.seed, false);
  const BoundaryCloud cloud = trace_boundary_cloud(pencil, grid);

  if (fmt == "csv") {
    std::string text = "# jnr " + std::string(kVersion) + " trace source=" + src.name +
                       " seed=" + std::to_string(c.seed) + " trace_grid=" + std::to_string(count) +
                       " scheme=" + to_string(grid.scheme) + " multiplicity_tol=1e-8(1+|A|_F)" +
                       " skipped=" + std::to_string(cloud.skipped) + "\n";
    emit(c, out, text + cloud_to_csv(cloud));
  } else if (fmt == "json") {
    Json rep = header(c, src.name);
    rep["grids"] = {{"trace", count}, {"scheme", to_string(grid.scheme)}};
    rep["tolerances"] = {{"multiplicity", "1e-8*(1+||A||_F)"}};
    rep["skipped"] = cloud.skipped;
    Json pts = Json::array();
    for (const auto& r : cloud.points) {
      pts.push_back(Json{{"direction", vec_json(r.direction)},
                         {"branch", r.branch},
                         {"point", vec_json(r.point)},
                         {"simple", r.simple}});
    }
    rep["points"] = pts;
    emit(c, out, dump(rep));
  } else {
    if (n != 2) throw Error(ErrorKind::DimensionMismatch, "SVG output needs n = 2");
    std::vector<SvgLayer> layers;
    std::map<int, SvgLayer> branches;
    for (const auto& r : cloud.points) {
      auto& layer = branches[r.branch];
      layer.closed = true;
      layer.stroke = "#1f77b4";
      layer.points.push_back(r.point);
    }
    SvgLayer hull_layer;
    hull_layer.points = convex_hull_2d(cloud.coordinates()).vertices;
    hull_layer.closed = true;
    hull_layer.stroke = "#d62728";
    hull_layer.fill = "rgba(214,39,40,0.08)";
    hull_layer.width = 1.5;
    layers.push_back(hull_layer);
    for (auto& [k, layer] : branches) layers.push_back(std::move(layer));
    std::string svg = render_svg(layers);
    svg.insert(svg.find('\n') + 1, "  <!-- jnr " + std::string(kVersion) + " trace source=" + src.name +
                                       " seed=" + std::to_string(c.seed) +
                                       " trace_grid=" + std::to_string(count) + " -->\n");
    emit(c, out, svg);
  }
  return exit_code::pass;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  const Source src = load_source(c);
  const MatrixPencil& pencil = require_pencil(src).pencil;
  const int n = pencil.n();
  if (n >= 4 && !c.advisory) {
    throw Error(ErrorKind::UnsupportedDimension, "n >= 4 gives only an advisory verdict; pass --advisory");
  }
  const int trace = check_grid(c.trace_grid, default_trace_grid(n));
  const int test = check_grid(c.test_grid, default_test_grid(n));
  const DirectionGrid trace_grid = make_grid(n, trace, c.seed, false);
  const DirectionGrid test_grid = make_grid(n, test, c.seed + 1, true);
  const double refinement = (n == 2 && c.refine) ? kPlanarRefinement : 0.0;
  const MainTheoremReport r = verify_main_theorem(pencil, trace_grid, test_grid, c.tol, c.advisory, refinement);

  Json rep = header(c, src.name);
  rep["grids"] = {{"trace", trace},
                  {"test", test},
                  {"trace_scheme", to_string(trace_grid.scheme)},
                  {"test_scheme", to_string(test_grid.scheme)}};
  rep["tolerances"] = {{"tol", r.tol},
                       {"tol_neg", r.tol_neg},
                       {"tol_source", c.tol ? "flag" : "min(10*mesh^2, 1e-2)*scale"},
                       {"state_slack", "1e-6*max(1,scale) + max(max_gap, certified_gap_bound, facet_deficit)"}};
  rep["max_gap"] = r.max_gap;
  rep["min_gap"] = r.min_gap;
  rep["max_abs_gap"] = r.max_abs_gap;
  rep["argmax_direction"] = vec_json(r.argmax_direction);
  rep["cloud_points"] = r.cloud_points;
  rep["skipped_branches"] = r.skipped;
  rep["scale"] = pencil.scale();
  if (r.refined) {
    rep["planar_refinement"] = {{"target", kPlanarRefinement},
                                {"added_points", r.refined_points},
                                {"certified_gap_bound", r.refinement_bound},
                                {"uniform_max_gap", r.uniform_max_gap},
                                {"uniform_min_gap", r.uniform_min_gap}};
  }
  if (n <= 3) {
    rep["hull_vertices"] = r.hull.vertices.size();
    Rng rng(c.seed);
    const double hull_gap = std::max(r.max_gap, r.refined ? r.refinement_bound : 0.0);
    const StateInclusionReport s = verify_state_inclusion(pencil, r.hull, 200, rng, hull_gap);
    rep["state_inclusion"] = {{"samples", s.samples},
                              {"violations", s.violations},
                              {"worst_violation", s.worst_violation},
                              {"facet_deficit", s.facet_deficit},
                              {"slack", s.slack}};
  }
  bool pass = r.pass;
  rep["verdict"] = r.advisory ? (pass ? "advisory-pass" : "advisory-fail") : (pass ? "pass" : "fail");
  emit(c, out, dump(rep));
  return pass ? exit_code::pass : exit_code::verify_fail;
}

int cmd_dual_fit(const RunConfig& c, std::ostream& out) {
  const Source src = load_source(c);
  FloatPoly f;
  if (src.poly) {
    f = src.poly->poly;
  } else {
    const PencilInput& in = require_pencil(src);
    f = (in.exact && in.pencil.d() <= kMaxExactDim) ? to_float(charpoly(*in.exact))
                                                    : charpoly_float(in.pencil, c.seed);
  }
  Rng rng(c.seed);
  const DualFitResult r = dual_fit(f, c.max_degree, rng);

  Json rep = header(c, src.name);
  rep["tolerances"] = {{"sigma_ratio", 1e-8},
                       {"held_out_rms", 1e-6},
                       {"sample_residual", "1e-10*||f||_1"},
                       {"sample_gradient", "1e-8*||f||_1"}};
  rep["max_degree"] = c.max_degree;
  rep["normalization"] = "unit coefficient 2-norm; largest |coefficient| positive";
  rep["degree"] = r.degree;
  rep["residual_rms"] = r.residual_rms;
  rep["singular_gap"] = r.singular_gap;
  rep["samples_used"] = r.samples_used;
  rep["held_out"] = r.held_out;
  Json attempts = Json::array();
  for (const auto& a : r.attempts) {
    attempts.push_back(Json{{"degree", a.degree},
                            {"monomials", a.monomials},
                            {"sigma_ratio", a.sigma_ratio},
                            {"singular_gap", a.singular_gap},
                            {"residual_rms", std::isnan(a.residual_rms) ? Json(nullptr) : Json(a.residual_rms)},
                            {"accepted", a.accepted}});
  }
  rep["degree_search"] = attempts;
  if (r.point_dual) {
    rep["point_dual"] = vec_json(*r.point_dual);
  } else {
    rep["form"] = poly_to_json(r.form);
    rep["pretty"] = to_string(chop(r.form), "y");
  }

  if (src.example && src.example->expected_dual && !r.point_dual) {
    // Scale the fit so that the reference's leading term matches exactly.
    const FloatPoly ref = to_float(*src.example->expected_dual);
    const auto& [lead_exp, lead_coeff] = *ref.terms().begin();
    const double fitted = r.form.coeff(lead_exp);
    Json cmp = Json::array();
    double worst = std::abs(fitted) > 0 ? 0.0 : INFINITY;
    if (std::abs(fitted) > 0) {
      const FloatPoly scaled = r.form.scaled(lead_coeff / fitted);
      std::map<Exponent, std::pair<double, double>> rows;
      for (const auto& [e, v] : ref.terms()) rows[e].first = v;
      for (const auto& [e, v] : scaled.terms()) rows[e].second = v;
      for (const auto& [e, vals] : rows) {
        const double err = std::abs(vals.first - vals.second);
        worst = std::max(worst, err);
        cmp.push_back(Json{{"exp", e}, {"expected", vals.first}, {"fitted", vals.second}, {"error", err}});
      }
    }
    rep["comparison"] = {{"reference", to_string(ref, "y")},
                         {"normalized_at", lead_exp},
                         {"max_error", worst},
                         {"tolerance", 1e-7},
                         {"match", worst <= 1e-7},
                         {"coefficients", cmp}};
  }
  emit(c, out, dump(rep));
  return exit_code::pass;
}

int cmd_central(const RunConfig& c, std::ostream& out) {
  const Source src = load_source(c);
  const MatrixPencil& pencil = require_pencil(src).pencil;
  const int n = pencil.n();
  const bool cn = src.name == "chien-nakazato" && src.example.has_value();
  std::vector<Vec> candidates;
  if (c.candidates) {
    candidates = parse_candidates(*c.candidates, n);
  } else if (cn) {
    candidates = parse_candidates("-0.9;-0.5;0;0.5;0.9;1.2;-1.2;2;-2;5;-5", n);
  } else if (src.name == "drop" && src.example) {
    candidates = parse_candidates("2", n);
  } else {
    throw Error(ErrorKind::InvalidInput, "--candidates is required for this input");
  }
  const int trace = check_grid(c.trace_grid, 20000);
  const double radius = c.radius.value_or(0.005);
  if (!(radius > 0)) throw Error(ErrorKind::InvalidInput, "radius must be positive");
  const DirectionGrid grid = make_grid(n, trace, c.seed, false);
  BoundaryCloud cloud = trace_boundary_cloud(pencil, grid);
  const std::size_t traced = cloud.points.size();
  const std::vector<DegenerateDirection> crossings = find_degenerate_directions(pencil, grid);
  const RingRefinement rings;
  BoundaryCloud refined = refine_near_degeneracies(pencil, crossings, rings);
  cloud.points.insert(cloud.points.end(), std::make_move_iterator(refined.points.begin()),
                      std::make_move_iterator(refined.points.end()));
  cloud.skipped += refined.skipped;

  Json rep = header(c, src.name);
  rep["grids"] = {{"trace", trace},
                  {"scheme", to_string(grid.scheme)},
                  {"rings", rings.rings},
                  {"ring_radii", {rings.outer, rings.inner}},
                  {"ring_spacing", rings.spacing}};
  // The (y1, y3) grid asks whether a whole line meets T, so its probe uses
  // the coarser projection radius.
  const double projection_radius = 0.02;
  rep["tolerances"] = {{"radius", radius}, {"projection_radius", projection_radius}, {"ring_multiplicity", rings.multiplicity}};
  rep["cloud_points"] = traced;
  rep["refined_points"] = refined.points.size();
  Json cross = Json::array();
  for (const auto& x : crossings) cross.push_back(Json{{"direction", vec_json(x.direction)}, {"branch", x.branch}});
  rep["crossings"] = cross;
  Json verdicts = Json::array();
  const CloudIndex index(cloud);
  for (const auto& cand : candidates) {
    const CentralityVerdict v = central_point_probe(pencil, cand, index, radius);
    Json row{{"candidate", vec_json(cand)}, {"central", v.central}, {"distance", v.distance}};
    if (cn) row["ellipse_test"] = chien_nakazato_ellipse_test(cand(0), cand(2));
    verdicts.push_back(row);
  }
  rep["candidates"] = verdicts;

  if (cn) {
    // Projection to (y1, y3): the probe against the hull of (1, 0) and the ellipse.
    const int side = 50;
    const double lo1 = -2.5;
    const double hi1 = 1.5;
    const double lo3 = -0.75;
    const double hi3 = 1.75;
    const CloudIndex projected(cloud, {0, 2});
    int agree = 0;
    int inside = 0;
    for (int i = 0; i < side; ++i)
      for (int j = 0; j < side; ++j) {
        Vec p(2);
        p << lo1 + (i + 0.5) * (hi1 - lo1) / side, lo3 + (j + 0.5) * (hi3 - lo3) / side;
        const bool probe = central_point_probe(pencil, p, projected, projection_radius).central;
        const bool ellipse = chien_nakazato_ellipse_test(p(0), p(1));
        agree += probe == ellipse;
        inside += ellipse;
      }
    rep["ellipse_grid"] = {{"side", side},
                           {"y1_range", {lo1, hi1}},
                           {"y3_range", {lo3, hi3}},
                           {"inside", inside},
                           {"agreement", static_cast<double>(agree) / (side * side)}};
  }
  emit(c, out, dump(rep));
  return exit_code::pass;
}

int cmd_four_ellipses(const RunConfig& c, std::ostream& out) {
  std::vector<Ellipse> ellipses;
  std::string source = "four-ellipses";
  if (c.input) {
    source = *c.input;
    Json doc;
    try {
      doc = Json::parse(read_file(*c.input));
      for (const auto& e : doc.at("ellipses")) {
        Ellipse el;
        el.center = Eigen::Vector2d(e.at("center").at(0).get<double>(), e.at("center").at(1).get<double>());
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k) el.shape(j, k) = e.at("shape").at(j).at(k).get<double>();
        ellipses.push_back(el);
      }
    } catch (const nlohmann::json::exception& ex) {
      throw Error(ErrorKind::ParseError, std::string("bad ellipse file: ") + ex.what());
    }
  } else {
    if (c.builtin && *c.builtin != "four-ellipses") {
      throw Error(ErrorKind::InvalidInput, "four-ellipses takes --input or --builtin four-ellipses");
    }
    ellipses = default_four_ellipses();
  }
  const int samples = check_grid(c.trace_grid, 720);
  const FourEllipsesResult r = four_ellipses_hull(ellipses, samples);
  const std::string fmt = output_format(c, "json");

  if (fmt == "svg") {
    static const char* colors[] = {"#1f77b4", "#2ca02c", "#9467bd", "#d62728", "#8c564b", "#e377c2"};
    std::vector<SvgLayer> layers;
    SvgLayer hull_layer;
    hull_layer.points = r.hull.vertices;
    hull_layer.closed = true;
    hull_layer.stroke = "black";
    hull_layer.fill = "rgba(0,0,0,0.06)";
    hull_layer.width = 2.0;
    layers.push_back(hull_layer);
    for (size_t k = 0; k < r.curves.size(); ++k) {
      SvgLayer l;
      l.points = r.curves[k].points;
      l.closed = true;
      l.stroke = colors[k % 6];
      l.width = r.redundant[k] ? 0.75 : 1.5;
      layers.push_back(l);
    }
    std::string svg = render_svg(layers);
    svg.insert(svg.find('\n') + 1, "  <!-- jnr " + std::string(kVersion) + " four-ellipses samples=" +
                                       std::to_string(samples) + " seed=" + std::to_string(c.seed) + " -->\n");
    emit(c, out, svg);
    return exit_code::pass;
  }

  Json rep = header(c, source);
  rep["grids"] = {{"samples_per_conic", samples}};
  rep["tolerances"] = {{"hull_collinear", "1e-12*scale^2"}, {"owner_match", 1e-9}};
  Json conics = Json::array();
  for (size_t k = 0; k < r.curves.size(); ++k) {
    const Eigen::MatrixXd& m = r.curves[k].dual.matrix();
    Json rows = Json::array();
    for (int j = 0; j < 3; ++j) rows.push_back(Json::array({m(j, 0), m(j, 1), m(j, 2)}));
    int owned = 0;
    for (int o : r.hull_owner) owned += o == static_cast<int>(k);
    conics.push_back(Json{{"index", k}, {"dual_matrix", rows}, {"hull_vertices", owned}, {"redundant", r.redundant[k]}});
  }
  rep["conics"] = conics;
  Json hull = Json::array();
  for (const auto& v : r.hull.vertices) hull.push_back(vec_json(v));
  rep["hull"] = hull;
  Json red = Json::array();
  for (size_t k = 0; k < r.redundant.size(); ++k)
    if (r.redundant[k]) red.push_back(k);
  rep["redundant"] = red;
  emit(c, out, dump(rep));
  return exit_code::pass;
}

int run_command(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (c.subcommand == "charpoly") return cmd_charpoly(c, out);
    if (c.subcommand == "trace") return cmd_trace(c, out);
    if (c.subcommand == "verify") return cmd_verify(c, out);
    if (c.subcommand == "dual-fit") return cmd_dual_fit(c, out);
    if (c.subcommand == "central") return cmd_central(c, out);
    if (c.subcommand == "four-ellipses") return cmd_four_ellipses(c, out);
    err << "error: unknown subcommand '" << c.subcommand << "'\n";
    return exit_code::validation;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  }
}

}  // namespace jnr
