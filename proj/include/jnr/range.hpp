#pragma once

#include <optional>
#include <vector>

#include "jnr/hull.hpp"
#include "jnr/linalg.hpp"

namespace jnr {

enum class GridScheme { uniform_angle, fibonacci_sphere, random_sphere };
const char* to_string(GridScheme s);

/// Unit directions discretizing the sphere of functionals on R^n.
struct DirectionGrid {
  int n = 0;
  GridScheme scheme = GridScheme::uniform_angle;
  std::vector<Vec> directions;

  /// Angles 2*pi*(k + offset)/count, k = 0..count-1.
  static DirectionGrid uniform_angle(int count, double offset = 0.0);
  /// Golden-angle spiral on S^2.
  static DirectionGrid fibonacci_sphere(int count);
  /// Normalized Gaussian vectors.
  static DirectionGrid random_sphere(int n, int count, Rng& rng);
  /// uniform_angle for n = 2, fibonacci_sphere for n = 3, random_sphere otherwise.
  static DirectionGrid standard(int n, int count, std::uint64_t seed = 0);

  int size() const { return static_cast<int>(directions.size()); }
  /// Typical spacing between neighbouring directions.
  double mesh() const;
};

struct CloudRecord {
  Vec point;        // (<psi|A_1 psi>, ..., <psi|A_n psi>)
  Vec direction;    // u
  int branch = 0;   // eigenvalue index, ascending
  double eigenvalue = 0.0;
  bool simple = true;
};

/// Eigenvector contact points over a direction grid.
struct BoundaryCloud {
  int n = 0;
  std::vector<CloudRecord> points;
  int skipped = 0;  // non-simple branches left out

  std::vector<Vec> coordinates() const;
};

struct SupportTable {
  DirectionGrid grid;
  std::vector<double> values;
};

/// lambda_max(sum_i u_i A_i)
double support_function(const MatrixPencil& pencil, const Vec& u);
SupportTable support_table(const MatrixPencil& pencil, const DirectionGrid& grid);

BoundaryCloud trace_boundary_cloud(const MatrixPencil& pencil, const DirectionGrid& grid);

/// A direction where eigenvalues `branch` and `branch + 1` meet.
struct DegenerateDirection {
  Vec direction;
  int branch = 0;
  double gap = 0.0;
};

/// Locates eigenvalue crossings starting from the most nearly degenerate grid
/// directions (downhill simplex on the smallest adjacent gap). Only crossings
/// whose gap drops below 1e-6 * scale are kept. Empty for n >= 4.
std::vector<DegenerateDirection> find_degenerate_directions(const MatrixPencil& pencil,
                                                            const DirectionGrid& grid,
                                                            int max_count = 16);

struct RingRefinement {
  int rings = 25;        // radii spaced geometrically from outer to inner
  double outer = 0.1;
  double inner = 1e-4;
  double spacing = 2e-3;  // target distance between neighbouring contacts, times scale
  int initial = 64;
  long max_points = 2000000;
  // Branches count as simple when both neighbouring gaps exceed
  // multiplicity * (1 + ||sum u_i A_i||_F). Gaps near a crossing shrink like
  // a power of the ring radius, so this is looser than the tracing default.
  double multiplicity = 1e-11;
};

/// Contact points on shrinking loops around each crossing (arcs for n = 2,
/// circles for n = 3), subdivided until every branch moves by at most
/// `spacing` between neighbours. Near a crossing the contact map varies so
/// fast that a uniform grid misses whole pieces of the closure of T~.
BoundaryCloud refine_near_degeneracies(const MatrixPencil& pencil,
                                       const std::vector<DegenerateDirection>& crossings,
                                       const RingRefinement& options = {});

struct PlanarRefinement {
  BoundaryCloud cloud;  // top-branch contacts added by bisection
  double bound = 0.0;   // largest remaining chord-to-apex distance
  int evaluations = 0;
};

/// n = 2 only. Between neighbouring grid angles the boundary of W lies in the
/// triangle cut out by the chord of the two contacts and their support lines,
/// so the apex-to-chord distance bounds the hull gap for every direction in
/// between. Angles are bisected until that bound is <= tol * scale.
PlanarRefinement refine_planar_boundary(const MatrixPencil& pencil, const DirectionGrid& grid, double tol,
                                        int max_evaluations = 200000);

/// |lambda_k - u . y| for a traced record.
double tangency_residual(const MatrixPencil& pencil, const CloudRecord& record);

/// Default upper gap tolerance: min(10 * mesh^2, 1e-2) * scale.
double default_gap_tolerance(const MatrixPencil& pencil, const DirectionGrid& trace_grid);
/// Hull points may exceed W only by rounding: 1e-9 * max(1, scale).
double default_negative_tolerance(const MatrixPencil& pencil);

struct MainTheoremReport {
  std::vector<double> gaps;  // h_W(u) - hull_support(u) per test direction
  double max_gap = 0.0;
  double min_gap = 0.0;
  double max_abs_gap = 0.0;
  Vec argmax_direction;
  int trace_size = 0;
  int test_size = 0;
  int cloud_points = 0;
  int skipped = 0;
  double tol = 0.0;
  double tol_neg = 0.0;
  bool advisory = false;
  bool pass = false;
  ConvexHull hull;  // empty for n >= 4
  // n = 2 with refinement: the uniform-grid figures before bisection.
  bool refined = false;
  int refined_points = 0;
  double refinement_bound = 0.0;
  double uniform_max_gap = 0.0;
  double uniform_min_gap = 0.0;
};

/// Compares the support of W with that of the hull of the traced cloud.
/// Throws UnsupportedDimension for n >= 4 unless `advisory` is set. For n = 2
/// a positive `planar_refinement` adds refine_planar_boundary contacts first.
MainTheoremReport verify_main_theorem(const MatrixPencil& pencil, const DirectionGrid& trace_grid,
                                      const DirectionGrid& test_grid,
                                      std::optional<double> tol = std::nullopt,
                                      bool advisory = false, double planar_refinement = 0.0);

struct StateInclusionReport {
  int samples = 0;
  int violations = 0;
  double worst_violation = 0.0;
  double facet_deficit = 0.0;
  double slack = 0.0;
};

/// Largest h_W(normal) - offset over the facets (edges for n = 2) of a
/// full-dimensional hull: how far W reaches past the hull in the worst facet
/// direction. Zero for flat hulls.
double facet_deficit(const MatrixPencil& pencil, const ConvexHull& hull);

/// Projects `samples` random mixed and as many pure states and measures how
/// far their images fall outside the hull. Slack is 1e-6 * max(1, scale) plus
/// the larger of `hull_gap` and facet_deficit: pure states lie on the boundary
/// of W, which an inscribed hull misses by up to that much.
StateInclusionReport verify_state_inclusion(const MatrixPencil& pencil, const ConvexHull& hull,
                                            int samples, Rng& rng, double hull_gap = 0.0);

}  // namespace jnr
