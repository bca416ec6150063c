#ifndef SPACENORM_GEOMETRY_HPP
#define SPACENORM_GEOMETRY_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "spacenorm/errors.hpp"

namespace spacenorm {

/// Axis-aligned box [lo_1,hi_1] x ... x [lo_d,hi_d].
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  int dim() const { return static_cast<int>(lo.size()); }
  double extent(int axis) const { return hi[axis] - lo[axis]; }
  double max_extent() const;
  double diameter() const;  // Euclidean diagonal
  bool contains_strict(std::span<const double> y) const;
  bool contains_closed(std::span<const double> y) const;
};

struct Ball {
  std::vector<double> center;
  double radius;  // > 0
};

/// Half-space { y : normal . y <= offset }.
struct HalfSpace {
  std::vector<double> normal;
  double offset;
};

enum class DomainKind { FullSpace, SpecialLipschitz, BoundedConvex, BoxWindow };

/// Geometry of the domain Omega together with the evaluation window.
///
/// SpecialLipschitz is the epigraph { (y', y_d) : y_d > graph(y') } of a
/// piecewise-linear function; realized for d = 1 (constant threshold) and
/// d = 2 (1-D polyline). BoundedConvex stores a half-space list (strict
/// inequalities for membership) and optionally the vertices for consistency
/// checks. All norm computations sweep centers and cubes inside `window`.
struct DomainSpec {
  DomainKind kind = DomainKind::FullSpace;
  Box window;

  // SpecialLipschitz: breakpoints of the graph (d == 2) or a single
  // threshold value (d == 1, graph_y only).
  std::vector<double> graph_x;
  std::vector<double> graph_y;
  double lipschitz_constant = 0.0;

  // BoundedConvex
  std::vector<HalfSpace> halfspaces;
  std::vector<std::vector<double>> vertices;

  // BoxWindow
  Box box;

  static DomainSpec full_space(Box window);
  static DomainSpec special_lipschitz_1d(double threshold, Box window);
  static DomainSpec special_lipschitz(std::vector<double> breakpoints_x,
                                      std::vector<double> breakpoints_y,
                                      double lipschitz_constant, Box window);
  /// 2-D convex polygon from its vertex list (any order; hull of the input).
  static DomainSpec convex_polygon(std::vector<std::vector<double>> verts, Box window);
  static DomainSpec bounded_convex(std::vector<HalfSpace> halfspaces,
                                   std::vector<std::vector<double>> verts, Box window);
  static DomainSpec box_window(Box inner, Box window);

  int dim() const { return window.dim(); }

  /// Graph value at y' (d == 2: piecewise-linear interpolation with
  /// end-slope extrapolation; d == 1: the stored threshold).
  double graph_value(double yprime) const;
  /// Minimum of the graph over [a, b].
  double graph_min_on(double a, double b) const;

  /// Checks the stored geometric invariants (Lipschitz bound on the
  /// breakpoints, vertex/half-space consistency within 1e-12). Throws
  /// ConfigError on violation.
  void check_invariants() const;

  std::string to_json() const;
  static DomainSpec from_json(const std::string& text);
};

/// true iff y lies in Omega (window not considered).
bool contains(const DomainSpec& dom, std::span<const double> y);

/// Dyadic cube 2^{-j}([0,1)^d + k).
struct DyadicCube {
  int level = 0;                // j
  std::vector<int64_t> index;   // k

  double side() const;          // 2^{-j}, binary exact
  double volume() const;        // 2^{-jd}
  double corner_lo(int axis) const;
  double corner_hi(int axis) const;
};

/// Admissible steps h on the given lattice: |h| < t and x + l*h in Omega for
/// every integer l in [0, N]. Returned as integer lattice multiples m with
/// h = m * lattice_spacing, in lexicographic order. May be empty.
std::vector<std::vector<int>> v_set_sample(const DomainSpec& dom, std::span<const double> x,
                                           double t, int N, double lattice_spacing);

/// Visits every dyadic cube with level in [j_min, j_max] whose closure
/// intersects window `cap` Omega, level-major and in lexicographic index
/// order. Throws CapExceeded when more than `cap` cubes would be visited.
void for_each_cube(const DomainSpec& dom, int j_min, int j_max,
                   const std::function<void(const DyadicCube&)>& visit,
                   std::int64_t cap = 10'000'000);

std::vector<DyadicCube> cubes_touching(const DomainSpec& dom, int j_min, int j_max,
                                       std::int64_t cap = 10'000'000);

}  // namespace spacenorm

#endif
