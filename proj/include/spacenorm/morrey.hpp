#ifndef SPACENORM_MORREY_HPP
#define SPACENORM_MORREY_HPP

#include <vector>

#include "spacenorm/geometry.hpp"
#include "spacenorm/gridfn.hpp"

namespace spacenorm {

/// Integrability pair 0 < p <= u < infinity; tau = 1/p - 1/u in [0, 1/p).
struct MorreyParams {
  double p = 2.0;
  double u = 2.0;

  MorreyParams() = default;
  MorreyParams(double p_, double u_);
  static MorreyParams from_tau(double p, double tau);
  double tau() const { return 1.0 / p - 1.0 / u; }
};

/// Dyadic radii {2^-i} between the grid spacing and the window diameter,
/// plus the diameter itself. Descending.
std::vector<double> default_radius_set(const DomainSpec& dom, double spacing);

/// Cube level range [j_min, j_max] matched to the window and the grid:
/// finest side >= spacing, coarsest one step beyond the window extent.
std::pair<int, int> default_cube_levels(const DomainSpec& dom, double spacing);

/// sup over centers y in Omega `cap` window and r in radius_set of
/// r^{d(1/u - 1/p)} (sum_{B(y,r)} |g|^p h^d)^{1/p}.
double morrey_ball_norm(const GridFunction& g, const MorreyParams& mp, const DomainSpec& dom,
                        std::span<const double> radius_set);

/// sup over dyadic cubes P with level in [j_min, j_max] touching
/// window `cap` Omega of |P|^{-tau} (sum_{P cap Omega} |g|^p h^d)^{1/p}.
double morrey_cube_norm(const GridFunction& g, const MorreyParams& mp, const DomainSpec& dom,
                        int j_min, int j_max, std::int64_t cap = 10'000'000);

/// Riemann L_p norm of g over P `cap` Omega; 0 when the cube holds no samples.
double local_lp_on_cube(const GridFunction& g, double p, const DyadicCube& cube,
                        const DomainSpec& dom);

}  // namespace spacenorm

#endif
