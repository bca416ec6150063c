#ifndef SPACENORM_LATTICE_HPP
#define SPACENORM_LATTICE_HPP

#include <span>
#include <vector>

#include "spacenorm/gridfn.hpp"

namespace spacenorm {

/// Integer lattice vectors m with |m * spacing| < t (strict), in
/// lexicographic order. The origin m = 0 is included.
std::vector<std::vector<int>> lattice_ball_offsets(int d, double spacing, double t);

/// Flat indices of the unmasked grid nodes y with |x - y| < t, ascending.
/// x need not be a grid node.
std::vector<std::size_t> ball_domain_samples(const GridFunction& g, std::span<const double> x,
                                             double t);

/// Flat indices of the unmasked nodes inside the dyadic cube [lo, hi),
/// ascending. Cube membership is half-open per axis.
std::vector<std::size_t> cube_domain_samples(const GridFunction& g, const DyadicCube& cube);

}  // namespace spacenorm

#endif
