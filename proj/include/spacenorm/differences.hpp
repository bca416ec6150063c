#ifndef SPACENORM_DIFFERENCES_HPP
#define SPACENORM_DIFFERENCES_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "spacenorm/geometry.hpp"
#include "spacenorm/gridfn.hpp"

namespace spacenorm {

/// Coefficients of the order-N forward difference, c_k = (-1)^{N-k} C(N,k).
struct DifferenceStencil {
  int order = 1;
  std::vector<std::int64_t> coeffs;  // k = 0..N

  /// Built by iterating the first-order stencil (integer arithmetic).
  static DifferenceStencil recursive(int N);
  /// Built from the binomial closed form (integer arithmetic).
  static DifferenceStencil closed_form(int N);
};

/// Applies a stencil along step `m` (lattice units): sum_k c_k f(x + k m).
/// Summation order is k ascending. Throws OutOfDomain when a node is
/// off-grid or masked.
double apply_stencil(const DifferenceStencil& st, const GridFunction& f, std::span<const int> x_idx,
                     std::span<const int> m);

/// Order-N difference of f at grid node x with lattice step m.
double delta(const GridFunction& f, std::span<const int> x_idx, std::span<const int> m, int N);

struct DiffMeanResult {
  double value = 0.0;
  std::size_t steps_used = 0;
  std::size_t steps_clipped = 0;  // chains leaving the sampled grid
  bool empty = false;
};

/// (t^{-d} sum_{h in V^N(x,t)} |Delta_h^N f(x)|^v h_grid^d)^{1/v}; for
/// v = infinity the max over the step set. Steps whose chain leaves the
/// sampled grid are skipped and counted. Empty step sets give 0.
DiffMeanResult diff_ball_mean(const GridFunction& f, std::span<const int> x_idx, double t,
                              double v, int N, const DomainSpec& dom);

struct DiffFieldResult {
  GridFunction field;
  std::size_t empty_count = 0;
  std::size_t clipped_count = 0;
};

/// Pointwise diff_ball_mean over the unmasked grid nodes.
DiffFieldResult diff_field(const GridFunction& f, double t, double v, int N,
                           const DomainSpec& dom);

}  // namespace spacenorm

#endif
