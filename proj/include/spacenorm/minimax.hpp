#ifndef SPACENORM_MINIMAX_HPP
#define SPACENORM_MINIMAX_HPP

#include <vector>

#include "spacenorm/errors.hpp"

namespace spacenorm {

struct MinimaxResult {
  std::vector<double> coeffs;
  double eps = 0.0;
  int iterations = 0;
};

/// Discrete linear Chebyshev approximation: minimizes max_i |f_i - Phi_i a|
/// over a. Solved exactly as a linear program (simplex on the dual with
/// Bland's rule). Phi is row-major, m rows of k entries.
MinimaxResult minimax_fit(const std::vector<double>& phi, std::size_t m, std::size_t k,
                          const std::vector<double>& f);

}  // namespace spacenorm

#endif
