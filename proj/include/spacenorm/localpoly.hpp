#ifndef SPACENORM_LOCALPOLY_HPP
#define SPACENORM_LOCALPOLY_HPP

#include <span>
#include <vector>

#include "spacenorm/geometry.hpp"
#include "spacenorm/gridfn.hpp"

namespace spacenorm {

/// Multi-index basis of the d-variate polynomials with total degree < N,
/// graded lexicographic order.
struct PolySpace {
  int dimension = 1;
  int order = 1;  // N; degree bound is N - 1
  std::vector<std::vector<int>> exponents;

  static PolySpace make(int d, int N);
  std::size_t size() const { return exponents.size(); }
};

/// Orthogonal projection onto the polynomials realized on B(x,t) cap Omega
/// under the scaled discrete inner product t^{-d} sum h^d. The basis is the
/// scaled monomials ((y-x)/t)^alpha orthonormalized through the Gram
/// eigendecomposition; directions below 1e-10 of the top eigenvalue are
/// dropped (rank-revealing).
struct LocalProjection {
  std::vector<double> center;
  double radius = 0.0;
  PolySpace space;
  std::vector<double> ortho_coeffs;    // coefficients in the orthonormal basis
  std::vector<double> monomial_coeffs; // same polynomial in the scaled monomials
  std::vector<double> basis_matrix;    // column i: p_i in scaled monomials (dim x rank)
  int rank = 0;
  double condition = 1.0;
  double basis_sup = 0.0;              // realized sup_i sup_samples |p_i|
  std::size_t sample_count = 0;

  /// Value of the projected polynomial at y.
  double evaluate(std::span<const double> y) const;
};

LocalProjection project(const GridFunction& f, std::span<const double> x, double t, int N,
                        const DomainSpec& dom);

enum class OscMode { Exact2, Minimax, ProjectionSurrogate };

/// Local oscillation: distance of f from the degree-(N-1) polynomials over
/// B(x,t) cap Omega in the t^{-d}-normalized v-mean. Exact2 and Minimax are
/// exact discrete minimizers (v = 2 resp. v = infinity); the surrogate
/// measures the L2 projection residual in the v-mean.
double oscillation(const GridFunction& f, std::span<const double> x, double t, double v, int N,
                   const DomainSpec& dom, OscMode mode);

struct OscFieldResult {
  GridFunction field;
  std::size_t low_sample_count = 0;  // balls with fewer samples than dim P_{N-1}
  OscMode mode = OscMode::Exact2;
};

/// x -> oscillation(f, x, t) over the unmasked grid nodes; mode chosen from
/// v (Exact2 for v = 2, Minimax for v = infinity, surrogate otherwise).
OscFieldResult osc_field(const GridFunction& f, double t, double v, int N, const DomainSpec& dom);

}  // namespace spacenorm

#endif
