#ifndef SPACENORM_LPREF_HPP
#define SPACENORM_LPREF_HPP

#include <complex>
#include <vector>

#include "spacenorm/gridfn.hpp"
#include "spacenorm/spacenorms.hpp"

namespace spacenorm {

/// Smooth dyadic decomposition of unity on the frequency side: psi = 1 on
/// |xi| <= 1, supported in |xi| <= 3/2; phi_0 = psi and
/// phi_k(xi) = psi(2^{-k} xi) - psi(2^{-k+1} xi) for k >= 1.
struct DyadicDecomposition {
  int k_max = 1;
  double nyquist = 0.0;

  double psi(double r) const;
  double phi(int k, double r) const;
};

/// Builds the decomposition and validates 3 * 2^{k_max - 1} <= nyquist.
DyadicDecomposition build_decomposition(double nyquist, int k_max);

/// Largest admissible k_max for the grid, additionally aligned with the
/// oscillation/difference scale floor (t >= 4 spacing).
int default_k_max(const GridDescriptor& grid);

struct LpPiecesResult {
  std::vector<GridFunction> pieces;  // k = 0..k_max
  bool boundary_flagged = false;     // |f| at the window boundary > 1e-8 rel
  double max_imag_residue = 0.0;
};

/// Frequency-band pieces of f: inverse transform of phi_k times the
/// transform of f, computed with a periodized FFT on the sampled window.
/// Requires an unmasked (full-space) grid with power-of-two shape.
LpPiecesResult lp_pieces(const GridFunction& f, const DyadicDecomposition& dec);

struct LpNormResult {
  double value = 0.0;
  std::vector<double> piece_outer_norms;  // BesovMorrey only
  bool boundary_flagged = false;
};

/// Littlewood-Paley reference quasi-norm (full space only). BesovMorrey:
/// weighted l_q of Morrey norms of the pieces. BesovType: sup over dyadic
/// cubes P of |P|^{-tau} times the l_q tail sum starting at max{j_P, 0}.
LpNormResult lp_norm(const GridFunction& f, const SpaceParams& sp, const DyadicDecomposition& dec,
                     const DomainSpec& dom);

namespace fft {
/// In-place radix-2 transforms; shape entries must be powers of two.
void transform_nd(std::vector<std::complex<double>>& data, const std::vector<int>& shape,
                  bool inverse);
}  // namespace fft

}  // namespace spacenorm

#endif
