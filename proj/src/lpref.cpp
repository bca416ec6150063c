#include "spacenorm/lpref.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace spacenorm {

namespace fft {

namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

void transform_1d(std::complex<double>* a, int n, bool inverse) {
  // Iterative radix-2 Cooley-Tukey with bit-reversal permutation.
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * std::numbers::pi / len;
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (int i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (int k = 0; k < len / 2; ++k) {
        const std::complex<double> x = a[i + k];
        const std::complex<double> y = a[i + k + len / 2] * w;
        a[i + k] = x + y;
        a[i + k + len / 2] = x - y;
        w *= wl;
      }
    }
  }
  if (inverse) {
    const double s = 1.0 / n;
    for (int i = 0; i < n; ++i) a[i] *= s;
  }
}

}  // namespace

void transform_nd(std::vector<std::complex<double>>& data, const std::vector<int>& shape,
                  bool inverse) {
  std::size_t total = 1;
  for (int n : shape) {
    if (!is_pow2(n)) throw ConfigError("fft: shape must be powers of two");
    total *= static_cast<std::size_t>(n);
  }
  if (data.size() != total) throw ConfigError("fft: data size mismatch");

  const int d = static_cast<int>(shape.size());
  std::vector<std::size_t> strides(shape.size(), 1);
  for (int k = d - 2; k >= 0; --k)
    strides[k] = strides[k + 1] * static_cast<std::size_t>(shape[k + 1]);

  std::vector<std::complex<double>> line;
  for (int axis = 0; axis < d; ++axis) {
    const int n = shape[axis];
    const std::size_t stride = strides[axis];
    const std::size_t n_lines = total / static_cast<std::size_t>(n);
    line.assign(static_cast<std::size_t>(n), {});
    for (std::size_t l = 0; l < n_lines; ++l) {
      // Base offset of line l: distribute l over the non-axis dimensions.
      std::size_t base = 0, rem = l;
      for (int k = d - 1; k >= 0; --k) {
        if (k == axis) continue;
        const std::size_t sk = static_cast<std::size_t>(shape[k]);
        base += (rem % sk) * strides[k];
        rem /= sk;
      }
      for (int i = 0; i < n; ++i) line[static_cast<std::size_t>(i)] = data[base + i * stride];
      transform_1d(line.data(), n, inverse);
      for (int i = 0; i < n; ++i) data[base + i * stride] = line[static_cast<std::size_t>(i)];
    }
  }
}

}  // namespace fft

namespace {

double smooth_step(double u) {
  // C^inf monotone step: 0 for u <= 0, 1 for u >= 1.
  auto g = [](double x) { return x > 0 ? std::exp(-1.0 / x) : 0.0; };
  const double a = g(u), b = g(1.0 - u);
  return a / (a + b);
}

}  // namespace

double DyadicDecomposition::psi(double r) const {
  if (r <= 1.0) return 1.0;
  if (r >= 1.5) return 0.0;
  return smooth_step((1.5 - r) * 2.0);
}

double DyadicDecomposition::phi(int k, double r) const {
  if (k == 0) return psi(r);
  return psi(std::ldexp(r, -k)) - psi(std::ldexp(r, -k + 1));
}

DyadicDecomposition build_decomposition(double nyquist, int k_max) {
  if (k_max < 1) throw ConfigError("k_max must be >= 1");
  if (!(3.0 * std::ldexp(1.0, k_max - 1) <= nyquist))
    throw NyquistTooLow("need 3*2^{k_max-1} <= nyquist");
  DyadicDecomposition dec;
  dec.k_max = k_max;
  dec.nyquist = nyquist;
  return dec;
}

int default_k_max(const GridDescriptor& grid) {
  const double nyquist = std::numbers::pi / grid.spacing;
  int k = 1;
  while (3.0 * std::ldexp(1.0, k) <= nyquist) ++k;
  // Align with the real-space scale floor t >= 4 spacing.
  const int floor_k = static_cast<int>(std::floor(std::log2(1.0 / (4.0 * grid.spacing)) + 1e-9));
  return std::max(1, std::min(k, floor_k));
}

LpPiecesResult lp_pieces(const GridFunction& f, const DyadicDecomposition& dec) {
  const int d = f.dim();
  const auto& grid = f.grid();
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f.masked(i)) throw ConfigError("lp_pieces: full-space (unmasked) samples required");

  LpPiecesResult out;

  // Boundary decay check (warning grade), relative to the overall maximum.
  double fmax = 0.0, bmax = 0.0;
  {
    std::vector<int> idx(static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double a = std::abs(f.value(i));
      fmax = std::max(fmax, a);
      f.unflatten(i, idx);
      bool boundary = false;
      for (int k = 0; k < d; ++k)
        boundary = boundary || idx[static_cast<std::size_t>(k)] == 0 ||
                   idx[static_cast<std::size_t>(k)] == grid.shape[k] - 1;
      if (boundary) bmax = std::max(bmax, a);
    }
    out.boundary_flagged = fmax > 0 && bmax > 1e-8 * fmax;
  }

  std::vector<std::complex<double>> spectrum(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) spectrum[i] = f.value(i);
  fft::transform_nd(spectrum, grid.shape, false);

  // |xi| per frequency bin.
  std::vector<double> xi_norm(f.size());
  {
    std::vector<int> idx(static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < f.size(); ++i) {
      f.unflatten(i, idx);
      double s = 0.0;
      for (int k = 0; k < d; ++k) {
        int bin = idx[static_cast<std::size_t>(k)];
        if (bin > grid.shape[k] / 2) bin -= grid.shape[k];
        const double xi =
            2.0 * std::numbers::pi * bin / (grid.shape[k] * grid.spacing);
        s += xi * xi;
      }
      xi_norm[i] = std::sqrt(s);
    }
  }

  std::vector<std::complex<double>> band(f.size());
  for (int k = 0; k <= dec.k_max; ++k) {
    for (std::size_t i = 0; i < f.size(); ++i) band[i] = spectrum[i] * dec.phi(k, xi_norm[i]);
    fft::transform_nd(band, grid.shape, true);
    std::vector<double> vals(f.size());
    double imag = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      vals[i] = band[i].real();
      imag = std::max(imag, std::abs(band[i].imag()));
    }
    out.max_imag_residue = std::max(out.max_imag_residue, imag);
    out.pieces.emplace_back(grid, std::move(vals), f.mask());
  }
  return out;
}

LpNormResult lp_norm(const GridFunction& f, const SpaceParams& sp, const DyadicDecomposition& dec,
                     const DomainSpec& dom) {
  if (dom.kind != DomainKind::FullSpace)
    throw ConfigError("lp_norm: the reference norm is full-space only");
  auto pr = lp_pieces(f, dec);
  LpNormResult out;
  out.boundary_flagged = pr.boundary_flagged;

  if (sp.family == Family::BesovMorrey) {
    const MorreyParams mp(sp.p, sp.u);
    const auto radii = default_radius_set(dom, f.spacing());
    double acc = 0.0, sup = 0.0;
    for (int k = 0; k <= dec.k_max; ++k) {
      const double nk = morrey_ball_norm(pr.pieces[static_cast<std::size_t>(k)], mp, dom, radii);
      out.piece_outer_norms.push_back(nk);
      if (sp.q == kInfinity)
        sup = std::max(sup, std::exp2(k * sp.s) * nk);
      else
        acc += std::pow(std::exp2(k * sp.s) * nk, sp.q);
    }
    out.value = sp.q == kInfinity ? sup : std::pow(acc, 1.0 / sp.q);
    return out;
  }

  // BesovType: sup over cubes of the truncated l_q tail.
  const auto [j_min, j_max] = default_cube_levels(dom, f.spacing());
  double best = 0.0;
  for_each_cube(dom, j_min, j_max, [&](const DyadicCube& cube) {
    const int j_p = cube.level;
    double acc = 0.0, sup = 0.0;
    for (int k = std::max(j_p, 0); k <= dec.k_max; ++k) {
      const double lp = local_lp_on_cube(pr.pieces[static_cast<std::size_t>(k)], sp.p, cube, dom);
      if (sp.q == kInfinity)
        sup = std::max(sup, std::exp2(k * sp.s) * lp);
      else
        acc += std::pow(std::exp2(k * sp.s) * lp, sp.q);
    }
    const double tail = sp.q == kInfinity ? sup : std::pow(acc, 1.0 / sp.q);
    const double weight = std::exp2(static_cast<double>(cube.level) * sp.d * sp.tau);
    best = std::max(best, weight * tail);
  });
  out.value = best;
  return out;
}

}  // namespace spacenorm
