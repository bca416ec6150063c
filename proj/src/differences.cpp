#include "spacenorm/differences.hpp"

#include <atomic>
#include <cmath>

#include "spacenorm/lattice.hpp"
#include "spacenorm/parallel.hpp"

namespace spacenorm {

DifferenceStencil DifferenceStencil::recursive(int N) {
  if (N < 1) throw ConfigError("difference order must be >= 1");
  DifferenceStencil st;
  st.order = N;
  st.coeffs = {-1, 1};
  for (int n = 2; n <= N; ++n) {
    std::vector<std::int64_t> next(static_cast<std::size_t>(n) + 1, 0);
    for (std::size_t k = 0; k < next.size(); ++k) {
      const std::int64_t shifted = (k >= 1 && k - 1 < st.coeffs.size()) ? st.coeffs[k - 1] : 0;
      const std::int64_t plain = (k < st.coeffs.size()) ? st.coeffs[k] : 0;
      next[k] = shifted - plain;
    }
    st.coeffs = std::move(next);
  }
  return st;
}

DifferenceStencil DifferenceStencil::closed_form(int N) {
  if (N < 1) throw ConfigError("difference order must be >= 1");
  DifferenceStencil st;
  st.order = N;
  st.coeffs.resize(static_cast<std::size_t>(N) + 1);
  std::int64_t binom = 1;  // C(N, 0)
  for (int k = 0; k <= N; ++k) {
    st.coeffs[static_cast<std::size_t>(k)] = ((N - k) % 2 == 0 ? binom : -binom);
    if (k < N) binom = binom * (N - k) / (k + 1);
  }
  return st;
}

double apply_stencil(const DifferenceStencil& st, const GridFunction& f, std::span<const int> x_idx,
                     std::span<const int> m) {
  const int d = f.dim();
  thread_local std::vector<int> node;
  node.assign(x_idx.begin(), x_idx.end());
  double sum = 0.0;
  for (int k = 0; k <= st.order; ++k) {
    for (int a = 0; a < d; ++a) node[a] = x_idx[a] + k * m[a];
    if (!f.in_bounds(node)) throw OutOfDomain("difference chain leaves the grid");
    const std::size_t flat = f.flat_index(node);
    if (f.masked(flat)) throw OutOfDomain("difference chain hits a masked node");
    sum += static_cast<double>(st.coeffs[static_cast<std::size_t>(k)]) * f.value(flat);
  }
  return sum;
}

double delta(const GridFunction& f, std::span<const int> x_idx, std::span<const int> m, int N) {
  return apply_stencil(DifferenceStencil::closed_form(N), f, x_idx, m);
}

namespace {

// Core of the ball mean; offsets and stencil are precomputed by callers.
DiffMeanResult diff_mean_core(const GridFunction& f, std::span<const int> x_idx,
                              const std::vector<std::vector<int>>& offsets,
                              const DifferenceStencil& st, double t, double v,
                              const DomainSpec& dom) {
  const int d = f.dim();
  const int N = st.order;
  DiffMeanResult res;
  double sum = 0.0, vmax = 0.0;

  thread_local std::vector<int> node;
  thread_local std::vector<double> y;
  node.assign(static_cast<std::size_t>(d), 0);
  y.assign(static_cast<std::size_t>(d), 0.0);

  for (const auto& m : offsets) {
    // Bounds hold for every l in [0, N] iff they hold at l = N.
    bool in_grid = true;
    for (int a = 0; a < d; ++a) {
      node[a] = x_idx[a] + N * m[a];
      if (node[a] < 0 || node[a] >= f.grid().shape[a]) {
        in_grid = false;
        break;
      }
    }
    if (!in_grid) {
      // Only steps the domain itself would admit count as clipped.
      bool in_domain = true;
      if (dom.kind != DomainKind::FullSpace) {
        for (int l = 1; l <= N && in_domain; ++l) {
          for (int a = 0; a < d; ++a)
            y[a] = f.grid().origin[a] + (x_idx[a] + l * m[a]) * f.grid().spacing;
          in_domain = contains(dom, y);
        }
      }
      if (in_domain) ++res.steps_clipped;
      continue;
    }
    bool admissible = true;
    double val = 0.0;
    for (int k = 0; k <= N; ++k) {
      std::size_t flat = 0;
      for (int a = 0; a < d; ++a)
        flat += static_cast<std::size_t>(x_idx[a] + k * m[a]) * f.strides()[a];
      if (f.masked(flat)) {
        admissible = false;
        break;
      }
      val += static_cast<double>(st.coeffs[static_cast<std::size_t>(k)]) * f.value(flat);
    }
    if (!admissible) continue;
    ++res.steps_used;
    const double a = std::abs(val);
    if (v == kInfinity)
      vmax = std::max(vmax, a);
    else if (v == 1.0)
      sum += a;
    else if (v == 2.0)
      sum += a * a;
    else
      sum += std::pow(a, v);
  }

  if (res.steps_used == 0) {
    res.empty = true;
    res.value = 0.0;
    return res;
  }
  if (v == kInfinity)
    res.value = vmax;
  else
    res.value = std::pow(sum * f.cell_volume() / std::pow(t, d), 1.0 / v);
  return res;
}

}  // namespace

DiffMeanResult diff_ball_mean(const GridFunction& f, std::span<const int> x_idx, double t,
                              double v, int N, const DomainSpec& dom) {
  if (!(t > 0)) throw ConfigError("diff_ball_mean: t must be positive");
  const std::size_t flat = f.flat_index(x_idx);
  if (f.masked(flat)) throw OutOfDomain("diff_ball_mean: x is masked");
  const auto offsets = lattice_ball_offsets(f.dim(), f.spacing(), t);
  const auto st = DifferenceStencil::closed_form(N);
  return diff_mean_core(f, x_idx, offsets, st, t, v, dom);
}

DiffFieldResult diff_field(const GridFunction& f, double t, double v, int N,
                           const DomainSpec& dom) {
  const auto offsets = lattice_ball_offsets(f.dim(), f.spacing(), t);
  const auto st = DifferenceStencil::closed_form(N);
  const int d = f.dim();

  std::vector<double> out(f.size(), 0.0);
  std::atomic<std::size_t> empty{0}, clipped{0};
  parallel_for(f.size(), [&](std::size_t b, std::size_t e) {
    std::vector<int> idx(static_cast<std::size_t>(d));
    std::size_t local_empty = 0, local_clipped = 0;
    for (std::size_t i = b; i < e; ++i) {
      if (f.masked(i)) continue;
      f.unflatten(i, idx);
      const auto r = diff_mean_core(f, idx, offsets, st, t, v, dom);
      out[i] = r.value;
      if (r.empty) ++local_empty;
      local_clipped += r.steps_clipped;
    }
    empty += local_empty;
    clipped += local_clipped;
  });

  DiffFieldResult res{GridFunction(f.grid(), std::move(out), f.mask()), empty.load(),
                      clipped.load()};
  return res;
}

}  // namespace spacenorm
