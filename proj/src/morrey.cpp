#include "spacenorm/morrey.hpp"

#include <algorithm>
#include <cmath>

#include "spacenorm/lattice.hpp"
#include "spacenorm/parallel.hpp"

namespace spacenorm {

MorreyParams::MorreyParams(double p_, double u_) : p(p_), u(u_) {
  if (!(p > 0 && p <= u) || !std::isfinite(u)) throw ConfigError("need 0 < p <= u < inf");
}

MorreyParams MorreyParams::from_tau(double p, double tau) {
  if (!(tau >= 0 && tau < 1.0 / p)) throw ConfigError("need 0 <= tau < 1/p");
  return MorreyParams(p, 1.0 / (1.0 / p - tau));
}

std::vector<double> default_radius_set(const DomainSpec& dom, double spacing) {
  const double diam = dom.window.diameter();
  std::vector<double> radii{diam};
  for (double r = std::exp2(std::floor(std::log2(diam))); r >= spacing; r *= 0.5)
    radii.push_back(r);
  return radii;
}

std::pair<int, int> default_cube_levels(const DomainSpec& dom, double spacing) {
  const int j_max = static_cast<int>(std::floor(std::log2(1.0 / spacing) + 1e-9));
  const int j_min = -(static_cast<int>(std::ceil(std::log2(dom.window.max_extent()))) + 1);
  return {std::min(j_min, j_max), j_max};
}

namespace {

// |g|^p h^d per node, 0 at masked nodes.
std::vector<double> power_weights(const GridFunction& g, double p) {
  std::vector<double> w(g.size(), 0.0);
  const double hv = g.cell_volume();
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!g.masked(i)) w[i] = std::pow(std::abs(g.value(i)), p) * hv;
  return w;
}

// Prefix sums along the last axis: S[row * (n+1) + i] = sum of w[row, <i].
std::vector<double> last_axis_prefix(const GridFunction& g, const std::vector<double>& w) {
  const int d = g.dim();
  const std::size_t n_last = static_cast<std::size_t>(g.grid().shape[d - 1]);
  const std::size_t rows = g.size() / n_last;
  std::vector<double> s(rows * (n_last + 1), 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n_last; ++i) {
      acc += w[r * n_last + i];
      s[r * (n_last + 1) + i + 1] = acc;
    }
  }
  return s;
}

// sum of w over the ball B(center, r), rows over the leading axes and a
// prefix-table range along the last axis.
double ball_power_sum(const GridFunction& g, const std::vector<double>& prefix,
                      std::span<const int> cidx, double r) {
  const int d = g.dim();
  const auto& grid = g.grid();
  const double h = grid.spacing;
  const double r2 = r * r;
  const int reach = static_cast<int>(std::floor(r / h));
  const std::size_t n_last = static_cast<std::size_t>(grid.shape[d - 1]);

  thread_local std::vector<int> row;
  row.assign(static_cast<std::size_t>(d - 1), -reach);
  double sum = 0.0;
  while (true) {
    double rho2 = 0.0;
    bool in_grid = true;
    std::size_t rbase = 0;
    for (int k = 0; k < d - 1; ++k) {
      const double dy = row[k] * h;
      rho2 += dy * dy;
      const int a = cidx[k] + row[k];
      if (a < 0 || a >= grid.shape[k]) {
        in_grid = false;
        break;
      }
      rbase = rbase * static_cast<std::size_t>(grid.shape[k]) + static_cast<std::size_t>(a);
    }
    if (in_grid && rho2 < r2) {
      int q = static_cast<int>(std::floor(std::sqrt(r2 - rho2) / h));
      while (q >= 0 && rho2 + (q * h) * (q * h) >= r2) --q;
      if (q >= 0) {
        const int c = cidx[d - 1];
        const int a = std::max(c - q, 0);
        const int b = std::min(c + q, grid.shape[d - 1] - 1);
        if (b >= a)
          sum += prefix[rbase * (n_last + 1) + static_cast<std::size_t>(b) + 1] -
                 prefix[rbase * (n_last + 1) + static_cast<std::size_t>(a)];
      }
    }
    if (d == 1) break;
    int axis = d - 2;
    while (axis >= 0 && row[axis] == reach) {
      row[axis] = -reach;
      --axis;
    }
    if (axis < 0) break;
    ++row[axis];
  }
  return sum;
}

}  // namespace

double morrey_ball_norm(const GridFunction& g, const MorreyParams& mp, const DomainSpec& dom,
                        std::span<const double> radius_set) {
  if (radius_set.empty()) throw ConfigError("morrey_ball_norm: empty radius set");
  const int d = g.dim();
  const double h = g.grid().spacing;
  const double exponent = d * (1.0 / mp.u - 1.0 / mp.p);

  // Centers: unmasked nodes inside the evaluation window.
  std::vector<std::size_t> centers;
  {
    std::vector<int> idx(d);
    std::vector<double> y(d);
    for (std::size_t f = 0; f < g.size(); ++f) {
      if (g.masked(f)) continue;
      g.unflatten(f, idx);
      g.point(idx, y);
      if (dom.window.contains_closed(y)) centers.push_back(f);
    }
  }
  if (centers.empty()) throw EmptyDomain("morrey_ball_norm: no centers in window");

  const auto w = power_weights(g, mp.p);
  const auto prefix = last_axis_prefix(g, w);

  double best = 0.0;
  for (double r : radius_set) {
    if (!(r >= h)) throw ConfigError("morrey_ball_norm: radius below grid spacing");
    const double weight = std::pow(r, exponent);
    best = std::max(best, parallel_max(centers.size(), [&](std::size_t ci) {
                      thread_local std::vector<int> cidx;
                      cidx.assign(static_cast<std::size_t>(d), 0);
                      g.unflatten(centers[ci], cidx);
                      const double sum = ball_power_sum(g, prefix, cidx, r);
                      return weight * std::pow(sum, 1.0 / mp.p);
                    }));
  }
  return best;
}

double local_lp_on_cube(const GridFunction& g, double p, const DyadicCube& cube,
                        const DomainSpec& dom) {
  (void)dom;  // mask already encodes Omega
  if (!(p > 0) || p == kInfinity) throw ConfigError("local_lp_on_cube: need 0 < p < inf");
  const auto pts = cube_domain_samples(g, cube);
  double s = 0.0;
  for (std::size_t f : pts) s += std::pow(std::abs(g.value(f)), p);
  return std::pow(s * g.cell_volume(), 1.0 / p);
}

double morrey_cube_norm(const GridFunction& g, const MorreyParams& mp, const DomainSpec& dom,
                        int j_min, int j_max, std::int64_t cap) {
  const double tau = mp.tau();
  const int d = g.dim();
  double best = 0.0;
  for_each_cube(
      dom, j_min, j_max,
      [&](const DyadicCube& cube) {
        const auto pts = cube_domain_samples(g, cube);
        if (pts.empty()) return;
        double s = 0.0;
        for (std::size_t f : pts) s += std::pow(std::abs(g.value(f)), mp.p);
        const double lp = std::pow(s * g.cell_volume(), 1.0 / mp.p);
        const double weight = std::exp2(static_cast<double>(cube.level) * d * tau);
        best = std::max(best, weight * lp);
      },
      cap);
  return best;
}

}  // namespace spacenorm
