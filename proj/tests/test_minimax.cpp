#include <cmath>
#include <random>

#include "doctest.h"
#include "spacenorm/minimax.hpp"

using namespace spacenorm;

namespace {

// Exact oracle by vertex enumeration: the optimum of the epigraph LP
// min eps, |f_i - Phi_i a| <= eps, sits on k+1 active signed constraints
// sigma (f_i - Phi_i a) = eps. Enumerate all such square systems, keep the
// feasible ones, take the smallest eps.
double enumerate_minimax(const std::vector<double>& phi, std::size_t m, std::size_t k,
                         const std::vector<double>& f) {
  const std::size_t nv = k + 1;
  const std::size_t n_cons = 2 * m;
  if (n_cons < nv) return 0.0;
  double scale = 1e-12;
  for (double x : f) scale = std::max(scale, std::abs(x));
  double best = std::numeric_limits<double>::infinity();

  std::vector<std::size_t> comb(nv);
  for (std::size_t i = 0; i < nv; ++i) comb[i] = i;
  std::vector<double> sys(nv * (nv + 1)), sol(nv);
  while (true) {
    for (std::size_t r = 0; r < nv; ++r) {
      const std::size_t c = comb[r];
      const std::size_t i = c % m;
      const double sigma = c < m ? 1.0 : -1.0;
      for (std::size_t cc = 0; cc < k; ++cc) sys[r * (nv + 1) + cc] = sigma * phi[i * k + cc];
      sys[r * (nv + 1) + k] = 1.0;
      sys[r * (nv + 1) + nv] = sigma * f[i];
    }
    bool singular = false;
    for (std::size_t col = 0; col < nv && !singular; ++col) {
      std::size_t piv = col;
      for (std::size_t r = col + 1; r < nv; ++r)
        if (std::abs(sys[r * (nv + 1) + col]) > std::abs(sys[piv * (nv + 1) + col])) piv = r;
      if (std::abs(sys[piv * (nv + 1) + col]) < 1e-11 * std::max(1.0, scale)) {
        singular = true;
        break;
      }
      if (piv != col)
        for (std::size_t j = col; j <= nv; ++j)
          std::swap(sys[piv * (nv + 1) + j], sys[col * (nv + 1) + j]);
      for (std::size_t r = col + 1; r < nv; ++r) {
        const double fct = sys[r * (nv + 1) + col] / sys[col * (nv + 1) + col];
        for (std::size_t j = col; j <= nv; ++j)
          sys[r * (nv + 1) + j] -= fct * sys[col * (nv + 1) + j];
      }
    }
    if (!singular) {
      for (std::size_t r = nv; r-- > 0;) {
        double s = sys[r * (nv + 1) + nv];
        for (std::size_t j = r + 1; j < nv; ++j) s -= sys[r * (nv + 1) + j] * sol[j];
        sol[r] = s / sys[r * (nv + 1) + r];
      }
      const double eps = sol[k];
      if (eps >= -1e-10 * std::max(1.0, scale) && eps < best) {
        double worst = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          double r = f[i];
          for (std::size_t cc = 0; cc < k; ++cc) r -= phi[i * k + cc] * sol[cc];
          worst = std::max(worst, std::abs(r));
        }
        if (worst <= std::abs(eps) * (1 + 1e-8) + 1e-10 * std::max(1.0, scale))
          best = std::max(eps, 0.0);
      }
    }
    std::size_t pos = nv - 1;
    while (comb[pos] == pos + n_cons - nv) {
      if (pos == 0) return best;
      --pos;
    }
    ++comb[pos];
    for (std::size_t j = pos + 1; j < nv; ++j) comb[j] = comb[j - 1] + 1;
  }
}

}  // namespace

TEST_CASE("minimax on hand-checkable cases") {
  {
    // constants fit to {0, 1}: eps = 1/2 at a = 1/2
    std::vector<double> phi{1.0, 1.0};
    std::vector<double> f{0.0, 1.0};
    const auto r = minimax_fit(phi, 2, 1, f);
    CHECK(r.eps == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.coeffs[0] == doctest::Approx(0.5).epsilon(1e-9));
  }
  {
    // best linear approximation of x^2 on [-1, 1]: error |T_2|/2 = 1/2
    const int n = 201;
    std::vector<double> phi(2 * n), f(n);
    for (int i = 0; i < n; ++i) {
      const double x = -1.0 + 2.0 * i / (n - 1);
      phi[2 * i] = 1.0;
      phi[2 * i + 1] = x;
      f[i] = x * x;
    }
    const auto r = minimax_fit(phi, n, 2, f);
    CHECK(r.eps == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(std::abs(r.coeffs[1]) <= 1e-9);
    CHECK(r.coeffs[0] == doctest::Approx(0.5).epsilon(1e-6));
  }
  {
    // interpolation: m <= k gives eps = 0
    std::vector<double> phi{1.0, -1.0, 1.0, 2.0};
    std::vector<double> f{3.0, -1.0};
    const auto r = minimax_fit(phi, 2, 2, f);
    CHECK(r.eps <= 1e-12);
  }
}

TEST_CASE("minimax optimality certificates on random problems") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t m = 3 + static_cast<std::size_t>(trial % 9);
    const std::size_t k = 1 + static_cast<std::size_t>(trial % 3);
    if (m <= k) continue;
    std::vector<double> phi(m * k), f(m);
    for (std::size_t i = 0; i < m; ++i) {
      phi[i * k] = 1.0;
      const double x = u(rng);
      for (std::size_t c = 1; c < k; ++c) phi[i * k + c] = std::pow(x, double(c));
      f[i] = u(rng);
    }
    const auto r = minimax_fit(phi, m, k, f);

    // residual consistency: the reported eps is the realized max residual
    double worst = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double res = f[i];
      for (std::size_t c = 0; c < k; ++c) res -= phi[i * k + c] * r.coeffs[c];
      worst = std::max(worst, std::abs(res));
    }
    CHECK(worst == doctest::Approx(r.eps).epsilon(1e-9));

    // global optimality against the vertex-enumeration oracle
    const double oracle = enumerate_minimax(phi, m, k, f);
    CHECK(r.eps <= oracle * (1 + 1e-9) + 1e-12);
    CHECK(r.eps >= oracle * (1 - 1e-9) - 1e-12);
  }
}
