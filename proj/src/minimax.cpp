#include "spacenorm/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spacenorm {

namespace {

// Dense inverse via Gauss-Jordan with partial pivoting; n <= k + 1 is tiny.
bool invert(std::vector<double>& a, std::size_t n) {
  std::vector<double> inv(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) inv[i * n + i] = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    if (std::abs(a[piv * n + col]) < 1e-300) return false;
    if (piv != col)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a[piv * n + j], a[col * n + j]);
        std::swap(inv[piv * n + j], inv[col * n + j]);
      }
    const double s = 1.0 / a[col * n + col];
    for (std::size_t j = 0; j < n; ++j) {
      a[col * n + j] *= s;
      inv[col * n + j] *= s;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double fct = a[r * n + col];
      if (fct == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        a[r * n + j] -= fct * a[col * n + j];
        inv[r * n + j] -= fct * inv[col * n + j];
      }
    }
  }
  a = std::move(inv);
  return true;
}

}  // namespace

// Dual formulation: max f^T(mu+ - mu-) subject to Phi^T(mu+ - mu-) = 0 and
// sum(mu+ + mu-) + s = 1, all variables nonnegative. The simplex multipliers
// of the equality rows recover the fit coefficients; the optimal value is
// the minimax deviation.
//
// The equality rows have zero right-hand side, so the all-artificial start
// is already feasible (phase 1 is trivial); artificials are pivoted out
// where possible and otherwise mark redundant rows. Surviving artificials
// carry zero cost, never enter, and stay at value zero.
MinimaxResult minimax_fit(const std::vector<double>& phi, std::size_t m, std::size_t k,
                          const std::vector<double>& f) {
  if (phi.size() != m * k || f.size() != m) throw ConfigError("minimax_fit: shape mismatch");
  MinimaxResult out;
  out.coeffs.assign(k, 0.0);
  if (m == 0) return out;

  const std::size_t rows = k + 1;
  double scale = 1.0;
  for (double x : f) scale = std::max(scale, std::abs(x));
  for (double x : phi) scale = std::max(scale, std::abs(x));
  const double tol = 1e-11 * scale;

  // Column encoding: [0, m) mu+, [m, 2m) mu-, 2m slack, 2m+1.. artificials.
  const std::size_t n_real = 2 * m + 1;
  auto column = [&](std::size_t j, std::vector<double>& col) {
    std::fill(col.begin(), col.end(), 0.0);
    if (j < m) {
      for (std::size_t r = 0; r < k; ++r) col[r] = phi[j * k + r];
      col[k] = 1.0;
    } else if (j < 2 * m) {
      for (std::size_t r = 0; r < k; ++r) col[r] = -phi[(j - m) * k + r];
      col[k] = 1.0;
    } else if (j == 2 * m) {
      col[k] = 1.0;
    } else {
      col[j - n_real] = 1.0;
    }
  };
  auto cost = [&](std::size_t j) -> double {
    if (j < m) return f[j];
    if (j < 2 * m) return -f[j - m];
    return 0.0;  // slack and artificials
  };

  std::vector<std::size_t> basis(rows);
  for (std::size_t r = 0; r < k; ++r) basis[r] = n_real + r;
  basis[k] = 2 * m;

  std::vector<double> binv(rows * rows, 0.0), col(rows), w(rows), xb(rows), y(rows);
  auto refactor = [&]() {
    std::vector<double> b(rows * rows);
    for (std::size_t c = 0; c < rows; ++c) {
      column(basis[c], col);
      for (std::size_t r = 0; r < rows; ++r) b[r * rows + c] = col[r];
    }
    binv = b;
    if (!invert(binv, rows)) throw Error("minimax_fit: singular basis");
  };
  auto tableau_column = [&](std::size_t j) {
    column(j, col);
    for (std::size_t r = 0; r < rows; ++r) {
      double s = 0.0;
      for (std::size_t c = 0; c < rows; ++c) s += binv[r * rows + c] * col[c];
      w[r] = s;
    }
  };

  // Purge artificials: pivot a real column into each artificial row where
  // one has a nonzero tableau entry; rows without one are redundant and the
  // artificial stays basic at zero.
  refactor();
  for (std::size_t pos = 0; pos < k; ++pos) {
    if (basis[pos] < n_real) continue;
    bool replaced = false;
    for (std::size_t j = 0; j < n_real && !replaced; ++j) {
      bool basic = false;
      for (std::size_t c = 0; c < rows; ++c) basic = basic || basis[c] == j;
      if (basic) continue;
      tableau_column(j);
      if (std::abs(w[pos]) > 1e-7 * scale) {
        basis[pos] = j;  // degenerate pivot: x stays 0 on that row
        refactor();
        replaced = true;
      }
    }
  }

  const int max_iter = 500 * static_cast<int>(m + rows) + 500;
  int iter = 0;
  int stall = 0;
  double last_obj = -std::numeric_limits<double>::infinity();
  for (;; ++iter) {
    if (iter > max_iter) throw Error("minimax_fit: iteration limit reached");
    refactor();
    for (std::size_t r = 0; r < rows; ++r) xb[r] = std::max(binv[r * rows + k], 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      double s = 0.0;
      for (std::size_t c = 0; c < rows; ++c) s += cost(basis[c]) * binv[c * rows + r];
      y[r] = s;  // prices
    }

    // Track degenerate plateaus; switch from Dantzig to Bland while stuck.
    double obj = 0.0;
    for (std::size_t c = 0; c < rows; ++c) obj += cost(basis[c]) * xb[c];
    if (obj > last_obj + tol) {
      last_obj = obj;
      stall = 0;
    } else {
      ++stall;
    }
    const bool bland = stall > 40;

    // Pricing over the real columns only (artificials never enter).
    std::size_t enter = n_real;
    double best_rc = tol;
    for (std::size_t j = 0; j < n_real; ++j) {
      bool basic = false;
      for (std::size_t c = 0; c < rows; ++c) basic = basic || basis[c] == j;
      if (basic) continue;
      double dot = y[k];
      if (j < m)
        for (std::size_t r = 0; r < k; ++r) dot += y[r] * phi[j * k + r];
      else if (j < 2 * m)
        for (std::size_t r = 0; r < k; ++r) dot -= y[r] * phi[(j - m) * k + r];
      const double rc = cost(j) - dot;
      if (rc > best_rc) {
        enter = j;
        if (bland) break;  // smallest improving index
        best_rc = rc;
      }
    }
    if (enter == n_real) break;  // optimal

    tableau_column(enter);
    // Ratio test; Bland resolves ties by the smallest basic column index.
    std::size_t leave = rows;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < rows; ++r) {
      if (w[r] > tol) {
        const double ratio = xb[r] / w[r];
        if (ratio < best * (1 - 1e-12) - 1e-300 ||
            (ratio <= best * (1 + 1e-12) && (leave == rows || basis[r] < basis[leave]))) {
          best = ratio;
          leave = r;
        }
      }
    }
    if (leave == rows) throw Error("minimax_fit: unbounded (should be impossible)");
    basis[leave] = enter;
  }

  out.iterations = iter;
  for (std::size_t r = 0; r < k; ++r) out.coeffs[r] = y[r];
  double obj = 0.0;
  for (std::size_t c = 0; c < rows; ++c) obj += cost(basis[c]) * std::max(binv[c * rows + k], 0.0);
  out.eps = std::max(obj, 0.0);
  return out;
}

}  // namespace spacenorm
