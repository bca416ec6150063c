#include "spacenorm/localpoly.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "spacenorm/lattice.hpp"
#include "spacenorm/minimax.hpp"
#include "spacenorm/parallel.hpp"

namespace spacenorm {

namespace {

void enumerate_exponents(int d, int remaining, std::vector<int>& cur,
                         std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == d - 1) {
    cur.push_back(remaining);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    cur.push_back(e);
    enumerate_exponents(d, remaining - e, cur, out);
    cur.pop_back();
  }
}

}  // namespace

PolySpace PolySpace::make(int d, int N) {
  if (d < 1 || N < 1) throw ConfigError("PolySpace needs d >= 1 and N >= 1");
  PolySpace ps;
  ps.dimension = d;
  ps.order = N;
  std::vector<int> cur;
  for (int total = 0; total < N; ++total) enumerate_exponents(d, total, cur, ps.exponents);
  return ps;
}

namespace {

inline void eval_monomials(const PolySpace& ps, std::span<const double> z, double* out) {
  for (std::size_t i = 0; i < ps.exponents.size(); ++i) {
    double v = 1.0;
    for (int k = 0; k < ps.dimension; ++k)
      for (int e = 0; e < ps.exponents[i][k]; ++e) v *= z[k];
    out[i] = v;
  }
}

constexpr double kRankThreshold = 1e-10;

// Shared projection machinery over an explicit sample list.
struct ProjectionCore {
  PolySpace space;
  Eigen::MatrixXd basis;  // dim x rank, p_i = basis.col(i) in scaled monomials
  int rank = 0;
  double condition = 1.0;
};

ProjectionCore factor_gram(const PolySpace& ps, const Eigen::MatrixXd& gram) {
  ProjectionCore core;
  core.space = ps;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  const auto& vals = eig.eigenvalues();
  const double lmax = vals.maxCoeff();
  if (!(lmax > 0)) {
    core.rank = 0;
    core.basis.resize(static_cast<Eigen::Index>(ps.size()), 0);
    return core;
  }
  std::vector<int> keep;
  for (Eigen::Index i = 0; i < vals.size(); ++i)
    if (vals[i] >= kRankThreshold * lmax) keep.push_back(static_cast<int>(i));
  core.rank = static_cast<int>(keep.size());
  core.basis.resize(gram.rows(), core.rank);
  double lmin = lmax;
  for (int c = 0; c < core.rank; ++c) {
    const double lam = vals[keep[static_cast<std::size_t>(c)]];
    lmin = std::min(lmin, lam);
    core.basis.col(c) =
        eig.eigenvectors().col(keep[static_cast<std::size_t>(c)]) / std::sqrt(lam);
  }
  core.condition = lmax / lmin;
  return core;
}

}  // namespace

double LocalProjection::evaluate(std::span<const double> y) const {
  thread_local std::vector<double> z, phi;
  const int d = space.dimension;
  z.assign(static_cast<std::size_t>(d), 0.0);
  phi.assign(space.size(), 0.0);
  for (int k = 0; k < d; ++k) z[static_cast<std::size_t>(k)] = (y[k] - center[k]) / radius;
  eval_monomials(space, z, phi.data());
  double s = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) s += phi[i] * monomial_coeffs[i];
  return s;
}

LocalProjection project(const GridFunction& f, std::span<const double> x, double t, int N,
                        const DomainSpec& dom) {
  (void)dom;  // the mask encodes Omega
  if (!(t >= 2.0 * f.spacing())) throw ConfigError("project: need t >= 2 * spacing");
  const auto samples = ball_domain_samples(f, x, t);
  if (samples.empty()) throw DegenerateBall("project: no samples in B(x,t) cap Omega");

  const int d = f.dim();
  const PolySpace ps = PolySpace::make(d, N);
  const std::size_t dim = ps.size();
  const double w = f.cell_volume() / std::pow(t, d);

  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                               static_cast<Eigen::Index>(dim));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  std::vector<double> z(static_cast<std::size_t>(d)), phi(dim);
  for (std::size_t s : samples) {
    const auto y = f.point_of(s);
    for (int k = 0; k < d; ++k) z[static_cast<std::size_t>(k)] = (y[k] - x[k]) / t;
    eval_monomials(ps, z, phi.data());
    const double fv = f.value(s);
    for (std::size_t i = 0; i < dim; ++i) {
      rhs[static_cast<Eigen::Index>(i)] += w * fv * phi[i];
      for (std::size_t j = i; j < dim; ++j)
        gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += w * phi[i] * phi[j];
    }
  }
  gram = gram.selfadjointView<Eigen::Upper>();

  const ProjectionCore core = factor_gram(ps, gram);
  Eigen::VectorXd c = core.basis.transpose() * rhs;
  Eigen::VectorXd a = core.basis * c;

  LocalProjection proj;
  proj.center.assign(x.begin(), x.end());
  proj.radius = t;
  proj.space = ps;
  proj.rank = core.rank;
  proj.condition = core.condition;
  proj.sample_count = samples.size();
  proj.ortho_coeffs.assign(c.data(), c.data() + c.size());
  proj.monomial_coeffs.assign(a.data(), a.data() + a.size());
  proj.basis_matrix.assign(core.basis.data(), core.basis.data() + core.basis.size());

  // Realized sup of the orthonormal basis over the samples.
  double sup = 0.0;
  for (std::size_t s : samples) {
    const auto y = f.point_of(s);
    for (int k = 0; k < d; ++k) z[static_cast<std::size_t>(k)] = (y[k] - x[k]) / t;
    eval_monomials(ps, z, phi.data());
    for (int i = 0; i < core.rank; ++i) {
      double v = 0.0;
      for (std::size_t j = 0; j < dim; ++j)
        v += core.basis(static_cast<Eigen::Index>(j), i) * phi[j];
      sup = std::max(sup, std::abs(v));
    }
  }
  proj.basis_sup = sup;
  return proj;
}

namespace {

double projection_residual_mean(const GridFunction& f, std::span<const double> x, double t,
                                double v, const PolySpace& ps,
                                const std::vector<std::size_t>& samples) {
  const int d = f.dim();
  const std::size_t dim = ps.size();
  const double w = f.cell_volume() / std::pow(t, d);

  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                               static_cast<Eigen::Index>(dim));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  thread_local std::vector<double> z, phi, vals;
  z.assign(static_cast<std::size_t>(d), 0.0);
  phi.assign(dim, 0.0);
  for (std::size_t s : samples) {
    const auto y = f.point_of(s);
    for (int k = 0; k < d; ++k) z[static_cast<std::size_t>(k)] = (y[k] - x[k]) / t;
    eval_monomials(ps, z, phi.data());
    const double fv = f.value(s);
    for (std::size_t i = 0; i < dim; ++i) {
      rhs[static_cast<Eigen::Index>(i)] += w * fv * phi[i];
      for (std::size_t j = i; j < dim; ++j)
        gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += w * phi[i] * phi[j];
    }
  }
  gram = gram.selfadjointView<Eigen::Upper>();
  const ProjectionCore core = factor_gram(ps, gram);
  Eigen::VectorXd a = core.basis * (core.basis.transpose() * rhs);

  vals.assign(samples.size(), 0.0);
  for (std::size_t si = 0; si < samples.size(); ++si) {
    const auto y = f.point_of(samples[si]);
    for (int k = 0; k < d; ++k) z[static_cast<std::size_t>(k)] = (y[k] - x[k]) / t;
    eval_monomials(ps, z, phi.data());
    double pv = 0.0;
    for (std::size_t j = 0; j < dim; ++j) pv += phi[j] * a[static_cast<Eigen::Index>(j)];
    vals[si] = f.value(samples[si]) - pv;
  }
  return riemann_mean_values(vals, f.cell_volume(), std::pow(t, d), v);
}

double minimax_osc(const GridFunction& f, std::span<const double> x, double t,
                   const PolySpace& ps, const std::vector<std::size_t>& samples) {
  const int d = f.dim();
  const std::size_t dim = ps.size();
  std::vector<double> phi_mat(samples.size() * dim);
  std::vector<double> fv(samples.size());
  std::vector<double> z(static_cast<std::size_t>(d));
  for (std::size_t si = 0; si < samples.size(); ++si) {
    const auto y = f.point_of(samples[si]);
    for (int k = 0; k < d; ++k) z[static_cast<std::size_t>(k)] = (y[k] - x[k]) / t;
    eval_monomials(ps, z, &phi_mat[si * dim]);
    fv[si] = f.value(samples[si]);
  }
  return minimax_fit(phi_mat, samples.size(), dim, fv).eps;
}

}  // namespace

double oscillation(const GridFunction& f, std::span<const double> x, double t, double v, int N,
                   const DomainSpec& dom, OscMode mode) {
  (void)dom;
  if (!(t >= 2.0 * f.spacing())) throw ConfigError("oscillation: need t >= 2 * spacing");
  if (mode == OscMode::Exact2 && v != 2.0) throw ModeMismatch("Exact2 requires v = 2");
  if (mode == OscMode::Minimax && v != kInfinity) throw ModeMismatch("Minimax requires v = inf");
  const auto samples = ball_domain_samples(f, x, t);
  if (samples.empty()) throw DegenerateBall("oscillation: no samples in B(x,t) cap Omega");
  const PolySpace ps = PolySpace::make(f.dim(), N);
  if (mode == OscMode::Minimax) return minimax_osc(f, x, t, ps, samples);
  return projection_residual_mean(f, x, t, v, ps, samples);
}

OscFieldResult osc_field(const GridFunction& f, double t, double v, int N,
                         const DomainSpec& dom) {
  (void)dom;
  if (!(t >= 2.0 * f.spacing())) throw ConfigError("osc_field: need t >= 2 * spacing");
  const int d = f.dim();
  const PolySpace ps = PolySpace::make(d, N);
  const std::size_t dim = ps.size();
  const auto offsets = lattice_ball_offsets(d, f.spacing(), t);
  const std::size_t m_full = offsets.size();
  const double w = f.cell_volume() / std::pow(t, d);
  const OscMode mode = (v == 2.0)       ? OscMode::Exact2
                       : (v == kInfinity) ? OscMode::Minimax
                                          : OscMode::ProjectionSurrogate;

  // Scaled monomials per offset; shared by every node with a complete ball.
  std::vector<double> phi_full(m_full * dim);
  {
    std::vector<double> z(static_cast<std::size_t>(d));
    for (std::size_t o = 0; o < m_full; ++o) {
      for (int k = 0; k < d; ++k)
        z[static_cast<std::size_t>(k)] = offsets[o][static_cast<std::size_t>(k)] * f.spacing() / t;
      eval_monomials(ps, z, &phi_full[o * dim]);
    }
  }

  ProjectionCore full_core;
  if (mode != OscMode::Minimax) {
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                                 static_cast<Eigen::Index>(dim));
    for (std::size_t o = 0; o < m_full; ++o)
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i; j < dim; ++j)
          gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
              w * phi_full[o * dim + i] * phi_full[o * dim + j];
    gram = gram.selfadjointView<Eigen::Upper>();
    full_core = factor_gram(ps, gram);
  }

  std::vector<double> out(f.size(), 0.0);
  std::vector<std::size_t> low_counts(f.size(), 0);
  parallel_for(f.size(), [&](std::size_t b, std::size_t e) {
    std::vector<int> idx(static_cast<std::size_t>(d)), node(static_cast<std::size_t>(d));
    std::vector<std::size_t> flat_samples;
    std::vector<char> present;
    std::vector<double> fv, resid;
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(dim));
    for (std::size_t i = b; i < e; ++i) {
      if (f.masked(i)) continue;
      f.unflatten(i, idx);

      // Collect the realized chunk of the offset ball.
      flat_samples.clear();
      present.assign(m_full, 0);
      bool complete = true;
      for (std::size_t o = 0; o < m_full; ++o) {
        bool ok = true;
        for (int k = 0; k < d; ++k) {
          node[static_cast<std::size_t>(k)] = idx[static_cast<std::size_t>(k)] +
                                              offsets[o][static_cast<std::size_t>(k)];
          if (node[static_cast<std::size_t>(k)] < 0 ||
              node[static_cast<std::size_t>(k)] >= f.grid().shape[k]) {
            ok = false;
            break;
          }
        }
        std::size_t flat = 0;
        if (ok) {
          flat = f.flat_index(node);
          ok = !f.masked(flat);
        }
        if (ok) {
          present[o] = 1;
          flat_samples.push_back(flat);
        } else {
          complete = false;
        }
      }
      if (flat_samples.size() < dim) ++low_counts[i];

      if (mode == OscMode::Minimax) {
        std::vector<double> phi_mat;
        phi_mat.reserve(flat_samples.size() * dim);
        fv.clear();
        std::size_t si = 0;
        for (std::size_t o = 0; o < m_full; ++o) {
          if (!present[o]) continue;
          phi_mat.insert(phi_mat.end(), &phi_full[o * dim], &phi_full[o * dim] + dim);
          fv.push_back(f.value(flat_samples[si++]));
        }
        out[i] = minimax_fit(phi_mat, fv.size(), dim, fv).eps;
        continue;
      }

      const ProjectionCore* core = &full_core;
      ProjectionCore local_core;
      if (!complete) {
        Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                                     static_cast<Eigen::Index>(dim));
        for (std::size_t o = 0; o < m_full; ++o) {
          if (!present[o]) continue;
          for (std::size_t a = 0; a < dim; ++a)
            for (std::size_t c = a; c < dim; ++c)
              gram(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(c)) +=
                  w * phi_full[o * dim + a] * phi_full[o * dim + c];
        }
        gram = gram.selfadjointView<Eigen::Upper>();
        local_core = factor_gram(ps, gram);
        core = &local_core;
      }

      rhs.setZero();
      {
        std::size_t si = 0;
        for (std::size_t o = 0; o < m_full; ++o) {
          if (!present[o]) continue;
          const double val = f.value(flat_samples[si++]);
          for (std::size_t a = 0; a < dim; ++a)
            rhs[static_cast<Eigen::Index>(a)] += w * val * phi_full[o * dim + a];
        }
      }
      Eigen::VectorXd a = core->basis * (core->basis.transpose() * rhs);
      resid.clear();
      {
        std::size_t si = 0;
        for (std::size_t o = 0; o < m_full; ++o) {
          if (!present[o]) continue;
          double pv = 0.0;
          for (std::size_t c = 0; c < dim; ++c)
            pv += phi_full[o * dim + c] * a[static_cast<Eigen::Index>(c)];
          resid.push_back(f.value(flat_samples[si++]) - pv);
        }
      }
      out[i] = riemann_mean_values(resid, f.cell_volume(), std::pow(t, d), v);
    }
  });

  std::size_t low = 0;
  for (std::size_t c : low_counts) low += c;
  OscFieldResult res{GridFunction(f.grid(), std::move(out), f.mask()), low, mode};
  return res;
}

}  // namespace spacenorm
