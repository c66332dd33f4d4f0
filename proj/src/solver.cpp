#include "areabound/solver.hpp"

#include <Eigen/Sparse>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace areabound {

namespace {

struct NodeBuffers {
  std::vector<double> z, p, q;
  explicit NodeBuffers(int m) : z(m), p(m), q(m) {}
  EvalPoint pt(double x, double y) const {
    EvalPoint e;
    e.x = x;
    e.y = y;
    e.z = std::span<const double>(z);
    e.p = std::span<const double>(p);
    e.q = std::span<const double>(q);
    return e;
  }
};

void gather(const GraphSurface& s, int i, int j, NodeBuffers& b) {
  for (int c = 0; c < s.codim(); ++c) {
    b.z[c] = s.zeta(c, i, j);
    b.p[c] = s.p(c, i, j);
    b.q[c] = s.q(c, i, j);
  }
}

struct FluxTable {
  VectorField fp, fq, fz;
  FluxTable(const PlanarDomain& d, int m) : fp(d, m), fq(d, m), fz(d, m) {}
};

void eval_fluxes(const GraphSurface& s, const Integrand& f, FluxTable& t) {
  const auto& d = s.domain();
  int m = s.codim();
  NodeBuffers b(m);
  std::vector<double> fp(m), fq(m), fz(m);
  for (int j = 0; j < d.ny(); ++j)
    for (int i = 0; i < d.nx(); ++i) {
      if (!d.has_value(i, j)) continue;
      gather(s, i, j, b);
      f.gradient(b.pt(d.x(i), d.y(j)), fp, fq, fz);
      int id = d.index(i, j);
      for (int c = 0; c < m; ++c) {
        t.fp.comps[c][id] = fp[c];
        t.fq.comps[c][id] = fq[c];
        t.fz.comps[c][id] = fz[c];
      }
    }
}

}  // namespace

VectorField el_residual(const GraphSurface& s, const Integrand& f,
                        const RhsFn& rhs) {
  const auto& d = s.domain();
  if (f.codim != s.codim())
    throw std::invalid_argument("el_residual: integrand/surface codimension mismatch");
  int m = s.codim();
  FluxTable t(d, m);
  eval_fluxes(s, f, t);

  VectorField r(d, m);
  NodeBuffers b(m);
  double ihx = 0.5 / d.hx(), ihy = 0.5 / d.hy();
  for (int j = 0; j < d.ny(); ++j)
    for (int i = 0; i < d.nx(); ++i) {
      if (!d.is_interior(i, j)) continue;
      int id = d.index(i, j);
      int xe = d.index(i + 1, j), xw = d.index(i - 1, j);
      int yn = d.index(i, j + 1), ys = d.index(i, j - 1);
      if (rhs) gather(s, i, j, b);
      for (int c = 0; c < m; ++c) {
        double div = (t.fp.comps[c][xe] - t.fp.comps[c][xw]) * ihx +
                     (t.fq.comps[c][yn] - t.fq.comps[c][ys]) * ihy;
        double rv = rhs ? rhs(b.pt(d.x(i), d.y(j)), c) : 0.0;
        r.comps[c][id] = div - t.fz.comps[c][id] - rv;
      }
    }
  return r;
}

double residual_sup(const VectorField& r) {
  const auto& d = r.domain;
  double m = 0;
  for (int j = 0; j < d.ny(); ++j)
    for (int i = 0; i < d.nx(); ++i)
      if (d.is_interior(i, j))
        for (const auto& c : r.comps)
          m = std::max(m, std::abs(c[d.index(i, j)]));
  return m;
}

double discrete_energy(const GraphSurface& s, const Integrand& f,
                       const RhsFn& rhs) {
  const auto& d = s.domain();
  const auto& w = d.node_weights();
  int m = s.codim();
  NodeBuffers b(m);
  double e = 0;
  for (int j = 0; j < d.ny(); ++j)
    for (int i = 0; i < d.nx(); ++i) {
      int id = d.index(i, j);
      if (w[id] == 0.0 || !d.has_value(i, j)) continue;
      gather(s, i, j, b);
      EvalPoint pt = b.pt(d.x(i), d.y(j));
      double v = f.value(pt);
      if (rhs)
        for (int c = 0; c < m; ++c) v += rhs(pt, c) * b.z[c];
      e += w[id] * v;
    }
  return e;
}

GraphSurface harmonic_extension(const PlanarDomain& d,
                                const std::vector<BoundaryFn>& phi) {
  int m = static_cast<int>(phi.size());
  if (m < 1) throw std::invalid_argument("harmonic_extension: need boundary data");
  // interior unknown numbering
  std::vector<int> dof(d.nx() * d.ny(), -1);
  int n_int = 0;
  for (int j = 0; j < d.ny(); ++j)
    for (int i = 0; i < d.nx(); ++i)
      if (d.is_interior(i, j)) dof[d.index(i, j)] = n_int++;

  double cx = 1.0 / (d.hx() * d.hx()), cy = 1.0 / (d.hy() * d.hy());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(5 * n_int);
  for (int j = 0; j < d.ny(); ++j)
    for (int i = 0; i < d.nx(); ++i) {
      int k = dof[d.index(i, j)];
      if (k < 0) continue;
      trip.emplace_back(k, k, 2 * cx + 2 * cy);
      auto add = [&](int ii, int jj, double c) {
        int kk = dof[d.index(ii, jj)];
        if (kk >= 0) trip.emplace_back(k, kk, -c);
      };
      add(i + 1, j, cx);
      add(i - 1, j, cx);
      add(i, j + 1, cy);
      add(i, j - 1, cy);
    }
  Eigen::SparseMatrix<double> A(n_int, n_int);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("harmonic_extension: factorization failed");

  VectorField z(d, m);
  for (int c = 0; c < m; ++c) {
    // boundary values at the grid nodes
    for (const auto& b : d.boundary())
      z.comps[c][d.index(b.i, b.j)] = phi[c](d.x(b.i), d.y(b.j));
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_int);
    for (int j = 0; j < d.ny(); ++j)
      for (int i = 0; i < d.nx(); ++i) {
        int k = dof[d.index(i, j)];
        if (k < 0) continue;
        auto bc = [&](int ii, int jj, double cc) {
          if (!d.is_interior(ii, jj))
            rhs[k] += cc * z.comps[c][d.index(ii, jj)];
        };
        bc(i + 1, j, cx);
        bc(i - 1, j, cx);
        bc(i, j + 1, cy);
        bc(i, j - 1, cy);
      }
    Eigen::VectorXd sol = lu.solve(rhs);
    for (int j = 0; j < d.ny(); ++j)
      for (int i = 0; i < d.nx(); ++i) {
        int k = dof[d.index(i, j)];
        if (k >= 0) z.comps[c][d.index(i, j)] = sol[k];
      }
  }
  return GraphSurface(d, std::move(z));
}

namespace {

// Sparse Jacobian of the strong residual by finite differences over a
// greedy distance-2 coloring of the exact dependency pattern.
class JacobianAssembler {
 public:
  JacobianAssembler(const PlanarDomain& d, const StencilSet& st, int m,
                    const std::vector<int>& dof, int n_unknowns)
      : d_(d), m_(m), dof_(dof), n_(n_unknowns), n_colors_(0) {
    build_pattern(st);
    color();
  }

  int colors() const { return n_colors_; }

  template <class EvalG>
  void assemble(const std::vector<double>& base_g, std::vector<double>& unknowns,
                EvalG&& eval_g, Eigen::SparseMatrix<double>& J) {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(row_cols_.size() > 0 ? row_cols_[0].size() * n_ : 64);
    std::vector<double> gp(base_g.size());
    std::vector<double> delta(n_, 0.0);
    for (int col_color = 0; col_color < n_colors_; ++col_color) {
      bool any = false;
      for (int c : color_members_[col_color]) {
        delta[c] = 1e-6 * (1.0 + std::abs(unknowns[c]));
        unknowns[c] += delta[c];
        any = true;
      }
      if (!any) continue;
      eval_g(unknowns, gp);
      for (int c : color_members_[col_color]) {
        for (int r : col_rows_[c])
          trip.emplace_back(r, c, (gp[r] - base_g[r]) / delta[c]);
        unknowns[c] -= delta[c];
        delta[c] = 0.0;
      }
    }
    J.resize(n_, n_);
    J.setFromTriplets(trip.begin(), trip.end());
  }

 private:
  const PlanarDomain& d_;
  int m_;
  const std::vector<int>& dof_;
  int n_, n_colors_ = 0;
  std::vector<std::vector<int>> row_cols_, col_rows_, color_members_;

  void build_pattern(const StencilSet& st) {
    row_cols_.assign(n_, {});
    col_rows_.assign(n_, {});
    auto stencil_nodes = [&](int i, int j, std::vector<int>& nodes) {
      int id = d_.index(i, j);
      nodes.push_back(id);  // z dependence
      const auto& ex = st.dx[id];
      for (int k = 0; k < ex.npts; ++k) nodes.push_back(d_.index(i + ex.offset[k], j));
      const auto& ey = st.dy[id];
      for (int k = 0; k < ey.npts; ++k) nodes.push_back(d_.index(i, j + ey.offset[k]));
    };
    std::vector<int> nodes;
    for (int j = 0; j < d_.ny(); ++j)
      for (int i = 0; i < d_.nx(); ++i) {
        if (!d_.is_interior(i, j)) continue;
        nodes.clear();
        stencil_nodes(i, j, nodes);
        stencil_nodes(i + 1, j, nodes);
        stencil_nodes(i - 1, j, nodes);
        stencil_nodes(i, j + 1, nodes);
        stencil_nodes(i, j - 1, nodes);
        std::sort(nodes.begin(), nodes.end());
        nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
        for (int rc = 0; rc < m_; ++rc) {
          int row = rc * (n_ / m_) + dof_[d_.index(i, j)];
          for (int node : nodes) {
            int base = dof_[node];
            if (base < 0) continue;
            for (int cc = 0; cc < m_; ++cc) {
              int col = cc * (n_ / m_) + base;
              row_cols_[row].push_back(col);
              col_rows_[col].push_back(row);
            }
          }
        }
      }
  }

  void color() {
    std::vector<int> color(n_, -1);
    std::vector<int> mark(n_, -1);
    int max_color = -1;
    for (int c = 0; c < n_; ++c) {
      for (int r : col_rows_[c])
        for (int c2 : row_cols_[r])
          if (color[c2] >= 0) mark[color[c2]] = c;
      int pick = 0;
      while (pick <= max_color && mark[pick] == c) ++pick;
      color[c] = pick;
      max_color = std::max(max_color, pick);
    }
    n_colors_ = max_color + 1;
    color_members_.assign(n_colors_, {});
    for (int c = 0; c < n_; ++c) color_members_[color[c]].push_back(c);
  }
};

class SolveEngine {
 public:
  SolveEngine(const PlanarDomain& d, const Integrand& f, const RhsFn& rhs,
              const std::vector<BoundaryFn>& phi, const SolveConfig& cfg)
      : d_(d), f_(f), rhs_(rhs), phi_(phi), cfg_(cfg), m_(f.codim) {
    if (static_cast<int>(phi.size()) != m_)
      throw std::invalid_argument("solve: boundary data count != codimension");
    dof_.assign(d.nx() * d.ny(), -1);
    n_int_ = 0;
    for (int j = 0; j < d.ny(); ++j)
      for (int i = 0; i < d.nx(); ++i)
        if (d.is_interior(i, j)) dof_[d.index(i, j)] = n_int_++;
    n_ = n_int_ * m_;
    interior_nodes_.reserve(n_int_);
    for (int j = 0; j < d.ny(); ++j)
      for (int i = 0; i < d.nx(); ++i)
        if (d.is_interior(i, j)) interior_nodes_.push_back(d.index(i, j));
  }

  SolveResult run() {
    std::vector<double> u(n_, 0.0);
    if (cfg_.initial_guess == SolveConfig::InitialGuess::HarmonicExtension) {
      GraphSurface init = harmonic_extension(d_, phi_);
      pack(init, u);
    }
    if (cfg_.method == SolveConfig::Method::GradientFlow) return gradient_flow(u);
    return damped_newton(u);
  }

 private:
  const PlanarDomain& d_;
  const Integrand& f_;
  const RhsFn& rhs_;
  const std::vector<BoundaryFn>& phi_;
  SolveConfig cfg_;
  int m_, n_int_ = 0, n_ = 0;
  std::vector<int> dof_;
  std::vector<int> interior_nodes_;

  void pack(const GraphSurface& s, std::vector<double>& u) const {
    for (int c = 0; c < m_; ++c)
      for (int k = 0; k < n_int_; ++k)
        u[c * n_int_ + k] = s.zeta_field().comps[c][interior_nodes_[k]];
  }

  GraphSurface unpack(const std::vector<double>& u) const {
    VectorField z(d_, m_);
    for (int c = 0; c < m_; ++c) {
      for (const auto& b : d_.boundary())
        z.comps[c][d_.index(b.i, b.j)] = phi_[c](d_.x(b.i), d_.y(b.j));
      for (int k = 0; k < n_int_; ++k)
        z.comps[c][interior_nodes_[k]] = u[c * n_int_ + k];
    }
    return GraphSurface(d_, std::move(z));
  }

  void eval_g(const std::vector<double>& u, std::vector<double>& g) const {
    GraphSurface s = unpack(u);
    VectorField r = el_residual(s, f_, rhs_);
    for (int c = 0; c < m_; ++c)
      for (int k = 0; k < n_int_; ++k)
        g[c * n_int_ + k] = r.comps[c][interior_nodes_[k]];
  }

  static double sup(const std::vector<double>& g) {
    double m = 0;
    for (double v : g) m = std::max(m, std::abs(v));
    return m;
  }
  static double norm2(const std::vector<double>& g) {
    double s = 0;
    for (double v : g) s += v * v;
    return std::sqrt(s);
  }

  SolveResult finish(const std::vector<double>& u, double res, int iters,
                     bool converged, std::vector<double> energy) const {
    SolveResult out{unpack(u), res, iters, converged, std::move(energy)};
    return out;
  }

  SolveResult damped_newton(std::vector<double>& u) {
    auto stencils = StencilSet::for_domain(d_);
    JacobianAssembler jac(d_, *stencils, m_, dof_, n_);
    std::vector<double> g(n_), g_try(n_);
    std::vector<double> energy;
    eval_g(u, g);
    double res = sup(g);
    if (cfg_.record_energy) energy.push_back(discrete_energy(unpack(u), f_, rhs_));
    Eigen::SparseMatrix<double> J;
    auto evaluator = [this](std::vector<double>& uu, std::vector<double>& gg) {
      eval_g(uu, gg);
    };

    int it = 0;
    for (; it < cfg_.max_iterations && res > cfg_.tolerance; ++it) {
      jac.assemble(g, u, evaluator, J);
      Eigen::Map<const Eigen::VectorXd> gv(g.data(), n_);
      Eigen::VectorXd step;
      bool have_step = false;
      double lambda = cfg_.levenberg0;
      for (int attempt = 0; attempt < 8 && !have_step; ++attempt) {
        Eigen::SparseMatrix<double> Jreg = J;
        if (attempt > 0) {
          Eigen::SparseMatrix<double> I(n_, n_);
          I.setIdentity();
          Jreg = J + lambda * I;
          lambda *= 100;
        }
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(Jreg);
        if (lu.info() == Eigen::Success) {
          step = lu.solve(-gv);
          if (lu.info() == Eigen::Success && step.allFinite()) have_step = true;
        }
      }
      if (!have_step) {
        // fall back to one explicit descent step on the residual flow
        if (!flow_step(u, g, res)) break;
        if (cfg_.record_energy)
          energy.push_back(discrete_energy(unpack(u), f_, rhs_));
        continue;
      }
      // backtracking on the residual norm
      double tau = 1.0;
      double base = norm2(g);
      bool accepted = false;
      std::vector<double> u_try(n_);
      for (int bt = 0; bt <= cfg_.max_backtracks; ++bt) {
        for (int k = 0; k < n_; ++k) u_try[k] = u[k] + tau * step[k];
        eval_g(u_try, g_try);
        if (norm2(g_try) < base * (1.0 - 1e-4 * tau) || sup(g_try) <= cfg_.tolerance) {
          u.swap(u_try);
          g.swap(g_try);
          res = sup(g);
          accepted = true;
          break;
        }
        tau *= 0.5;
      }
      if (!accepted) {
        if (!flow_step(u, g, res)) break;
      }
      if (cfg_.record_energy)
        energy.push_back(discrete_energy(unpack(u), f_, rhs_));
    }
    return finish(u, res, it, res <= cfg_.tolerance, std::move(energy));
  }

  // one accepted explicit step along the residual direction; returns false
  // when no admissible step length remains
  bool flow_step(std::vector<double>& u, std::vector<double>& g, double& res) {
    double h2 = std::min(d_.hx(), d_.hy());
    double tau = 0.25 * h2 * h2;
    double base = norm2(g);
    std::vector<double> u_try(n_), g_try(n_);
    for (int bt = 0; bt <= cfg_.max_backtracks + 8; ++bt) {
      for (int k = 0; k < n_; ++k) u_try[k] = u[k] + tau * g[k];
      eval_g(u_try, g_try);
      if (norm2(g_try) < base) {
        u.swap(u_try);
        g.swap(g_try);
        res = sup(g);
        return true;
      }
      tau *= 0.5;
    }
    return false;
  }

  // Exact gradient of the discrete energy w.r.t. the interior unknowns,
  // assembled through the stencil adjoints. The descent direction keeps the
  // recorded energy monotone; the strong residual only gates convergence.
  void energy_gradient(const GraphSurface& s, std::vector<double>& grad) const {
    std::fill(grad.begin(), grad.end(), 0.0);
    const auto& w = d_.node_weights();
    const StencilSet& st = s.stencils();
    int m = m_;
    NodeBuffers b(m);
    std::vector<double> fp(m), fq(m), fz(m);
    for (int j = 0; j < d_.ny(); ++j)
      for (int i = 0; i < d_.nx(); ++i) {
        int id = d_.index(i, j);
        if (w[id] == 0.0 || !d_.has_value(i, j)) continue;
        gather(s, i, j, b);
        EvalPoint pt = b.pt(d_.x(i), d_.y(j));
        f_.gradient(pt, fp, fq, fz);
        for (int c = 0; c < m; ++c) {
          int dk = dof_[id];
          if (dk >= 0) {
            double extra = fz[c] + (rhs_ ? rhs_(pt, c) : 0.0);
            grad[c * n_int_ + dk] += w[id] * extra;
          }
          const auto& ex = st.dx[id];
          for (int k = 0; k < ex.npts; ++k) {
            int nk = dof_[d_.index(i + ex.offset[k], j)];
            if (nk >= 0) grad[c * n_int_ + nk] += w[id] * fp[c] * ex.coeff[k];
          }
          const auto& ey = st.dy[id];
          for (int k = 0; k < ey.npts; ++k) {
            int nk = dof_[d_.index(i, j + ey.offset[k])];
            if (nk >= 0) grad[c * n_int_ + nk] += w[id] * fq[c] * ey.coeff[k];
          }
        }
      }
  }

  SolveResult gradient_flow(std::vector<double>& u) {
    std::vector<double> g(n_), u_try(n_), dir(n_);
    std::vector<double> energy;
    eval_g(u, g);
    double res = sup(g);
    double J_cur = discrete_energy(unpack(u), f_, rhs_);
    if (cfg_.record_energy) energy.push_back(J_cur);
    double cell = d_.hx() * d_.hy();
    double h2 = std::min(d_.hx(), d_.hy());
    double tau = 0.25 * h2 * h2;

    int it = 0;
    for (; it < cfg_.max_iterations && res > cfg_.tolerance; ++it) {
      energy_gradient(unpack(u), dir);
      double slope = 0;
      for (int k = 0; k < n_; ++k) {
        dir[k] = -dir[k] / cell;  // PDE scaling of the descent direction
        slope += dir[k] * dir[k];
      }
      slope *= cell;  // = <grad J, dir> magnitude
      if (slope == 0) break;
      bool accepted = false;
      for (int bt = 0; bt <= cfg_.max_backtracks + 8; ++bt) {
        for (int k = 0; k < n_; ++k) u_try[k] = u[k] + tau * dir[k];
        double J_try = discrete_energy(unpack(u_try), f_, rhs_);
        if (J_try <= J_cur - 1e-4 * tau * slope) {
          u.swap(u_try);
          J_cur = J_try;
          accepted = true;
          tau *= 1.25;
          break;
        }
        tau *= 0.5;
      }
      if (!accepted) break;
      eval_g(u, g);
      res = sup(g);
      if (cfg_.record_energy) energy.push_back(J_cur);
    }
    return finish(u, res, it, res <= cfg_.tolerance, std::move(energy));
  }
};

}  // namespace

SolveResult solve_system(const PlanarDomain& d, const Integrand& f,
                         const RhsFn& rhs, const std::vector<BoundaryFn>& phi,
                         const SolveConfig& cfg) {
  SolveEngine engine(d, f, rhs, phi, cfg);
  return engine.run();
}

SolveResult solve_dirichlet(const PlanarDomain& d, const Integrand& f,
                            const RhsFn& rhs, const BoundaryFn& phi,
                            const SolveConfig& cfg) {
  if (f.codim != 1)
    throw std::invalid_argument("solve_dirichlet: one-component integrand expected");
  std::vector<BoundaryFn> data{phi};
  return solve_system(d, f, rhs, data, cfg);
}

SolveResult solve_minimal_system(const PlanarDomain& d, int m,
                                 const std::vector<BoundaryFn>& phi,
                                 const SolveConfig& cfg) {
  return solve_system(d, builtin_area_nd(m), nullptr, phi, cfg);
}

SolveResult solve_fermat(const PlanarDomain& d, int m, const FermatWeight& w,
                         const std::vector<BoundaryFn>& phi,
                         const SolveConfig& cfg) {
  for (int j = 0; j < d.ny(); ++j)
    for (int i = 0; i < d.nx(); ++i)
      if (d.has_value(i, j) && w(d.x(i), d.y(j)) <= 0)
        throw std::invalid_argument("solve_fermat: Gamma <= 0 sampled on the domain");
  return solve_system(d, builtin_fermat(w, m), nullptr, phi, cfg);
}

}  // namespace areabound
