#include "areabound/stability.hpp"

#include <Eigen/Sparse>
#include <cmath>
#include <stdexcept>

namespace areabound {

namespace {

// Sparse first-derivative operators in (u,v) over the polar grid, columns
// restricted to the test-function dofs (interior rows; the center counts
// once). References to boundary-row nodes drop out (phi = 0 there).
struct DerivativeOps {
  Eigen::SparseMatrix<double> Du, Dv;
  std::vector<int> dof;  // node -> dof, -1 for boundary row
  int n_dof = 0;

  explicit DerivativeOps(const Immersion& im) {
    int nr = im.nr(), nphi = im.nphi();
    int n_nodes = nr * nphi;
    dof.assign(n_nodes, -1);
    for (int j = 0; j < nphi; ++j) dof[im.index(0, j)] = 0;  // shared center dof
    n_dof = 1;
    for (int i = 1; i < nr - 1; ++i)
      for (int j = 0; j < nphi; ++j) dof[im.index(i, j)] = n_dof++;

    double dr = im.drho(), dp = im.dphi();
    std::vector<Eigen::Triplet<double>> tu, tv;

    // stencil of d/drho per row (see Immersion::d_rho)
    auto rho_stencil = [&](int i, std::vector<std::pair<int, double>>& st) {
      st.clear();
      int n = nr;
      if (i <= n - 3) {
        st = {{i + 2, -1.0}, {i + 1, 8.0}, {i - 1, -8.0}, {i - 2, 1.0}};
        for (auto& e : st) e.second /= 12 * dr;
      } else if (i == n - 2) {
        st = {{n - 1, 3.0}, {n - 2, 10.0}, {n - 3, -18.0}, {n - 4, 6.0}, {n - 5, -1.0}};
        for (auto& e : st) e.second /= 12 * dr;
      } else {
        st = {{n - 1, 25.0}, {n - 2, -48.0}, {n - 3, 36.0}, {n - 4, -16.0}, {n - 5, 3.0}};
        for (auto& e : st) e.second /= 12 * dr;
      }
    };

    std::vector<std::pair<int, double>> st;
    for (int i = 0; i < nr; ++i)
      for (int j = 0; j < nphi; ++j) {
        int row = im.index(i, j);
        double c = std::cos(im.phi(j)), s = std::sin(im.phi(j));

        // f_rho contribution
        double cu, cv;
        if (i == 0) {
          // center: f_u = f_rho along ray 0, f_v along ray nphi/4
          rho_stencil(0, st);
          for (auto [ii, coef] : st) {
            int node_u = im.index(std::abs(ii), ii >= 0 ? 0 : nphi / 2);
            int node_v = im.index(std::abs(ii), (ii >= 0 ? nphi / 4 : nphi / 4 + nphi / 2) % nphi);
            if (dof[node_u] >= 0) tu.emplace_back(row, dof[node_u], coef);
            if (dof[node_v] >= 0) tv.emplace_back(row, dof[node_v], coef);
          }
          continue;
        }
        rho_stencil(i, st);
        cu = c;
        cv = s;
        for (auto [ii, coef] : st) {
          int jj = ii >= 0 ? j : (j + nphi / 2) % nphi;
          int node = im.index(std::abs(ii), jj);
          if (dof[node] < 0) continue;
          tu.emplace_back(row, dof[node], cu * coef);
          tv.emplace_back(row, dof[node], cv * coef);
        }
        // f_phi contribution: fourth-order periodic
        double inv_r = 1.0 / im.rho(i);
        const int off[4] = {2, 1, -1, -2};
        const double cf[4] = {-1.0, 8.0, -8.0, 1.0};
        for (int t = 0; t < 4; ++t) {
          int node = im.index(i, ((j + off[t]) % nphi + nphi) % nphi);
          if (dof[node] < 0) continue;
          double coef = cf[t] / (12 * dp);
          tu.emplace_back(row, dof[node], -s * inv_r * coef);
          tv.emplace_back(row, dof[node], c * inv_r * coef);
        }
      }

    Du.resize(n_nodes, n_dof);
    Dv.resize(n_nodes, n_dof);
    Du.setFromTriplets(tu.begin(), tu.end());
    Dv.setFromTriplets(tv.begin(), tv.end());
  }
};

}  // namespace

std::optional<double> mu_stability_estimate(
    const Immersion& im, const WeightMatrix& w,
    const std::function<double(double, double)>& q) {
  int nr = im.nr(), nphi = im.nphi();
  PolarField K = im.gauss_curvature();

  PolarField qf{nr, nphi, std::vector<double>(nr * nphi)};
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nphi; ++j) {
      qf.at(i, j) = q(im.u(i, j), im.v(i, j));
      if (qf(i, j) - K(i, j) < -1e-8)
        throw std::invalid_argument("mu_stability_estimate: q - K < 0 at a node");
    }

  WeightedMetric wm = weighted_metric(im, w);
  DerivativeOps ops(im);
  int nd = ops.n_dof;

  // numerator form: sum_nodes wq * W * (g^11 du^2 + 2 g^12 du dv + g^22 dv^2)
  Eigen::VectorXd m11(nr * nphi), m12(nr * nphi), m22(nr * nphi), bdiag_node(nr * nphi);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nphi; ++j) {
      int id = im.index(i, j);
      double wq = im.node_weight(i, j);
      double W = im.W(i, j);
      double E = wm.e(i, j), F = wm.f(i, j), G = wm.g(i, j);
      double det = E * G - F * F;
      m11[id] = wq * W * G / det;
      m12[id] = wq * W * (-F) / det;
      m22[id] = wq * W * E / det;
      bdiag_node[id] = wq * W * (qf(i, j) - K(i, j));
    }

  Eigen::SparseMatrix<double> SA =
      Eigen::SparseMatrix<double>(ops.Du.transpose() * m11.asDiagonal() * ops.Du) +
      Eigen::SparseMatrix<double>(ops.Du.transpose() * m12.asDiagonal() * ops.Dv) +
      Eigen::SparseMatrix<double>(ops.Dv.transpose() * m12.asDiagonal() * ops.Du) +
      Eigen::SparseMatrix<double>(ops.Dv.transpose() * m22.asDiagonal() * ops.Dv);

  Eigen::VectorXd bdiag = Eigen::VectorXd::Zero(nd);
  double scale = 0;
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nphi; ++j) {
      int id = im.index(i, j);
      scale = std::max(scale, std::abs(im.node_weight(i, j) * im.W(i, j)));
      int dd = ops.dof[id];
      if (dd >= 0) bdiag[dd] += bdiag_node[id];
    }
  double bnorm = bdiag.cwiseAbs().maxCoeff();
  if (bnorm <= 1e-14 * std::max(scale, 1.0)) return std::nullopt;

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  ldlt.compute(SA);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("mu_stability_estimate: energy form factorization failed");

  // power iteration for the largest eigenvalue of SA^{-1} SB
  Eigen::VectorXd v = Eigen::VectorXd::Ones(nd);
  double lambda = 0;
  for (int it = 0; it < 500; ++it) {
    Eigen::VectorXd nv = ldlt.solve(bdiag.asDiagonal() * v);
    double nrm = nv.norm();
    if (nrm == 0) return std::nullopt;
    nv /= nrm;
    double new_lambda = nv.dot(bdiag.asDiagonal() * nv) / nv.dot(SA * nv);
    bool done = std::abs(new_lambda - lambda) <= 1e-12 * std::abs(new_lambda) + 1e-16;
    lambda = new_lambda;
    v = nv;
    if (done) break;
  }
  if (lambda <= 0) return std::nullopt;
  return 1.0 / lambda;
}

}  // namespace areabound
