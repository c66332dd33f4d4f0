#include "areabound/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace areabound {

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Violated: return "violated";
    case Verdict::NotApplicable: return "not_applicable";
  }
  return "unknown";
}

void BoundReport::finalize() {
  slack = rhs - lhs;
  for (const auto& h : hypotheses)
    if (!h.satisfied) {
      verdict = Verdict::NotApplicable;
      return;
    }
  verdict = slack >= 0 ? Verdict::Holds : Verdict::Violated;
}

namespace {

void grid_meta(BoundReport& r, const PlanarDomain& d) {
  r.grid["nx"] = d.nx();
  r.grid["ny"] = d.ny();
  r.grid["hx"] = d.hx();
  r.grid["hy"] = d.hy();
}

void solution_hypothesis(BoundReport& r, const SolutionMeta& meta) {
  if (meta.solved) {
    r.hypotheses.push_back({"solver_converged", meta.converged, meta.residual});
  }
  r.inputs["residual"] = meta.residual;
}

double sup_rhs(const GraphSurface& s, const RhsFn& rhs) {
  if (!rhs) return 0.0;
  const auto& d = s.domain();
  int m = s.codim();
  std::vector<double> z(m), p(m), q(m);
  double sup = 0;
  for (int j = 0; j < d.ny(); ++j)
    for (int i = 0; i < d.nx(); ++i) {
      if (!d.is_interior(i, j)) continue;
      for (int c = 0; c < m; ++c) {
        z[c] = s.zeta(c, i, j);
        p[c] = s.p(c, i, j);
        q[c] = s.q(c, i, j);
      }
      EvalPoint pt{d.x(i), d.y(j), z, p, q};
      for (int c = 0; c < m; ++c) sup = std::max(sup, std::abs(rhs(pt, c)));
    }
  return sup;
}

double l1_rhs(const GraphSurface& s, const RhsFn& rhs) {
  if (!rhs) return 0.0;
  const auto& d = s.domain();
  int m = s.codim();
  ScalarField f(d);
  std::vector<double> z(m), p(m), q(m);
  for (int j = 0; j < d.ny(); ++j)
    for (int i = 0; i < d.nx(); ++i) {
      if (!d.has_value(i, j)) continue;
      for (int c = 0; c < m; ++c) {
        z[c] = s.zeta(c, i, j);
        p[c] = s.p(c, i, j);
        q[c] = s.q(c, i, j);
      }
      EvalPoint pt{d.x(i), d.y(j), z, p, q};
      double acc = 0;
      for (int c = 0; c < m; ++c) acc = std::max(acc, std::abs(rhs(pt, c)));
      f.at(i, j) = acc;
    }
  return integrate(f);
}

}  // namespace

// ---- geodesic-disc bounds ----------------------------------------------------

BoundReport bound_mu_stable_disc(const GeodesicPolarChart& chart, double mu,
                                 double g0,
                                 const std::function<double(double, double)>& q) {
  BoundReport r;
  double rr = chart.radius();
  double denom = 2 * mu - (1 + g0);
  bool mu_ok = denom > 0;

  double q_min = 0;
  for (int i = 1; i <= chart.n_rho(); ++i)
    for (int k = 0; k < chart.n_phi(); ++k) {
      auto [uu, vv] = chart.ray_point(i, k);
      q_min = std::min(q_min, q(uu, vv));
    }
  bool q_ok = q_min >= -1e-12;

  r.lhs = chart.area();
  r.inputs["mu"] = mu;
  r.inputs["g0"] = g0;
  r.inputs["r"] = rr;
  r.inputs["q_min"] = q_min;
  r.grid["chart_n_rho"] = chart.n_rho();
  r.grid["chart_n_phi"] = chart.n_phi();

  if (q_ok) {
    r.bound_id = "thm2.13";
    r.rhs = mu_ok ? 2 * M_PI * mu * rr * rr / denom : 0;
    r.hypotheses.push_back({"mu > (1+g0)/2", mu_ok, mu});
    r.hypotheses.push_back({"q >= 0", true, q_min});
  } else {
    // negative part of q feeds the variant bound
    r.bound_id = "eq2.14";
    double qneg = chart.integrate(
        [&](double uu, double vv) { return std::min(q(uu, vv), 0.0); });
    r.rhs = mu_ok ? 2 * M_PI * mu * rr * rr / denom - mu * rr * rr / denom * qneg : 0;
    r.hypotheses.push_back({"mu > (1+g0)/2", mu_ok, mu});
    r.inputs["integral_q_negative_part"] = qneg;
    r.note = "q negative somewhere; variant with the negative part applied";
  }
  r.finalize();
  return r;
}

BoundReport bound_cmc(double lhs_area, double r_geo, double mu, double h0) {
  BoundReport r;
  r.bound_id = "eq2.23";
  bool mu_ok = mu > 0.5;
  r.lhs = lhs_area;
  r.rhs = mu_ok ? 2 * M_PI * mu * r_geo * r_geo / (2 * mu - 1) : 0;
  r.hypotheses.push_back({"mu > 1/2", mu_ok, mu});
  r.inputs["mu"] = mu;
  r.inputs["r"] = r_geo;
  r.inputs["h0"] = h0;
  r.finalize();
  return r;
}

BoundReport bound_outer_ball(const GraphSurface& s, const std::vector<double>& x0,
                             double rho, double m1, double m2) {
  if (rho <= 0) throw std::invalid_argument("bound_outer_ball: rho must be positive");
  const auto& d = s.domain();
  int m = s.codim();
  if (static_cast<int>(x0.size()) != m + 2)
    throw std::invalid_argument("bound_outer_ball: center dimension mismatch");

  ScalarField w = s.area_element();
  // squared ball distance at the nodes
  ScalarField dist2(d);
  for (int j = 0; j < d.ny(); ++j)
    for (int i = 0; i < d.nx(); ++i) {
      if (!d.has_value(i, j)) continue;
      double acc = (d.x(i) - x0[0]) * (d.x(i) - x0[0]) +
                   (d.y(j) - x0[1]) * (d.y(j) - x0[1]);
      for (int c = 0; c < m; ++c) {
        double dz = s.zeta(c, i, j) - x0[2 + c];
        acc += dz * dz;
      }
      dist2.at(i, j) = acc - rho * rho;
    }

  // clipped area by subcell sampling of cells with all corners valued
  double lhs = 0;
  const int SUB = 64;
  for (int j = 0; j + 1 < d.ny(); ++j)
    for (int i = 0; i + 1 < d.nx(); ++i) {
      if (!(d.has_value(i, j) && d.has_value(i + 1, j) && d.has_value(i, j + 1) &&
            d.has_value(i + 1, j + 1)))
        continue;
      double d00 = dist2(i, j), d10 = dist2(i + 1, j);
      double d01 = dist2(i, j + 1), d11 = dist2(i + 1, j + 1);
      double w00 = w(i, j), w10 = w(i + 1, j), w01 = w(i, j + 1), w11 = w(i + 1, j + 1);
      double cell = d.hx() * d.hy();
      if (d00 <= 0 && d10 <= 0 && d01 <= 0 && d11 <= 0) {
        lhs += cell * 0.25 * (w00 + w10 + w01 + w11);
        continue;
      }
      if (d00 > 0 && d10 > 0 && d01 > 0 && d11 > 0) continue;
      double acc = 0;
      int hits = 0;
      for (int b = 0; b < SUB; ++b)
        for (int a = 0; a < SUB; ++a) {
          double tx = (a + 0.5) / SUB, ty = (b + 0.5) / SUB;
          double dv = (1 - tx) * (1 - ty) * d00 + tx * (1 - ty) * d10 +
                      (1 - tx) * ty * d01 + tx * ty * d11;
          if (dv > 0) continue;
          acc += (1 - tx) * (1 - ty) * w00 + tx * (1 - ty) * w10 +
                 (1 - tx) * ty * w01 + tx * ty * w11;
          ++hits;
        }
      if (hits > 0) lhs += cell * acc / (SUB * SUB);
    }

  BoundReport r;
  r.bound_id = "eq2.25";
  r.lhs = lhs;
  bool order_ok = 0 < m1 && m1 <= m2;
  r.rhs = order_ok ? 4 * m2 * M_PI * rho * rho / m1 : 0;
  r.hypotheses.push_back({"0 < m1 <= m2", order_ok, m1});
  r.inputs["rho"] = rho;
  r.inputs["m1"] = m1;
  r.inputs["m2"] = m2;
  grid_meta(r, d);
  r.finalize();
  return r;
}

BoundReport bound_curvatura_integra(const GeodesicPolarChart& chart,
                                    const Immersion& im, double k0_const) {
  BoundReport r;
  r.bound_id = "eq2.27";
  PolarField K = im.gauss_curvature();
  double k_max = -std::numeric_limits<double>::infinity();
  for (int i = 1; i <= chart.n_rho(); ++i)
    for (int k = 0; k < chart.n_phi(); ++k) {
      auto [uu, vv] = chart.ray_point(i, k);
      k_max = std::max(k_max, im.interpolate(K, uu, vv));
    }
  bool k_ok = k_max <= k0_const + 1e-8;

  double rr = chart.radius();
  double excess = chart.integrate([&](double uu, double vv) {
    return k0_const - im.interpolate(K, uu, vv);
  });
  r.lhs = chart.area();
  r.rhs = rr * rr * (M_PI + 0.5 * excess);
  r.hypotheses.push_back({"K <= K0 on the chart", k_ok, k_max});
  r.inputs["K0"] = k0_const;
  r.inputs["r"] = rr;
  r.inputs["max_K_sampled"] = k_max;
  r.grid["chart_n_rho"] = chart.n_rho();
  r.grid["chart_n_phi"] = chart.n_phi();
  r.finalize();
  return r;
}

BoundReport bound_boundary_curvature(const Immersion& im, double k0_const, double r_geo) {
  BoundReport r;
  r.bound_id = "eq2.31";
  BoundaryCurvature bc = boundary_curvatures(im);
  double total_kappa = bc.integral_kappa();
  double area = im.area();
  bool applicable = k0_const * r_geo * r_geo < 2.0;
  if (k0_const != 0.0) r.bound_id = "eq2.30";

  r.lhs = (1.0 - 0.5 * k0_const * r_geo * r_geo) * area;
  r.rhs = 0.5 * r_geo * r_geo * total_kappa;
  r.hypotheses.push_back({"K0 r^2 < 2", applicable, k0_const * r_geo * r_geo});
  r.inputs["K0"] = k0_const;
  r.inputs["r"] = r_geo;
  r.inputs["area"] = area;
  r.inputs["integral_kappa"] = total_kappa;
  r.finalize();
  return r;
}

// ---- divergence-form graph bounds --------------------------------------------

double divergence_rhs(double area_omega, double boundary_len, double sup_z,
                      double sup_z_bdry, double sup_r, double k0, double m1) {
  return (1.0 + sup_z * sup_r / m1) * area_omega +
         sup_z_bdry * k0 / m1 * boundary_len;
}

BoundReport bound_divergence_graph(const GraphSurface& s, const SolutionMeta& meta,
                                   const RhsFn& rhs, std::optional<double> k0,
                                   double m1, bool a3_ok) {
  if (s.codim() != 1)
    throw std::invalid_argument("bound_divergence_graph: one-component graphs only");
  BoundReport r;
  r.bound_id = "eq3.8";
  const auto& d = s.domain();
  double area_omega = d.area();
  double blen = d.boundary_length();
  double sup_z = s.domain_sup(0);
  double sup_zb = s.boundary_sup(0);
  double sup_r = sup_rhs(s, rhs);
  double k0v = k0.value_or(std::numeric_limits<double>::infinity());

  r.lhs = s.area();
  r.rhs = divergence_rhs(area_omega, blen, sup_z, sup_zb, sup_r, k0v, m1);
  r.hypotheses.push_back({"(A1) k0 finite", std::isfinite(k0v), k0v});
  r.hypotheses.push_back({"(A2) m1 > 0", m1 > 0, m1});
  r.hypotheses.push_back({"(A3) zero gradient normalization", a3_ok, a3_ok ? 1.0 : 0.0});
  solution_hypothesis(r, meta);
  r.inputs["k0"] = k0v;
  r.inputs["m1"] = m1;
  r.inputs["sup_zeta"] = sup_z;
  r.inputs["sup_zeta_boundary"] = sup_zb;
  r.inputs["sup_R"] = sup_r;
  r.inputs["area_omega"] = area_omega;
  r.inputs["boundary_length"] = blen;
  // alternate rhs with the L1 norm of R
  double l1 = l1_rhs(s, rhs);
  r.inputs["rhs_l1_variant"] =
      area_omega + (sup_z * l1 + sup_zb * k0v * blen) / m1;
  grid_meta(r, d);
  r.finalize();
  return r;
}

BoundReport bound_homogeneous(const GraphSurface& s, const SolutionMeta& meta,
                              std::optional<double> k0, double m1, bool a3_ok) {
  BoundReport r = bound_divergence_graph(s, meta, nullptr, k0, m1, a3_ok);
  r.bound_id = "eq3.19";
  r.finalize();
  return r;
}

BoundReport bound_minimal_graph(const GraphSurface& s, const SolutionMeta& meta) {
  Integrand area = builtin_area();
  BoundReport r = bound_divergence_graph(s, meta, nullptr, area.certified_k0,
                                         *area.certified_m1, true);
  r.bound_id = "eq3.22";
  r.note = "certified constants of the area integrand";
  r.finalize();
  return r;
}

BoundReport bound_prescribed_H(const GraphSurface& s, const SolutionMeta& meta,
                               double h0, bool sharp) {
  if (s.codim() != 1)
    throw std::invalid_argument("bound_prescribed_H: one-component graphs only");
  BoundReport r;
  r.bound_id = sharp ? "eq3.25" : "eq3.24";
  const auto& d = s.domain();
  double sq8 = std::sqrt(8.0);
  double area_omega = d.area();
  double blen = d.boundary_length();
  double sup_z = s.domain_sup(0);
  double sup_zb = s.boundary_sup(0);

  r.lhs = s.area();
  if (sharp)
    r.rhs = (1.0 + 2.0 * h0 * sup_z) * area_omega + sup_zb * blen;
  else
    r.rhs = (1.0 + 2.0 * sq8 * h0 * sup_z) * area_omega + sq8 * sup_zb * blen;
  r.hypotheses.push_back({"h0 >= 0", h0 >= 0, h0});
  solution_hypothesis(r, meta);
  r.inputs["h0"] = h0;
  r.inputs["sup_zeta"] = sup_z;
  r.inputs["sup_zeta_boundary"] = sup_zb;
  r.inputs["area_omega"] = area_omega;
  r.inputs["boundary_length"] = blen;
  grid_meta(r, d);
  r.finalize();
  return r;
}

BoundReport bound_interior(const GraphSurface& s, const SolutionMeta& meta,
                           const RhsFn& rhs, std::optional<double> k0, double m1,
                           double nu, bool radial_ok) {
  if (s.codim() != 1)
    throw std::invalid_argument("bound_interior: one-component graphs only");
  const auto& d = s.domain();
  PlanarDomain inner = d.interior_subdomain(nu);  // throws when nu too large

  BoundReport r;
  r.bound_id = "eq3.28";
  double area_omega = d.area();
  double sup_z = s.domain_sup(0);
  double sup_r = sup_rhs(s, rhs);
  double k0v = k0.value_or(std::numeric_limits<double>::infinity());

  r.lhs = integrate_on(s.area_element(), inner);
  r.rhs = area_omega + (2 * k0v / nu + sup_r) * sup_z * area_omega / m1;
  r.hypotheses.push_back({"(A1) k0 finite", std::isfinite(k0v), k0v});
  r.hypotheses.push_back({"(A2) m1 > 0", m1 > 0, m1});
  r.hypotheses.push_back({"radial nonnegativity", radial_ok, radial_ok ? 1.0 : 0.0});
  solution_hypothesis(r, meta);
  r.inputs["nu"] = nu;
  r.inputs["k0"] = k0v;
  r.inputs["m1"] = m1;
  r.inputs["sup_zeta"] = sup_z;
  r.inputs["sup_R"] = sup_r;
  r.inputs["area_omega"] = area_omega;
  r.inputs["area_inner"] = inner.area();
  grid_meta(r, d);
  r.finalize();
  return r;
}

// ---- higher-codimension bounds -----------------------------------------------

namespace {

struct CodimNorms {
  double max_sup_bdry = 0;        // max_sigma sup |zeta_sigma| on the boundary
  double max_sup_domain = 0;      // max_sigma sup |zeta_sigma| on the closure
  double max_product_bdry = 0;    // max_sigma sup|zeta| * sup|tangential|
};

CodimNorms codim_norms(const GraphSurface& s) {
  CodimNorms n;
  for (int c = 0; c < s.codim(); ++c) {
    double zb = s.boundary_sup(c);
    double dt = s.boundary_tangential_sup(c);
    n.max_sup_bdry = std::max(n.max_sup_bdry, zb);
    n.max_sup_domain = std::max(n.max_sup_domain, s.domain_sup(c));
    n.max_product_bdry = std::max(n.max_product_bdry, zb * dt);
  }
  return n;
}

}  // namespace

BoundReport bound_fermat(const GraphSurface& s, const SolutionMeta& meta,
                         const FermatWeight& w, double h0) {
  BoundReport r;
  r.bound_id = "eq4.21";
  const auto& d = s.domain();
  int m = s.codim();
  CodimNorms n = codim_norms(s);
  double area_omega = d.area();
  double blen = d.boundary_length();

  double lambda = 1.0;
  if (m >= 2 && w.gamma2 > 0)
    lambda = 1.0 - std::sqrt(2.0) * m * m * w.gamma2 * n.max_sup_domain / w.gamma0;
  bool smallness = lambda > 0;
  bool gamma_ok = w.gamma0 > 0 && w.gamma0 <= w.gamma1;

  r.lhs = lambda * s.area();
  r.rhs = area_omega + m * blen * n.max_sup_bdry +
          2.0 * m * h0 * area_omega * n.max_sup_domain;
  if (m >= 2) r.rhs += static_cast<double>(m) * m * blen * n.max_product_bdry;

  r.hypotheses.push_back({"0 < Gamma0 <= Gamma1", gamma_ok, w.gamma0});
  r.hypotheses.push_back({"Lambda > 0", smallness, lambda});
  solution_hypothesis(r, meta);
  r.inputs["lambda"] = lambda;
  r.inputs["h0"] = h0;
  r.inputs["gamma0"] = w.gamma0;
  r.inputs["gamma1"] = w.gamma1;
  r.inputs["gamma2"] = w.gamma2;
  r.inputs["n"] = m + 2;
  r.inputs["max_sup_boundary"] = n.max_sup_bdry;
  r.inputs["max_sup_domain"] = n.max_sup_domain;
  r.inputs["max_product_boundary"] = n.max_product_bdry;
  r.inputs["area_omega"] = area_omega;
  r.inputs["boundary_length"] = blen;
  grid_meta(r, d);
  r.finalize();
  return r;
}

BoundReport bound_minimal_system(const GraphSurface& s, const SolutionMeta& meta) {
  BoundReport r;
  r.bound_id = "eq4.38";
  const auto& d = s.domain();
  int m = s.codim();
  CodimNorms n = codim_norms(s);
  double area_omega = d.area();
  double blen = d.boundary_length();

  r.lhs = s.area();
  r.rhs = area_omega + m * blen * n.max_sup_bdry;
  if (m >= 2) r.rhs += static_cast<double>(m) * m * blen * n.max_product_bdry;
  solution_hypothesis(r, meta);
  r.inputs["n"] = m + 2;
  r.inputs["max_sup_boundary"] = n.max_sup_bdry;
  r.inputs["max_product_boundary"] = n.max_product_bdry;
  r.inputs["area_omega"] = area_omega;
  r.inputs["boundary_length"] = blen;
  grid_meta(r, d);
  r.finalize();
  return r;
}

}  // namespace areabound
