#include "areabound/geodesic.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace areabound {

namespace {

// Christoffel symbols of the first fundamental form, per node, from the
// differenced metric coefficient fields.
struct ChristoffelField {
  PolarField g111, g211, g112, g212, g122, g222;

  explicit ChristoffelField(const Immersion& im) {
    int nr = im.nr(), nphi = im.nphi();
    PolarField E{nr, nphi, std::vector<double>(nr * nphi)};
    PolarField F{nr, nphi, std::vector<double>(nr * nphi)};
    PolarField G{nr, nphi, std::vector<double>(nr * nphi)};
    for (int i = 0; i < nr; ++i)
      for (int j = 0; j < nphi; ++j) {
        E.at(i, j) = im.E(i, j);
        F.at(i, j) = im.F(i, j);
        G.at(i, j) = im.G(i, j);
      }
    PolarField Eu, Ev, Fu, Fv, Gu, Gv;
    im.d_uv(E, Eu, Ev);
    im.d_uv(F, Fu, Fv);
    im.d_uv(G, Gu, Gv);

    auto alloc = [&]() { return PolarField{nr, nphi, std::vector<double>(nr * nphi)}; };
    g111 = alloc();
    g211 = alloc();
    g112 = alloc();
    g212 = alloc();
    g122 = alloc();
    g222 = alloc();
    for (int i = 0; i < nr; ++i)
      for (int j = 0; j < nphi; ++j) {
        double e = E(i, j), f = F(i, j), g = G(i, j);
        double det2 = 2.0 * (e * g - f * f);
        g111.at(i, j) = (g * Eu(i, j) - 2 * f * Fu(i, j) + f * Ev(i, j)) / det2;
        g211.at(i, j) = (2 * e * Fu(i, j) - e * Ev(i, j) - f * Eu(i, j)) / det2;
        g112.at(i, j) = (g * Ev(i, j) - f * Gu(i, j)) / det2;
        g212.at(i, j) = (e * Gu(i, j) - f * Ev(i, j)) / det2;
        g122.at(i, j) = (2 * g * Fv(i, j) - g * Gu(i, j) - f * Gv(i, j)) / det2;
        g222.at(i, j) = (e * Gv(i, j) - 2 * f * Fv(i, j) + f * Gu(i, j)) / det2;
      }
  }
};

struct RayState {
  double u, v, du, dv;
};

}  // namespace

GeodesicPolarChart::GeodesicPolarChart(const Immersion& im, double cu, double cv,
                                       double radius, int n_rho, int n_phi)
    : r_(radius), n_rho_(n_rho), n_phi_(n_phi) {
  if (radius <= 0) throw std::invalid_argument("geodesic chart: radius must be positive");
  if (n_rho < 8 || n_phi < 16)
    throw std::invalid_argument("geodesic chart: resolution too small");
  if (std::hypot(cu, cv) >= 1.0)
    throw std::invalid_argument("geodesic chart: center outside the parameter disc");

  ChristoffelField ch(im);
  auto rhs = [&](const RayState& s) -> RayState {
    double g111 = im.interpolate(ch.g111, s.u, s.v);
    double g211 = im.interpolate(ch.g211, s.u, s.v);
    double g112 = im.interpolate(ch.g112, s.u, s.v);
    double g212 = im.interpolate(ch.g212, s.u, s.v);
    double g122 = im.interpolate(ch.g122, s.u, s.v);
    double g222 = im.interpolate(ch.g222, s.u, s.v);
    RayState d;
    d.u = s.du;
    d.v = s.dv;
    d.du = -(g111 * s.du * s.du + 2 * g112 * s.du * s.dv + g122 * s.dv * s.dv);
    d.dv = -(g211 * s.du * s.du + 2 * g212 * s.du * s.dv + g222 * s.dv * s.dv);
    return d;
  };

  // orthonormal frame at the center w.r.t. the metric
  double E0, F0, G0;
  {
    PolarField Ef{im.nr(), im.nphi(), std::vector<double>(im.nr() * im.nphi())};
    for (int i = 0; i < im.nr(); ++i)
      for (int j = 0; j < im.nphi(); ++j) Ef.at(i, j) = im.E(i, j);
    E0 = im.interpolate(Ef, cu, cv);
    for (int i = 0; i < im.nr(); ++i)
      for (int j = 0; j < im.nphi(); ++j) Ef.at(i, j) = im.F(i, j);
    F0 = im.interpolate(Ef, cu, cv);
    for (int i = 0; i < im.nr(); ++i)
      for (int j = 0; j < im.nphi(); ++j) Ef.at(i, j) = im.G(i, j);
    G0 = im.interpolate(Ef, cu, cv);
  }
  double e1u = 1.0 / std::sqrt(E0), e1v = 0.0;
  double tu = -F0 / E0, tv = 1.0;
  double tnorm = std::sqrt(E0 * tu * tu + 2 * F0 * tu * tv + G0 * tv * tv);
  double e2u = tu / tnorm, e2v = tv / tnorm;

  ray_u_.assign((n_rho_ + 1) * n_phi_, cu);
  ray_v_.assign((n_rho_ + 1) * n_phi_, cv);
  double h = r_ / n_rho_;
  const int substeps = 2;
  for (int k = 0; k < n_phi_; ++k) {
    double ang = 2 * M_PI * k / n_phi_;
    RayState s{cu, cv, std::cos(ang) * e1u + std::sin(ang) * e2u,
               std::cos(ang) * e1v + std::sin(ang) * e2v};
    for (int i = 1; i <= n_rho_; ++i) {
      for (int sub = 0; sub < substeps; ++sub) {
        double hh = h / substeps;
        RayState k1 = rhs(s);
        RayState s2{s.u + 0.5 * hh * k1.u, s.v + 0.5 * hh * k1.v,
                    s.du + 0.5 * hh * k1.du, s.dv + 0.5 * hh * k1.dv};
        RayState k2 = rhs(s2);
        RayState s3{s.u + 0.5 * hh * k2.u, s.v + 0.5 * hh * k2.v,
                    s.du + 0.5 * hh * k2.du, s.dv + 0.5 * hh * k2.dv};
        RayState k3 = rhs(s3);
        RayState s4{s.u + hh * k3.u, s.v + hh * k3.v, s.du + hh * k3.du,
                    s.dv + hh * k3.dv};
        RayState k4 = rhs(s4);
        s.u += hh / 6 * (k1.u + 2 * k2.u + 2 * k3.u + k4.u);
        s.v += hh / 6 * (k1.v + 2 * k2.v + 2 * k3.v + k4.v);
        s.du += hh / 6 * (k1.du + 2 * k2.du + 2 * k3.du + k4.du);
        s.dv += hh / 6 * (k1.dv + 2 * k2.dv + 2 * k3.dv + k4.dv);
      }
      if (std::hypot(s.u, s.v) > 1.0 + 1e-9)
        throw std::invalid_argument(
            "geodesic chart: ray at angle " + std::to_string(ang) +
            " exits the parameter disc");
      ray_u_[i * n_phi_ + k] = s.u;
      ray_v_[i * n_phi_ + k] = s.v;
    }
  }

  // P from fourth-order central differences across adjacent rays
  PolarField Ef{im.nr(), im.nphi(), std::vector<double>(im.nr() * im.nphi())};
  PolarField Ff{im.nr(), im.nphi(), std::vector<double>(im.nr() * im.nphi())};
  PolarField Gf{im.nr(), im.nphi(), std::vector<double>(im.nr() * im.nphi())};
  for (int i = 0; i < im.nr(); ++i)
    for (int j = 0; j < im.nphi(); ++j) {
      Ef.at(i, j) = im.E(i, j);
      Ff.at(i, j) = im.F(i, j);
      Gf.at(i, j) = im.G(i, j);
    }
  double dp = dphi();
  p_.assign((n_rho_ + 1) * n_phi_, 0.0);
  sqrtp_.assign((n_rho_ + 1) * n_phi_, 0.0);
  for (int i = 1; i <= n_rho_; ++i)
    for (int k = 0; k < n_phi_; ++k) {
      auto at = [&](int kk) -> std::pair<double, double> {
        int m = ((kk % n_phi_) + n_phi_) % n_phi_;
        return {ray_u_[i * n_phi_ + m], ray_v_[i * n_phi_ + m]};
      };
      auto [up2, vp2] = at(k + 2);
      auto [up1, vp1] = at(k + 1);
      auto [um1, vm1] = at(k - 1);
      auto [um2, vm2] = at(k - 2);
      double du = (-up2 + 8 * up1 - 8 * um1 + um2) / (12 * dp);
      double dv = (-vp2 + 8 * vp1 - 8 * vm1 + vm2) / (12 * dp);
      double uu = ray_u_[i * n_phi_ + k], vv = ray_v_[i * n_phi_ + k];
      double E = im.interpolate(Ef, uu, vv);
      double F = im.interpolate(Ff, uu, vv);
      double G = im.interpolate(Gf, uu, vv);
      double P = E * du * du + 2 * F * du * dv + G * dv * dv;
      if (P <= 0)
        throw std::invalid_argument("geodesic chart: non-positive P at a chart node");
      p_[i * n_phi_ + k] = P;
      sqrtp_[i * n_phi_ + k] = std::sqrt(P);
    }

  ell_.assign(n_rho_ + 1, 0.0);
  for (int i = 0; i <= n_rho_; ++i) {
    double s = 0;
    for (int k = 0; k < n_phi_; ++k) s += sqrtp_[i * n_phi_ + k];
    ell_[i] = s * dp;
  }
}

double GeodesicPolarChart::area_up_to(int iend) const {
  double h = drho();
  if (iend % 2 == 0) {
    double s = ell_[0] + ell_[iend];
    for (int i = 1; i < iend; i += 2) s += 4 * ell_[i];
    for (int i = 2; i < iend; i += 2) s += 2 * ell_[i];
    return s * h / 3.0;
  }
  double s = 0.5 * (ell_[0] + ell_[iend]);
  for (int i = 1; i < iend; ++i) s += ell_[i];
  return s * h;
}

double GeodesicPolarChart::area() const { return area_up_to(n_rho_); }

double GeodesicPolarChart::integrate(const std::function<double(double, double)>& f,
                                     int iend) const {
  double h = drho(), dp = dphi();
  std::vector<double> row(iend + 1, 0.0);
  for (int i = 0; i <= iend; ++i) {
    double s = 0;
    for (int k = 0; k < n_phi_; ++k) {
      auto [uu, vv] = ray_point(i, k);
      s += f(uu, vv) * sqrtp_[i * n_phi_ + k];
    }
    row[i] = s * dp;
  }
  if (iend % 2 == 0) {
    double s = row[0] + row[iend];
    for (int i = 1; i < iend; i += 2) s += 4 * row[i];
    for (int i = 2; i < iend; i += 2) s += 2 * row[i];
    return s * h / 3.0;
  }
  double s = 0.5 * (row[0] + row[iend]);
  for (int i = 1; i < iend; ++i) s += row[i];
  return s * h;
}

double GeodesicPolarChart::bonnet_gauss_defect(const Immersion& im, int irow) const {
  if (irow < 1 || irow > n_rho_)
    throw std::invalid_argument("bonnet_gauss_defect: row out of range");
  double h = drho(), dp = dphi();

  // d/drho sqrt(P) at the row, fourth order with one-sided ends
  double circ = 0;
  int n = n_rho_ + 1;
  for (int k = 0; k < n_phi_; ++k) {
    auto get = [&](int ii) { return sqrtp_[ii * n_phi_ + k]; };
    double d;
    int i = irow;
    if (i >= 2 && i <= n - 3)
      d = (-get(i + 2) + 8 * get(i + 1) - 8 * get(i - 1) + get(i - 2)) / (12 * h);
    else if (i == 1)
      d = (-3 * get(0) - 10 * get(1) + 18 * get(2) - 6 * get(3) + get(4)) / (12 * h);
    else if (i == n - 2)
      d = (3 * get(n - 1) + 10 * get(n - 2) - 18 * get(n - 3) + 6 * get(n - 4) -
           get(n - 5)) /
          (12 * h);
    else
      d = (25 * get(n - 1) - 48 * get(n - 2) + 36 * get(n - 3) - 16 * get(n - 4) +
           3 * get(n - 5)) /
          (12 * h);
    circ += d;
  }
  circ *= dp;

  PolarField K = im.gauss_curvature();
  double total = integrate(
      [&](double uu, double vv) { return im.interpolate(K, uu, vv); }, irow);
  return circ + total - 2 * M_PI;
}

double GeodesicPolarChart::bonnet_gauss_defect(const Immersion& im, double rho) const {
  if (rho <= 0 || rho > r_ + 1e-12)
    throw std::invalid_argument("bonnet_gauss_defect: rho out of (0, r]");
  int irow = std::clamp(static_cast<int>(std::lround(rho / drho())), 1, n_rho_);
  return bonnet_gauss_defect(im, irow);
}

}  // namespace areabound
