#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "areabound/immersion.hpp"

namespace areabound {

/// Geodesic polar coordinates around a parameter point: rays shot with RK4
/// through the Christoffel field of the differenced metric, and the squared
/// angular coefficient P from central differences across adjacent rays.
class GeodesicPolarChart {
 public:
  /// Throws when a ray leaves the parameter disc, naming the ray angle.
  GeodesicPolarChart(const Immersion& im, double cu, double cv, double radius,
                     int n_rho = 96, int n_phi = 192);

  double radius() const { return r_; }
  int n_rho() const { return n_rho_; }
  int n_phi() const { return n_phi_; }
  double drho() const { return r_ / n_rho_; }
  double dphi() const { return 2.0 * M_PI / n_phi_; }

  /// Parameter position of ray k at radial index i (i = 0 is the center).
  std::pair<double, double> ray_point(int i, int k) const {
    return {ray_u_[i * n_phi_ + k], ray_v_[i * n_phi_ + k]};
  }

  double P(int i, int k) const { return p_[i * n_phi_ + k]; }
  double sqrtP(int i, int k) const { return sqrtp_[i * n_phi_ + k]; }

  /// Circumference L(rho_i) of the geodesic circle.
  double L(int i) const { return ell_[i]; }

  /// Chart area int_0^r L(rho) drho (Simpson when n_rho is even).
  double area() const;
  double area_up_to(int i) const;

  /// int over the chart of f(u,v) sqrt(P) drho dphi up to radial index i.
  double integrate(const std::function<double(double, double)>& f, int i) const;
  double integrate(const std::function<double(double, double)>& f) const {
    return integrate(f, n_rho_);
  }

  /// Bonnet-Gauss defect at radial index i:
  /// int kappa_g sqrt(P) dphi + int int K sqrt(P) - 2 pi, with
  /// kappa_g sqrt(P) = d/drho sqrt(P).
  double bonnet_gauss_defect(const Immersion& im, int i) const;
  /// Same, with rho snapped to the nearest radial grid index.
  double bonnet_gauss_defect(const Immersion& im, double rho) const;

 private:
  double r_;
  int n_rho_, n_phi_;
  std::vector<double> ray_u_, ray_v_;  // (n_rho+1) x n_phi
  std::vector<double> p_, sqrtp_;
  std::vector<double> ell_;
};

}  // namespace areabound
