#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <memory>
#include <vector>

namespace areabound {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Scalar samples on the polar parameter grid of an immersion.
struct PolarField {
  int nr = 0, nphi = 0;
  std::vector<double> v;
  double operator()(int i, int j) const { return v[i * nphi + j]; }
  double& at(int i, int j) { return v[i * nphi + j]; }
};

/// Parametric immersion X: B -> R^3 over the closed unit disc, sampled on a
/// polar grid rho_i = i/(nr-1), phi_j = 2 pi j/nphi (row 0 duplicates the
/// center). First derivatives, metric, and curvature are differenced on the
/// grid; immutable after construction.
class Immersion {
 public:
  static Immersion from_callback(const std::function<Vec3(double, double)>& X,
                                 int nr, int nphi);
  static Immersion from_samples(int nr, int nphi, std::vector<Vec3> values);

  int nr() const { return nr_; }
  int nphi() const { return nphi_; }
  double drho() const { return 1.0 / (nr_ - 1); }
  double dphi() const { return 2.0 * M_PI / nphi_; }
  double rho(int i) const { return static_cast<double>(i) / (nr_ - 1); }
  double phi(int j) const { return 2.0 * M_PI * j / nphi_; }
  double u(int i, int j) const { return rho(i) * std::cos(phi(j)); }
  double v(int i, int j) const { return rho(i) * std::sin(phi(j)); }
  int index(int i, int j) const { return i * nphi_ + j; }

  const Vec3& X(int i, int j) const { return x_[index(i, j)]; }
  const Vec3& Xu(int i, int j) const { return xu_[index(i, j)]; }
  const Vec3& Xv(int i, int j) const { return xv_[index(i, j)]; }

  /// Unit normal Xu x Xv / |Xu x Vv|; throws naming the node when the
  /// cross product degenerates below 1e-14.
  Vec3 normal(int i, int j) const;

  double E(int i, int j) const { return ee_(i, j); }
  double F(int i, int j) const { return ff_(i, j); }
  double G(int i, int j) const { return gg_(i, j); }
  /// Unweighted area element W = |Xu x Xv|.
  double W(int i, int j) const { return w_(i, j); }

  /// Quadrature weight for integrals over the parameter disc in du dv.
  double node_weight(int i, int j) const;
  double integrate(const PolarField& f) const;
  /// Surface area of the immersion.
  double area() const;

  /// Gaussian curvature from the differenced second fundamental form.
  PolarField gauss_curvature() const;

  // --- derivative machinery on the polar grid (fourth order) ---
  PolarField d_rho(const PolarField& f) const;
  PolarField d_phi(const PolarField& f) const;
  /// Cartesian parameter derivatives via the polar chain rule.
  void d_uv(const PolarField& f, PolarField& fu, PolarField& fv) const;

  /// 4-point Lagrange interpolation of a field at parameter point (u,v).
  double interpolate(const PolarField& f, double uu, double vv) const;

 private:
  Immersion() = default;
  void finalize();
  int nr_ = 0, nphi_ = 0;
  std::vector<Vec3> x_, xu_, xv_;
  PolarField ee_, ff_, gg_, w_;
};

/// Darboux-frame curvature components of the boundary curve X(cos t, sin t).
struct BoundaryCurvature {
  std::vector<double> kappa_g, kappa_n, kappa, ds;
  double integral_kappa() const;
};
BoundaryCurvature boundary_curvatures(const Immersion& im);

// ---- weight matrices ---------------------------------------------------------

/// Symmetric positive definite weight G(X,Z) with eccentricity bound g0:
/// spectrum within [(1+g0)^{-1}, 1+g0], G Z^t = Z^t, det G = 1.
struct WeightMatrix {
  std::function<Mat3(const Vec3&, const Vec3&)> G;
  double g0 = 0.0;
  std::string provenance = "user";
};

WeightMatrix identity_weight();

/// Parametric integrand F(X,Z), positive and 1-homogeneous in Z.
struct ParametricIntegrand {
  std::function<double(const Vec3&, const Vec3&)> value;
  std::function<Mat3(const Vec3&, const Vec3&)> hess_zz;   // optional
  std::function<Mat3(const Vec3&, const Vec3&)> mixed_xz;  // optional

  Mat3 hessian_zz(const Vec3& X, const Vec3& Z) const;
  Mat3 hessian_xz(const Vec3& X, const Vec3& Z) const;
};

ParametricIntegrand euclidean_norm_integrand();  // F(Z) = |Z|
/// F(Z) = sqrt(Z . D Z) for a positive diagonal D (anisotropic example).
ParametricIntegrand quadratic_norm_integrand(const Vec3& diag);

/// Weight of the integrand: (F_ZZ / sqrt(det' F_ZZ) + Z Z^t)^{-1} at unit Z,
/// where det' is the product of the two positive eigenvalues of F_ZZ (the
/// Hessian annihilates Z by homogeneity). Throws for non-elliptic F. The
/// eccentricity g0 is estimated from the sampled spectrum.
WeightMatrix weight_from_integrand(const ParametricIntegrand& f, int samples = 200,
                                   std::uint64_t seed = 7);

/// trace F_XZ(X,N) / (2 sqrt(det' F_ZZ(X,N))) per node; the direction input
/// is normalized internally, so the value is scale invariant in Z.
double weighted_mean_curvature_at(const ParametricIntegrand& f, const Vec3& X,
                                  const Vec3& Z);
PolarField weighted_mean_curvature(const ParametricIntegrand& f, const Immersion& im);

/// Sampled audit of the weight properties: scale invariance, G Z^t = Z^t,
/// spectrum within the declared eccentricity, unit determinant.
struct WeightAudit {
  double dev_scale = 0, dev_fix_z = 0, dev_det = 0;
  double spectrum_lo = 1, spectrum_hi = 1;
  bool passed(double g0, double tol = 1e-8) const;
};
WeightAudit audit_weight(const WeightMatrix& w, int samples = 100,
                         std::uint64_t seed = 11);

/// Weighted first fundamental form h_ij = X_ui . G(X,N) . X_uj per node.
struct WeightedMetric {
  PolarField e, f, g;
};
WeightedMetric weighted_metric(const Immersion& im, const WeightMatrix& w);

/// Dirichlet energies of a test field vanishing on the boundary row:
/// unweighted and weighted Beltrami energy against the same area element.
struct EnergyPair {
  double unweighted = 0, weighted = 0;
};
EnergyPair dirichlet_energies(const Immersion& im, const WeightMatrix& w,
                              const std::function<double(double, double)>& phi);

}  // namespace areabound
