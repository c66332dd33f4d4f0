#include "areabound/immersion.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace areabound {

namespace {

// fourth-order first derivative on a uniform 1D grid of n >= 5 nodes;
// access(k) must return f at index k (the caller handles wrapping or
// reflection through k < 0).
template <class Access>
double d1_uniform(Access&& f, int i, int n, double h) {
  if (i >= 2 && i <= n - 3)
    return (-f(i + 2) + 8 * f(i + 1) - 8 * f(i - 1) + f(i - 2)) / (12 * h);
  if (i == n - 2)
    return (3 * f(n - 1) + 10 * f(n - 2) - 18 * f(n - 3) + 6 * f(n - 4) - f(n - 5)) /
           (12 * h);
  // i == n-1
  return (25 * f(n - 1) - 48 * f(n - 2) + 36 * f(n - 3) - 16 * f(n - 4) +
          3 * f(n - 5)) /
         (12 * h);
}

}  // namespace

Immersion Immersion::from_callback(const std::function<Vec3(double, double)>& X,
                                   int nr, int nphi) {
  if (nr < 5 || nphi < 8 || nphi % 4 != 0)
    throw std::invalid_argument("Immersion: need nr >= 5 and nphi >= 8 divisible by 4");
  Immersion im;
  im.nr_ = nr;
  im.nphi_ = nphi;
  im.x_.resize(nr * nphi);
  Vec3 center = X(0.0, 0.0);
  for (int j = 0; j < nphi; ++j) im.x_[j] = center;
  for (int i = 1; i < nr; ++i)
    for (int j = 0; j < nphi; ++j)
      im.x_[im.index(i, j)] = X(im.u(i, j), im.v(i, j));
  im.finalize();
  return im;
}

Immersion Immersion::from_samples(int nr, int nphi, std::vector<Vec3> values) {
  if (nr < 5 || nphi < 8 || nphi % 4 != 0)
    throw std::invalid_argument("Immersion: need nr >= 5 and nphi >= 8 divisible by 4");
  if (static_cast<int>(values.size()) != nr * nphi)
    throw std::invalid_argument("Immersion: sample count mismatch");
  Immersion im;
  im.nr_ = nr;
  im.nphi_ = nphi;
  im.x_ = std::move(values);
  im.finalize();
  return im;
}

void Immersion::finalize() {
  int nr = nr_, nphi = nphi_;
  double dr = drho(), dp = dphi();
  xu_.resize(nr * nphi);
  xv_.resize(nr * nphi);

  // rho derivative with reflection through the center: f(-rho, phi) =
  // f(rho, phi + pi); phi derivative periodic, both fourth order.
  auto xr = [&](int i, int j) -> Vec3 {
    auto get = [&](int ii) -> const Vec3& {
      if (ii >= 0) return x_[index(ii, j)];
      return x_[index(-ii, (j + nphi / 2) % nphi)];
    };
    if (i <= nr - 3)
      return (-get(i + 2) + 8 * get(i + 1) - 8 * get(i - 1) + get(i - 2)) / (12 * dr);
    if (i == nr - 2)
      return (3 * get(nr - 1) + 10 * get(nr - 2) - 18 * get(nr - 3) +
              6 * get(nr - 4) - get(nr - 5)) /
             (12 * dr);
    return (25 * get(nr - 1) - 48 * get(nr - 2) + 36 * get(nr - 3) -
            16 * get(nr - 4) + 3 * get(nr - 5)) /
           (12 * dr);
  };
  auto xp = [&](int i, int j) -> Vec3 {
    auto get = [&](int jj) -> const Vec3& { return x_[index(i, (jj % nphi + nphi) % nphi)]; };
    return (-get(j + 2) + 8 * get(j + 1) - 8 * get(j - 1) + get(j - 2)) / (12 * dp);
  };

  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nphi; ++j) {
      if (i == 0) continue;  // center handled below
      double c = std::cos(phi(j)), s = std::sin(phi(j));
      Vec3 fr = xr(i, j), fp = xp(i, j);
      double inv_r = 1.0 / rho(i);
      xu_[index(i, j)] = fr * c - fp * (s * inv_r);
      xv_[index(i, j)] = fr * s + fp * (c * inv_r);
    }
  // center: directional derivatives along the phi = 0 and phi = pi/2 rays
  {
    Vec3 du = xr(0, 0), dv = xr(0, nphi_ / 4);
    for (int j = 0; j < nphi; ++j) {
      xu_[index(0, j)] = du;
      xv_[index(0, j)] = dv;
    }
  }

  ee_ = {nr, nphi, std::vector<double>(nr * nphi)};
  ff_ = {nr, nphi, std::vector<double>(nr * nphi)};
  gg_ = {nr, nphi, std::vector<double>(nr * nphi)};
  w_ = {nr, nphi, std::vector<double>(nr * nphi)};
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nphi; ++j) {
      const Vec3& a = xu_[index(i, j)];
      const Vec3& b = xv_[index(i, j)];
      ee_.at(i, j) = a.dot(a);
      ff_.at(i, j) = a.dot(b);
      gg_.at(i, j) = b.dot(b);
      w_.at(i, j) = a.cross(b).norm();
    }
}

Vec3 Immersion::normal(int i, int j) const {
  Vec3 n = Xu(i, j).cross(Xv(i, j));
  double len = n.norm();
  if (len < 1e-14)
    throw std::invalid_argument("Immersion: degenerate node (i=" + std::to_string(i) +
                                ", j=" + std::to_string(j) + ")");
  return n / len;
}

double Immersion::node_weight(int i, int j) const {
  (void)j;
  double wr = (i == 0 || i == nr_ - 1) ? 0.5 : 1.0;
  return rho(i) * drho() * dphi() * wr;
}

double Immersion::integrate(const PolarField& f) const {
  double s = 0;
  for (int i = 0; i < nr_; ++i)
    for (int j = 0; j < nphi_; ++j) s += node_weight(i, j) * f(i, j);
  return s;
}

double Immersion::area() const { return integrate(w_); }

PolarField Immersion::d_rho(const PolarField& f) const {
  PolarField out{nr_, nphi_, std::vector<double>(nr_ * nphi_)};
  double dr = drho();
  for (int j = 0; j < nphi_; ++j) {
    auto get = [&](int ii) {
      if (ii >= 0) return f(ii, j);
      return f(-ii, (j + nphi_ / 2) % nphi_);
    };
    for (int i = 0; i < nr_; ++i) {
      if (i <= nr_ - 3)
        out.at(i, j) =
            (-get(i + 2) + 8 * get(i + 1) - 8 * get(i - 1) + get(i - 2)) / (12 * dr);
      else
        out.at(i, j) = d1_uniform([&](int k) { return f(k, j); }, i, nr_, dr);
    }
  }
  return out;
}

PolarField Immersion::d_phi(const PolarField& f) const {
  PolarField out{nr_, nphi_, std::vector<double>(nr_ * nphi_)};
  double dp = dphi();
  for (int i = 0; i < nr_; ++i)
    for (int j = 0; j < nphi_; ++j) {
      auto get = [&](int jj) { return f(i, (jj % nphi_ + nphi_) % nphi_); };
      out.at(i, j) =
          (-get(j + 2) + 8 * get(j + 1) - 8 * get(j - 1) + get(j - 2)) / (12 * dp);
    }
  return out;
}

void Immersion::d_uv(const PolarField& f, PolarField& fu, PolarField& fv) const {
  PolarField fr = d_rho(f), fp = d_phi(f);
  fu = {nr_, nphi_, std::vector<double>(nr_ * nphi_)};
  fv = {nr_, nphi_, std::vector<double>(nr_ * nphi_)};
  for (int i = 1; i < nr_; ++i)
    for (int j = 0; j < nphi_; ++j) {
      double c = std::cos(phi(j)), s = std::sin(phi(j));
      double inv_r = 1.0 / rho(i);
      fu.at(i, j) = fr(i, j) * c - fp(i, j) * s * inv_r;
      fv.at(i, j) = fr(i, j) * s + fp(i, j) * c * inv_r;
    }
  for (int j = 0; j < nphi_; ++j) {
    fu.at(0, j) = fr(0, 0);
    fv.at(0, j) = fr(0, nphi_ / 4);
  }
}

double Immersion::interpolate(const PolarField& f, double uu, double vv) const {
  double rr = std::hypot(uu, vv);
  double ph = std::atan2(vv, uu);
  if (ph < 0) ph += 2 * M_PI;
  double fi = rr / drho();
  double fj = ph / dphi();
  int i0 = std::clamp(static_cast<int>(std::floor(fi)) - 1, 0, nr_ - 4);
  double s = fi - i0;
  int j0 = static_cast<int>(std::floor(fj)) - 1;
  double t = fj - j0;

  auto lag = [](double ss, double* w) {
    w[0] = -(ss - 1) * (ss - 2) * (ss - 3) / 6.0;
    w[1] = ss * (ss - 2) * (ss - 3) / 2.0;
    w[2] = -ss * (ss - 1) * (ss - 3) / 2.0;
    w[3] = ss * (ss - 1) * (ss - 2) / 6.0;
  };
  double wi[4], wj[4];
  lag(s, wi);
  lag(t, wj);
  double acc = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      int jj = ((j0 + b) % nphi_ + nphi_) % nphi_;
      acc += wi[a] * wj[b] * f(i0 + a, jj);
    }
  return acc;
}

PolarField Immersion::gauss_curvature() const {
  // second derivatives by differencing the first-derivative fields
  auto component = [&](const std::vector<Vec3>& src, int c) {
    PolarField f{nr_, nphi_, std::vector<double>(nr_ * nphi_)};
    for (int k = 0; k < nr_ * nphi_; ++k) f.v[k] = src[k][c];
    return f;
  };
  PolarField K{nr_, nphi_, std::vector<double>(nr_ * nphi_)};
  std::vector<PolarField> xuu(3), xuv(3), xvv(3);
  for (int c = 0; c < 3; ++c) {
    PolarField fu = component(xu_, c), fv = component(xv_, c);
    PolarField a, b;
    d_uv(fu, a, b);
    xuu[c] = a;
    xuv[c] = b;  // d(Xu)/dv
    d_uv(fv, a, b);
    xvv[c] = b;
  }
  for (int i = 0; i < nr_; ++i)
    for (int j = 0; j < nphi_; ++j) {
      Vec3 n = normal(i, j);
      Vec3 duu(xuu[0](i, j), xuu[1](i, j), xuu[2](i, j));
      Vec3 duv(xuv[0](i, j), xuv[1](i, j), xuv[2](i, j));
      Vec3 dvv(xvv[0](i, j), xvv[1](i, j), xvv[2](i, j));
      double L = duu.dot(n), M = duv.dot(n), N2 = dvv.dot(n);
      double det = ee_(i, j) * gg_(i, j) - ff_(i, j) * ff_(i, j);
      if (det <= 0)
        throw std::invalid_argument("gauss_curvature: degenerate metric at a node");
      K.at(i, j) = (L * N2 - M * M) / det;
    }
  return K;
}

// ---- boundary curvature -------------------------------------------------------

BoundaryCurvature boundary_curvatures(const Immersion& im) {
  int n = im.nphi(), i = im.nr() - 1;
  double dp = im.dphi();
  BoundaryCurvature out;
  out.kappa_g.resize(n);
  out.kappa_n.resize(n);
  out.kappa.resize(n);
  out.ds.resize(n);
  auto get = [&](int jj) -> const Vec3& {
    return im.X(i, ((jj % n) + n) % n);
  };
  for (int j = 0; j < n; ++j) {
    Vec3 c1 = (-get(j + 2) + 8 * get(j + 1) - 8 * get(j - 1) + get(j - 2)) / (12 * dp);
    Vec3 c2 = (-get(j + 2) + 16 * get(j + 1) - 30 * get(j) + 16 * get(j - 1) -
               get(j - 2)) /
              (12 * dp * dp);
    double speed = c1.norm();
    if (speed < 1e-14)
      throw std::invalid_argument("boundary_curvatures: degenerate boundary tangent");
    Vec3 T = c1 / speed;
    Vec3 N = im.normal(i, j);
    Vec3 S = N.cross(T);
    out.kappa_g[j] = c2.dot(S) / (speed * speed);
    out.kappa_n[j] = c2.dot(N) / (speed * speed);
    out.kappa[j] = std::hypot(out.kappa_g[j], out.kappa_n[j]);
    out.ds[j] = speed * dp;
  }
  return out;
}

double BoundaryCurvature::integral_kappa() const {
  double s = 0;
  for (size_t j = 0; j < kappa.size(); ++j) s += kappa[j] * ds[j];
  return s;
}

// ---- weight matrices ----------------------------------------------------------

WeightMatrix identity_weight() {
  WeightMatrix w;
  w.G = [](const Vec3&, const Vec3&) { return Mat3::Identity(); };
  w.g0 = 0.0;
  w.provenance = "identity";
  return w;
}

Mat3 ParametricIntegrand::hessian_zz(const Vec3& X, const Vec3& Z) const {
  if (hess_zz) return hess_zz(X, Z);
  Mat3 H;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      double ha = 1e-5 * (1 + std::abs(Z[a]));
      double hb = 1e-5 * (1 + std::abs(Z[b]));
      Vec3 zpp = Z, zpm = Z, zmp = Z, zmm = Z;
      zpp[a] += ha; zpp[b] += hb;
      zpm[a] += ha; zpm[b] -= hb;
      zmp[a] -= ha; zmp[b] += hb;
      zmm[a] -= ha; zmm[b] -= hb;
      H(a, b) = (value(X, zpp) - value(X, zpm) - value(X, zmp) + value(X, zmm)) /
                (4 * ha * hb);
    }
  return 0.5 * (H + H.transpose());
}

Mat3 ParametricIntegrand::hessian_xz(const Vec3& X, const Vec3& Z) const {
  if (mixed_xz) return mixed_xz(X, Z);
  Mat3 H;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      double ha = 1e-5 * (1 + std::abs(X[a]));
      double hb = 1e-5 * (1 + std::abs(Z[b]));
      Vec3 xp = X, xm = X;
      xp[a] += ha;
      xm[a] -= ha;
      Vec3 zp = Z, zm = Z;
      zp[b] += hb;
      zm[b] -= hb;
      H(a, b) = (value(xp, zp) - value(xp, zm) - value(xm, zp) + value(xm, zm)) /
                (4 * ha * hb);
    }
  return H;  // mixed Hessian, no symmetry expected
}

ParametricIntegrand euclidean_norm_integrand() {
  ParametricIntegrand f;
  f.value = [](const Vec3&, const Vec3& Z) { return Z.norm(); };
  f.hess_zz = [](const Vec3&, const Vec3& Z) -> Mat3 {
    double n = Z.norm();
    return (Mat3::Identity() - (Z / n) * (Z / n).transpose()) / n;
  };
  f.mixed_xz = [](const Vec3&, const Vec3&) -> Mat3 { return Mat3::Zero(); };
  return f;
}

ParametricIntegrand quadratic_norm_integrand(const Vec3& diag) {
  if (diag.minCoeff() <= 0)
    throw std::invalid_argument("quadratic_norm_integrand: diagonal must be positive");
  Mat3 D = diag.asDiagonal();
  ParametricIntegrand f;
  f.value = [D](const Vec3&, const Vec3& Z) { return std::sqrt(Z.dot(D * Z)); };
  f.hess_zz = [D](const Vec3&, const Vec3& Z) -> Mat3 {
    double s = std::sqrt(Z.dot(D * Z));
    Vec3 dz = D * Z;
    return D / s - dz * dz.transpose() / (s * s * s);
  };
  f.mixed_xz = [](const Vec3&, const Vec3&) -> Mat3 { return Mat3::Zero(); };
  return f;
}

namespace {

// positive-part spectrum of the Z-Hessian: the two positive eigenvalues
// (the third vanishes by homogeneity); throws when ellipticity fails.
void positive_pair(const Mat3& H, double& l1, double& l2) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(0.5 * (H + H.transpose()));
  Vec3 ev = es.eigenvalues();  // ascending
  double scale = std::max(1e-300, std::abs(ev[2]));
  if (ev[1] <= 1e-7 * scale)
    throw std::invalid_argument(
        "weight_from_integrand: fewer than two positive Hessian eigenvalues");
  l1 = ev[1];
  l2 = ev[2];
}

Mat3 weight_matrix_of(const ParametricIntegrand& f, const Vec3& X, const Vec3& Z) {
  Vec3 zu = Z.normalized();
  Mat3 H = f.hessian_zz(X, zu);
  H = 0.5 * (H + H.transpose());
  double l1, l2;
  positive_pair(H, l1, l2);
  Mat3 M = H / std::sqrt(l1 * l2) + zu * zu.transpose();
  return M.inverse();
}

}  // namespace

WeightMatrix weight_from_integrand(const ParametricIntegrand& f, int samples,
                                   std::uint64_t seed) {
  WeightMatrix w;
  w.provenance = "from_integrand";
  w.G = [f](const Vec3& X, const Vec3& Z) { return weight_matrix_of(f, X, Z); };

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double g0 = 0.0;
  for (int k = 0; k < std::max(samples, 512); ++k) {
    Vec3 X(gauss(rng), gauss(rng), gauss(rng));
    Vec3 Z(gauss(rng), gauss(rng), gauss(rng));
    if (Z.norm() < 1e-3) continue;
    Mat3 G = w.G(X, Z);
    Eigen::SelfAdjointEigenSolver<Mat3> es(0.5 * (G + G.transpose()));
    double lo = es.eigenvalues()[0], hi = es.eigenvalues()[2];
    if (lo <= 0)
      throw std::invalid_argument("weight_from_integrand: non-positive weight sample");
    g0 = std::max({g0, hi - 1.0, 1.0 / lo - 1.0});
  }
  // the sampled sup slightly under-estimates the spectral range; the margin
  // keeps independently re-sampled spectra inside the declared bound
  w.g0 = g0 * 1.001;
  return w;
}

double weighted_mean_curvature_at(const ParametricIntegrand& f, const Vec3& X,
                                  const Vec3& Z) {
  Vec3 zu = Z.normalized();
  Mat3 Hzz = f.hessian_zz(X, zu);
  double l1, l2;
  positive_pair(0.5 * (Hzz + Hzz.transpose()), l1, l2);
  return f.hessian_xz(X, zu).trace() / (2.0 * std::sqrt(l1 * l2));
}

PolarField weighted_mean_curvature(const ParametricIntegrand& f, const Immersion& im) {
  PolarField out{im.nr(), im.nphi(), std::vector<double>(im.nr() * im.nphi())};
  for (int i = 0; i < im.nr(); ++i)
    for (int j = 0; j < im.nphi(); ++j)
      out.at(i, j) = weighted_mean_curvature_at(f, im.X(i, j), im.normal(i, j));
  return out;
}

bool WeightAudit::passed(double g0, double tol) const {
  return dev_scale <= tol && dev_fix_z <= tol && dev_det <= tol &&
         spectrum_lo >= 1.0 / (1.0 + g0) - tol && spectrum_hi <= 1.0 + g0 + tol;
}

WeightAudit audit_weight(const WeightMatrix& w, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  WeightAudit a;
  for (int k = 0; k < samples; ++k) {
    Vec3 X(gauss(rng), gauss(rng), gauss(rng));
    Vec3 Z(gauss(rng), gauss(rng), gauss(rng));
    if (Z.norm() < 1e-3) continue;
    Mat3 G = w.G(X, Z);
    a.dev_scale = std::max(a.dev_scale, (w.G(X, scale(rng) * Z) - G).norm());
    a.dev_fix_z = std::max(a.dev_fix_z, (G * Z - Z).norm() / Z.norm());
    a.dev_det = std::max(a.dev_det, std::abs(G.determinant() - 1.0));
    Eigen::SelfAdjointEigenSolver<Mat3> es(0.5 * (G + G.transpose()));
    a.spectrum_lo = std::min(a.spectrum_lo, es.eigenvalues()[0]);
    a.spectrum_hi = std::max(a.spectrum_hi, es.eigenvalues()[2]);
  }
  return a;
}

WeightedMetric weighted_metric(const Immersion& im, const WeightMatrix& w) {
  int nr = im.nr(), nphi = im.nphi();
  WeightedMetric m;
  m.e = {nr, nphi, std::vector<double>(nr * nphi)};
  m.f = {nr, nphi, std::vector<double>(nr * nphi)};
  m.g = {nr, nphi, std::vector<double>(nr * nphi)};
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nphi; ++j) {
      Mat3 G = w.G(im.X(i, j), im.normal(i, j));
      const Vec3& xu = im.Xu(i, j);
      const Vec3& xv = im.Xv(i, j);
      double e = xu.dot(G * xu), ff = xu.dot(G * xv), g = xv.dot(G * xv);
      if (e <= 0 || e * g - ff * ff <= 0)
        throw std::invalid_argument("weighted_metric: non-positive-definite result");
      m.e.at(i, j) = e;
      m.f.at(i, j) = ff;
      m.g.at(i, j) = g;
    }
  return m;
}

EnergyPair dirichlet_energies(const Immersion& im, const WeightMatrix& w,
                              const std::function<double(double, double)>& phi) {
  int nr = im.nr(), nphi = im.nphi();
  PolarField f{nr, nphi, std::vector<double>(nr * nphi)};
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nphi; ++j) f.at(i, j) = phi(im.u(i, j), im.v(i, j));
  for (int j = 0; j < nphi; ++j)
    if (std::abs(f(nr - 1, j)) > 1e-12)
      throw std::invalid_argument("dirichlet_energies: test field not zero on the boundary");

  PolarField fu, fv;
  im.d_uv(f, fu, fv);
  WeightedMetric wm = weighted_metric(im, w);

  EnergyPair out;
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nphi; ++j) {
      double wq = im.node_weight(i, j);
      if (wq == 0) continue;
      double du = fu(i, j), dv = fv(i, j);
      double W = im.W(i, j);
      {
        double E = im.E(i, j), F = im.F(i, j), G = im.G(i, j);
        double det = E * G - F * F;
        out.unweighted += wq * W * (G * du * du - 2 * F * du * dv + E * dv * dv) / det;
      }
      {
        double E = wm.e(i, j), F = wm.f(i, j), G = wm.g(i, j);
        double det = E * G - F * F;
        out.weighted += wq * W * (G * du * du - 2 * F * du * dv + E * dv * dv) / det;
      }
    }
  return out;
}

}  // namespace areabound
