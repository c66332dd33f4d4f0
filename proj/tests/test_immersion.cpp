#include <doctest.h>

#include <cmath>
#include <random>

#include "areabound/immersion.hpp"
#include "oracles.hpp"

using namespace areabound;

TEST_SUITE_BEGIN("immersion");

TEST_CASE("unit normal of the plane") {
  Immersion im = Immersion::from_callback(oracles::plane_chart, 33, 64);
  for (int i = 0; i < im.nr(); ++i)
    for (int j = 0; j < im.nphi(); ++j)
      CHECK((im.normal(i, j) - Vec3(0, 0, 1)).norm() < 1e-12);
}

TEST_CASE("unit normal of the sphere cap points along the position") {
  Immersion im = Immersion::from_callback(oracles::sphere_cap(1.2), 65, 128);
  double worst = 0;
  for (int i = 0; i < im.nr(); ++i)
    for (int j = 0; j < im.nphi(); ++j)
      worst = std::max(worst, (im.normal(i, j) - im.X(i, j)).norm());
  CHECK(worst < 1e-4);
}

TEST_CASE("unit normal of a graph immersion follows the gradient formula") {
  auto zeta = [](double x, double y) { return 0.4 * x - 0.3 * y; };
  Immersion im = Immersion::from_callback(oracles::graph_chart(zeta, 1.0), 33, 64);
  Vec3 expect = Vec3(-0.4, 0.3, 1.0).normalized();
  for (int i = 0; i < im.nr(); ++i)
    for (int j = 0; j < im.nphi(); ++j)
      CHECK((im.normal(i, j) - expect).norm() < 1e-10);
}

TEST_CASE("degenerate parametrizations are reported with the node") {
  Immersion im = Immersion::from_callback(
      [](double u, double v) -> Vec3 { return {u * u, v, 0.0}; }, 33, 64);
  CHECK_THROWS_AS((void)im.normal(0, 0), std::invalid_argument);
}

TEST_CASE("gauss curvature") {
  SUBCASE("plane is flat") {
    Immersion im = Immersion::from_callback(oracles::plane_chart, 49, 96);
    PolarField K = im.gauss_curvature();
    for (double v : K.v) CHECK(std::abs(v) < 1e-12);
  }
  SUBCASE("sphere cap has K = 1") {
    Immersion im = Immersion::from_callback(oracles::sphere_cap(1.3), 97, 192);
    PolarField K = im.gauss_curvature();
    for (double v : K.v) CHECK(std::abs(v - 1.0) < 1e-4);
  }
  SUBCASE("catenoid has K = -1/cosh(v)^4") {
    Immersion im = Immersion::from_callback(oracles::catenoid_chart, 97, 192);
    PolarField K = im.gauss_curvature();
    for (int i = 0; i < im.nr(); ++i)
      for (int j = 0; j < im.nphi(); ++j) {
        double expect = -1.0 / std::pow(std::cosh(im.v(i, j)), 4);
        CHECK(std::abs(K(i, j) - expect) < 1e-3);
      }
  }
}

TEST_CASE("surface area of the flat disc is pi") {
  Immersion im = Immersion::from_callback(oracles::plane_chart, 97, 192);
  CHECK(std::abs(im.area() - oracles::kPi) < 1e-6);
}

TEST_CASE("boundary curvature of the flat disc") {
  Immersion im = Immersion::from_callback(oracles::plane_chart, 97, 256);
  BoundaryCurvature bc = boundary_curvatures(im);
  for (size_t j = 0; j < bc.kappa.size(); ++j) {
    CHECK(bc.kappa_g[j] == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(std::abs(bc.kappa_n[j]) < 1e-7);
    CHECK(bc.kappa[j] == doctest::Approx(1.0).epsilon(1e-7));
  }
  CHECK(bc.integral_kappa() == doctest::Approx(2 * oracles::kPi).epsilon(1e-7));
}

TEST_CASE("boundary curvature of a spherial cap matches the Darboux frame") {
  double rho0 = 0.9;
  Immersion im = Immersion::from_callback(oracles::sphere_cap(rho0), 97, 192);
  BoundaryCurvature bc = boundary_curvatures(im);
  for (size_t j = 0; j < bc.kappa.size(); ++j) {
    CHECK(std::abs(bc.kappa_g[j] - 1.0 / std::tan(rho0)) < 1e-3);
    CHECK(std::abs(std::abs(bc.kappa_n[j]) - 1.0) < 1e-3);
    CHECK(std::abs(bc.kappa[j] - 1.0 / std::sin(rho0)) < 1e-3);
    CHECK(bc.kappa[j] >= std::abs(bc.kappa_g[j]));
  }
}

TEST_CASE("boundary curvature tends to the flat value for small graphs") {
  for (double eps : {1e-2, 1e-3}) {
    auto zeta = [eps](double x, double y) { return eps * std::sin(x) * std::cos(y); };
    Immersion im = Immersion::from_callback(oracles::graph_chart(zeta, 1.0), 65, 128);
    BoundaryCurvature bc = boundary_curvatures(im);
    for (double k : bc.kappa) CHECK(std::abs(k - 1.0) < 10 * eps + 1e-6);
  }
}

TEST_CASE("identity weight reproduces the first fundamental form") {
  Immersion im = Immersion::from_callback(oracles::sphere_cap(1.0), 49, 96);
  WeightedMetric m = weighted_metric(im, identity_weight());
  for (int i = 0; i < im.nr(); ++i)
    for (int j = 0; j < im.nphi(); ++j) {
      CHECK(m.e(i, j) == doctest::Approx(im.E(i, j)).epsilon(1e-12));
      CHECK(m.f(i, j) == doctest::Approx(im.F(i, j)).epsilon(1e-12));
      CHECK(m.g(i, j) == doctest::Approx(im.G(i, j)).epsilon(1e-12));
    }
}

TEST_CASE("tangent-plane weights stretch the plane metric as prescribed") {
  // weight with eigenvalues (a, 1/a, 1), the 1-direction fixed along Z
  double a = 1.5;
  WeightMatrix w;
  w.g0 = a - 1;
  w.G = [a](const Vec3&, const Vec3& Z) -> Mat3 {
    Vec3 zu = Z.normalized();
    Vec3 helper = std::abs(zu[0]) < 0.9 ? Vec3(1, 0, 0) : Vec3(0, 1, 0);
    Vec3 t2 = zu.cross(helper).normalized();
    Vec3 t1 = t2.cross(zu).normalized();
    return a * t1 * t1.transpose() + (1.0 / a) * t2 * t2.transpose() +
           zu * zu.transpose();
  };
  Immersion im = Immersion::from_callback(oracles::plane_chart, 65, 128);
  WeightedMetric m = weighted_metric(im, w);
  // frame on the plane: t1 = e1, t2 = e2 up to the differencing noise of N
  for (int i = 0; i < im.nr(); ++i)
    for (int j = 0; j < im.nphi(); ++j) {
      CHECK(m.e(i, j) == doctest::Approx(a).epsilon(1e-6));
      CHECK(std::abs(m.f(i, j)) < 1e-6);
      CHECK(m.g(i, j) == doctest::Approx(1.0 / a).epsilon(1e-6));
    }
}

TEST_CASE("weighted metrics respect the eccentricity sandwich") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> spread(1.05, 1.9);
  Immersion im = Immersion::from_callback(oracles::sphere_cap(1.1), 33, 64);
  for (int trial = 0; trial < 5; ++trial) {
    double s = spread(rng);
    WeightMatrix w;
    w.g0 = s - 1;
    w.G = [s](const Vec3&, const Vec3& Z) -> Mat3 {
      Vec3 zu = Z.normalized();
      Vec3 helper = std::abs(zu[0]) < 0.9 ? Vec3(1, 0, 0) : Vec3(0, 1, 0);
      Vec3 t1 = zu.cross(helper).normalized();
      Vec3 t2 = zu.cross(t1).normalized();
      return s * t1 * t1.transpose() + (1.0 / s) * t2 * t2.transpose() +
             zu * zu.transpose();
    };
    WeightedMetric m = weighted_metric(im, w);
    for (int i = 0; i < im.nr(); ++i)
      for (int j = 0; j < im.nphi(); ++j) {
        // quadratic-form order against the unweighted metric
        double lo = 1.0 / (1 + w.g0), hi = 1 + w.g0;
        double e = im.E(i, j), f = im.F(i, j), g = im.G(i, j);
        // eigenvalues of (weighted) relative to (unweighted)
        double det = e * g - f * f;
        double a11 = (g * m.e(i, j) - f * m.f(i, j)) / det;
        double a12 = (g * m.f(i, j) - f * m.g(i, j)) / det;
        double a21 = (-f * m.e(i, j) + e * m.f(i, j)) / det;
        double a22 = (-f * m.f(i, j) + e * m.g(i, j)) / det;
        double tr = a11 + a22, dd = a11 * a22 - a12 * a21;
        double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - dd));
        CHECK(0.5 * tr - disc >= lo - 1e-9);
        CHECK(0.5 * tr + disc <= hi + 1e-9);
      }
  }
}

TEST_CASE("weight from the euclidean norm integrand is the identity") {
  WeightMatrix w = weight_from_integrand(euclidean_norm_integrand());
  CHECK(w.g0 < 1e-10);
  std::mt19937_64 rng(23);
  std::normal_distribution<double> gauss;
  for (int t = 0; t < 20; ++t) {
    Vec3 X(gauss(rng), gauss(rng), gauss(rng));
    Vec3 Z(gauss(rng), gauss(rng), gauss(rng));
    if (Z.norm() < 1e-2) continue;
    CHECK((w.G(X, Z) - Mat3::Identity()).norm() < 1e-10);
  }
}

TEST_CASE("anisotropic weight satisfies all four structural properties") {
  WeightMatrix w = weight_from_integrand(quadratic_norm_integrand(Vec3(1, 1, 2)));
  WeightAudit a = audit_weight(w, 100, 5);
  CHECK(a.dev_scale < 1e-10);
  CHECK(a.dev_fix_z < 1e-10);
  CHECK(a.dev_det < 1e-10);
  CHECK(a.passed(w.g0, 1e-8));
}

TEST_CASE("the weight construction is scale free in the integrand") {
  ParametricIntegrand f = quadratic_norm_integrand(Vec3(1, 1, 2));
  ParametricIntegrand f2 = f;
  auto base = f.value;
  f2.value = [base](const Vec3& X, const Vec3& Z) { return 2.0 * base(X, Z); };
  f2.hess_zz = nullptr;  // finite differences on the scaled copy
  f2.mixed_xz = nullptr;
  WeightMatrix w1 = weight_from_integrand(f);
  WeightMatrix w2 = weight_from_integrand(f2);
  Vec3 X(0.1, 0.2, 0.3), Z(0.4, -0.5, 0.6);
  CHECK((w1.G(X, Z) - w2.G(X, Z)).norm() < 1e-5);
}

TEST_CASE("non-elliptic integrands are rejected") {
  ParametricIntegrand f;
  f.value = [](const Vec3&, const Vec3& Z) { return Z.norm(); };
  f.hess_zz = [](const Vec3&, const Vec3&) -> Mat3 {
    return Vec3(1.0, -0.5, 0.0).asDiagonal();
  };
  WeightMatrix w = weight_from_integrand(euclidean_norm_integrand());
  CHECK_THROWS_AS((void)weight_from_integrand(f), std::invalid_argument);
}

TEST_CASE("weighted mean curvature") {
  SUBCASE("position-independent integrands give zero") {
    Immersion im = Immersion::from_callback(
        [](double u, double v) -> Vec3 { return {u, v, 0.3 * u * u}; }, 33, 64);
    PolarField H = weighted_mean_curvature(euclidean_norm_integrand(), im);
    for (double v : H.v) CHECK(v == 0.0);
  }
  SUBCASE("weighted norm matches the closed form and a finite-difference oracle") {
    ParametricIntegrand g;
    g.value = [](const Vec3& X, const Vec3& Z) { return (1.0 + 0.5 * X[0]) * Z.norm(); };
    Vec3 X(0.2, 0.1, 0.0);
    Vec3 Z = Vec3(1, 0, 1).normalized();
    // trace F_XZ = grad Gamma . Z; det' = Gamma^2
    double gamma = 1.0 + 0.5 * X[0];
    double expect = (0.5 * Z[0]) / (2.0 * gamma);
    CHECK(weighted_mean_curvature_at(g, X, Z) == doctest::Approx(expect).epsilon(1e-6));
  }
  SUBCASE("direction rescaling does not change the value") {
    ParametricIntegrand g;
    g.value = [](const Vec3& X, const Vec3& Z) { return (2.0 + X[1]) * Z.norm(); };
    Vec3 X(0.3, -0.2, 0.5), Z(0.4, 0.7, -0.2);
    CHECK(weighted_mean_curvature_at(g, X, Z) ==
          weighted_mean_curvature_at(g, X, 3.7 * Z));
  }
}

TEST_CASE("dirichlet energies") {
  Immersion im = Immersion::from_callback(oracles::sphere_cap(1.1), 49, 96);
  auto phi = [](double u, double v) { return 1 - u * u - v * v; };
  SUBCASE("identity weight collapses the pair") {
    EnergyPair e = dirichlet_energies(im, identity_weight(), phi);
    CHECK(e.weighted == doctest::Approx(e.unweighted).epsilon(1e-12));
  }
  SUBCASE("test fields must vanish on the boundary") {
    CHECK_THROWS_AS(
        (void)dirichlet_energies(im, identity_weight(),
                                 [](double, double) { return 1.0; }),
        std::invalid_argument);
  }
  SUBCASE("conformal parametrizations reduce to the flat dirichlet integral") {
    // inverse stereographic chart of the sphere is conformal
    Immersion conf = Immersion::from_callback(
        [](double u, double v) -> Vec3 {
          double s = 1.0 + u * u + v * v;
          return {2 * u / s, 2 * v / s, (u * u + v * v - 1) / s};
        },
        97, 192);
    EnergyPair e = dirichlet_energies(conf, identity_weight(), phi);
    // flat oracle: int |grad phi|^2 du dv over the unit disc, phi radial:
    // |grad|^2 = 4 rho^2, integral = 2 pi * int_0^1 4 r^3 dr = 2 pi
    CHECK(e.unweighted == doctest::Approx(2 * oracles::kPi).epsilon(5e-4));
  }
}

TEST_CASE("energy sandwich for declared eccentricities") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> spread(1.1, 1.8);
  std::uniform_real_distribution<double> amp(0.2, 1.0);
  std::vector<Immersion> ims;
  ims.push_back(Immersion::from_callback(oracles::plane_chart, 49, 96));
  ims.push_back(Immersion::from_callback(oracles::sphere_cap(1.1), 49, 96));
  ims.push_back(Immersion::from_callback(oracles::catenoid_chart, 49, 96));
  int checked = 0;
  for (const Immersion& im : ims) {
    for (int t = 0; t < 7; ++t) {
      double s = spread(rng);
      WeightMatrix w;
      w.g0 = s - 1;
      w.G = [s](const Vec3&, const Vec3& Z) -> Mat3 {
        Vec3 zu = Z.normalized();
        Vec3 helper = std::abs(zu[0]) < 0.9 ? Vec3(1, 0, 0) : Vec3(0, 1, 0);
        Vec3 t1 = zu.cross(helper).normalized();
        Vec3 t2 = zu.cross(t1).normalized();
        return s * t1 * t1.transpose() + (1.0 / s) * t2 * t2.transpose() +
               zu * zu.transpose();
      };
      double a = amp(rng), b = amp(rng);
      auto phi = [a, b](double u, double v) {
        return (1 - u * u - v * v) * (a + b * u);
      };
      EnergyPair e = dirichlet_energies(im, w, phi);
      CHECK(e.weighted >= e.unweighted / (1 + w.g0) - 1e-9);
      CHECK(e.weighted <= e.unweighted * (1 + w.g0) + 1e-9);
      ++checked;
    }
  }
  CHECK(checked == 21);
}

TEST_SUITE_END();
