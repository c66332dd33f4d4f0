#include <doctest.h>

#include <cmath>

#include "areabound/geodesic.hpp"
#include "areabound/stability.hpp"
#include "oracles.hpp"

using namespace areabound;
using oracles::kPi;

TEST_SUITE_BEGIN("geodesic");

TEST_CASE("plane charts reproduce euclidean polar coordinates") {
  Immersion im = Immersion::from_callback(oracles::plane_chart, 97, 192);
  GeodesicPolarChart chart(im, 0, 0, 0.8, 96, 192);
  for (int i = 1; i <= chart.n_rho(); ++i) {
    double rho = 0.8 * i / chart.n_rho();
    for (int k = 0; k < chart.n_phi(); ++k) {
      CHECK(std::abs(chart.P(i, k) - rho * rho) < 1e-6);
      auto [uu, vv] = chart.ray_point(i, k);
      CHECK(std::hypot(uu, vv) == doctest::Approx(rho).epsilon(1e-9));
    }
  }
  CHECK(std::abs(chart.area() - kPi * 0.64) < 1e-6);
}

TEST_CASE("sphere charts have P = sin^2 rho") {
  Immersion im = Immersion::from_callback(oracles::sphere_cap(1.3), 97, 192);
  GeodesicPolarChart chart(im, 0, 0, 1.0, 96, 192);
  for (int i = 1; i <= chart.n_rho(); ++i) {
    double rho = 1.0 * i / chart.n_rho();
    for (int k = 0; k < chart.n_phi(); ++k)
      CHECK(std::abs(chart.P(i, k) - std::sin(rho) * std::sin(rho)) < 1e-4);
  }
  CHECK(std::abs(chart.area() - 2 * kPi * (1 - std::cos(1.0))) < 1e-4);
}

TEST_CASE("the area element limits hold at small radius") {
  for (auto make : {+[]() {
         return Immersion::from_callback(oracles::plane_chart, 97, 192);
       },
                    +[]() {
                      return Immersion::from_callback(oracles::sphere_cap(1.3), 97, 192);
                    },
                    +[]() {
                      return Immersion::from_callback(oracles::catenoid_chart, 97, 192);
                    }}) {
    Immersion im = make();
    GeodesicPolarChart chart(im, 0, 0, 0.6, 96, 192);
    double rho1 = chart.drho();
    for (int k = 0; k < chart.n_phi(); ++k) {
      CHECK(chart.P(1, k) > 0);
      CHECK(std::abs(chart.sqrtP(1, k) / rho1 - 1.0) < 1e-3);
    }
    CHECK(std::abs(chart.L(1) / (2 * kPi * rho1) - 1.0) < 1e-3);
  }
}

TEST_CASE("rays that exit the parameter disc raise an error naming the angle") {
  Immersion im = Immersion::from_callback(oracles::plane_chart, 97, 192);
  CHECK_THROWS_WITH_AS(GeodesicPolarChart(im, 0.5, 0.0, 0.8, 48, 96),
                       doctest::Contains("exits the parameter disc"),
                       std::invalid_argument);
}

TEST_CASE("bonnet-gauss defect on the plane") {
  Immersion im = Immersion::from_callback(oracles::plane_chart, 97, 512);
  GeodesicPolarChart chart(im, 0, 0, 0.8, 96, 512);
  CHECK(std::abs(chart.bonnet_gauss_defect(im, chart.n_rho())) < 1e-8);
  CHECK(std::abs(chart.bonnet_gauss_defect(im, chart.n_rho() / 2)) < 1e-8);
}

TEST_CASE("bonnet-gauss defect on the sphere cap at rho = 1") {
  Immersion im = Immersion::from_callback(oracles::sphere_cap(1.3), 97, 192);
  GeodesicPolarChart chart(im, 0, 0, 1.0, 96, 192);
  // closed forms: circumference term 2 pi cos(1), curvature term 2 pi (1 - cos 1)
  double defect = chart.bonnet_gauss_defect(im, 1.0);
  CHECK(std::abs(defect) < 1e-3);
}

TEST_CASE("bonnet-gauss defect on the catenoid patch") {
  Immersion im = Immersion::from_callback(oracles::catenoid_chart, 97, 192);
  GeodesicPolarChart chart(im, 0, 0, 0.5, 96, 192);
  CHECK(std::abs(chart.bonnet_gauss_defect(im, 0.5)) < 1e-3);
}

TEST_CASE("the defect shrinks by at least half under refinement") {
  Immersion coarse = Immersion::from_callback(oracles::catenoid_chart, 49, 96);
  Immersion fine = Immersion::from_callback(oracles::catenoid_chart, 97, 192);
  GeodesicPolarChart c1(coarse, 0, 0, 0.5, 48, 96);
  GeodesicPolarChart c2(fine, 0, 0, 0.5, 96, 192);
  double d1 = std::abs(c1.bonnet_gauss_defect(coarse, 48));
  double d2 = std::abs(c2.bonnet_gauss_defect(fine, 96));
  CHECK(d2 <= std::max(d1 / 2, 5e-9));
}

TEST_CASE("stability estimator") {
  SUBCASE("flat surfaces with q = 0 are unbounded") {
    Immersion im = Immersion::from_callback(oracles::plane_chart, 49, 96);
    CHECK(!mu_stability_estimate(im, identity_weight(),
                                 [](double, double) { return 0.0; })
               .has_value());
  }
  SUBCASE("minimal graph patches sit above the stable threshold") {
    Immersion im = Immersion::from_callback(oracles::catenoid_graph(2.0, 0.8), 49, 96);
    auto mu = mu_stability_estimate(im, identity_weight(),
                                    [](double, double) { return 0.0; });
    REQUIRE(mu.has_value());
    CHECK(*mu >= 1.95);
  }
  SUBCASE("raising q can only lower the estimate") {
    Immersion im = Immersion::from_callback(oracles::catenoid_graph(2.0, 0.8), 49, 96);
    auto mu0 = mu_stability_estimate(im, identity_weight(),
                                     [](double, double) { return 0.0; });
    auto mu1 = mu_stability_estimate(im, identity_weight(),
                                     [](double, double) { return 0.3; });
    REQUIRE(mu0.has_value());
    REQUIRE(mu1.has_value());
    CHECK(*mu1 <= *mu0 + 1e-9);
  }
  SUBCASE("negative q - K is rejected") {
    Immersion im = Immersion::from_callback(oracles::plane_chart, 33, 64);
    CHECK_THROWS_AS((void)mu_stability_estimate(im, identity_weight(),
                                                [](double, double) { return -1.0; }),
                    std::invalid_argument);
  }
}

TEST_SUITE_END();
