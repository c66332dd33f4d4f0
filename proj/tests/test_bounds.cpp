#include <doctest.h>

#include <cmath>

#include "areabound/bounds.hpp"
#include "areabound/stability.hpp"
#include "oracles.hpp"

using namespace areabound;
using oracles::kPi;

namespace {

GraphSurface holomorphic_graph(const PlanarDomain& d, int n) {
  return GraphSurface::from_components(
      d, {[n](double x, double y) {
            return std::pow(std::hypot(x, y), n) * std::cos(n * std::atan2(y, x));
          },
          [n](double x, double y) {
            return std::pow(std::hypot(x, y), n) * std::sin(n * std::atan2(y, x));
          }});
}

SolutionMeta solved_meta(const SolveResult& r) {
  return SolutionMeta{true, r.converged, r.residual};
}

}  // namespace

TEST_SUITE_BEGIN("bounds");

TEST_CASE("stable geodesic disc bound on the flat chart") {
  Immersion im = Immersion::from_callback(oracles::plane_chart, 97, 192);
  GeodesicPolarChart chart(im, 0, 0, 0.8, 96, 192);
  auto q0 = [](double, double) { return 0.0; };

  SUBCASE("mu = 2 leaves one third of the area as slack") {
    BoundReport r = bound_mu_stable_disc(chart, 2.0, 0.0, q0);
    CHECK(r.verdict == Verdict::Holds);
    CHECK(r.bound_id == "thm2.13");
    CHECK(std::abs(r.slack - kPi * 0.64 / 3.0) < 1e-3);
    CHECK(std::abs(r.lhs - kPi * 0.64) < 1e-4);
  }
  SUBCASE("mu at the threshold is not applicable, never violated") {
    BoundReport r = bound_mu_stable_disc(chart, 0.5, 0.0, q0);
    CHECK(r.verdict == Verdict::NotApplicable);
  }
  SUBCASE("negative q switches to the negative-part variant") {
    BoundReport r = bound_mu_stable_disc(chart, 2.0, 0.0,
                                         [](double, double) { return -1.0; });
    CHECK(r.bound_id == "eq2.14");
    CHECK(r.verdict == Verdict::Holds);
    // rhs of the variant on the flat chart in closed form
    double rr = 0.64;
    double expect_slack = (4.0 / 3.0) * kPi * rr + (2.0 / 3.0) * rr * (kPi * rr) - kPi * rr;
    CHECK(std::abs(r.slack - expect_slack) < 1e-3);
  }
}

TEST_CASE("constant-mean-curvature variant arithmetic") {
  CHECK(bound_cmc(kPi, 1.0, 1.0, 0.0).rhs == doctest::Approx(2 * kPi));
  CHECK(bound_cmc(kPi, 1.0, 2.0, 0.0).rhs == doctest::Approx(4 * kPi / 3));
  BoundReport r = bound_cmc(kPi, 1.0, 2.0, 0.0);
  CHECK(r.verdict == Verdict::Holds);
  CHECK(r.slack == doctest::Approx(kPi / 3));
  CHECK(bound_cmc(kPi, 1.0, 0.4, 0.0).verdict == Verdict::NotApplicable);
}

TEST_CASE("outer-ball bound") {
  SUBCASE("flat disc through the center") {
    PlanarDomain d = PlanarDomain::rectangle(-1, 1, -1, 1, 257, 257);
    GraphSurface s = GraphSurface::from_components(d, {[](double, double) { return 0.0; }});
    BoundReport r = bound_outer_ball(s, {0, 0, 0}, 0.5, 1.0, 1.0);
    CHECK(r.verdict == Verdict::Holds);
    CHECK(std::abs(r.slack - 3 * kPi * 0.25) < 1e-3);
  }
  SUBCASE("minimal graph piece keeps positive slack") {
    PlanarDomain d = PlanarDomain::rectangle(-0.8, 0.8, -0.8, 0.8, 129, 129);
    GraphSurface s = GraphSurface::from_components(
        d, {[](double x, double y) { return oracles::scherk(x, y); }});
    BoundReport r = bound_outer_ball(s, {0, 0, 0}, 0.5, 1.0, 1.0);
    CHECK(r.verdict == Verdict::Holds);
    CHECK(r.slack > 0);
  }
  SUBCASE("the rhs scales linearly in m2/m1") {
    PlanarDomain d = PlanarDomain::rectangle(-1, 1, -1, 1, 65, 65);
    GraphSurface s = GraphSurface::from_components(d, {[](double, double) { return 0.0; }});
    BoundReport r1 = bound_outer_ball(s, {0, 0, 0}, 0.5, 1.0, 1.0);
    BoundReport r3 = bound_outer_ball(s, {0, 0, 0}, 0.5, 1.0, 3.0);
    CHECK(r3.rhs == doctest::Approx(3 * r1.rhs).epsilon(1e-12));
  }
  SUBCASE("ordering hypothesis is audited") {
    PlanarDomain d = PlanarDomain::rectangle(-1, 1, -1, 1, 33, 33);
    GraphSurface s = GraphSurface::from_components(d, {[](double, double) { return 0.0; }});
    CHECK(bound_outer_ball(s, {0, 0, 0}, 0.5, 2.0, 1.0).verdict ==
          Verdict::NotApplicable);
  }
}

TEST_CASE("curvature-integral bound") {
  SUBCASE("flat chart with K0 = 0 is the equality case") {
    Immersion im = Immersion::from_callback(oracles::plane_chart, 97, 192);
    GeodesicPolarChart chart(im, 0, 0, 0.8, 96, 192);
    BoundReport r = bound_curvatura_integra(chart, im, 0.0);
    CHECK(r.verdict == Verdict::Holds);
    CHECK(std::abs(r.slack) < 1e-6);
  }
  SUBCASE("sphere cap at K0 = 1") {
    Immersion im = Immersion::from_callback(oracles::sphere_cap(1.3), 97, 192);
    GeodesicPolarChart chart(im, 0, 0, 1.0, 96, 192);
    BoundReport r = bound_curvatura_integra(chart, im, 1.0);
    CHECK(r.verdict == Verdict::Holds);
    double expect = kPi - 2 * kPi * (1 - std::cos(1.0));
    CHECK(std::abs(r.slack - expect) < 1e-3);
  }
  SUBCASE("minimal catenoid chart with K0 = 0") {
    Immersion im = Immersion::from_callback(oracles::catenoid_chart, 97, 192);
    GeodesicPolarChart chart(im, 0, 0, 0.5, 96, 192);
    BoundReport r = bound_curvatura_integra(chart, im, 0.0);
    CHECK(r.verdict == Verdict::Holds);
    CHECK(r.slack >= 0);
  }
  SUBCASE("curvature exceeding K0 gates the bound") {
    Immersion im = Immersion::from_callback(oracles::sphere_cap(1.3), 97, 192);
    GeodesicPolarChart chart(im, 0, 0, 1.0, 96, 192);
    BoundReport r = bound_curvatura_integra(chart, im, 0.5);
    CHECK(r.verdict == Verdict::NotApplicable);
    CHECK(r.hypotheses[0].value > 0.5);  // max sampled K reported
  }
}

TEST_CASE("boundary-curvature bound") {
  SUBCASE("flat unit disc is the equality case") {
    Immersion im = Immersion::from_callback(oracles::plane_chart, 97, 256);
    BoundReport r = bound_boundary_curvature(im, 0.0, 1.0);
    CHECK(r.verdict == Verdict::Holds);
    CHECK(std::abs(r.slack) < 1e-6);
  }
  SUBCASE("sphere cap under the general form") {
    double rho0 = 0.8;
    Immersion im = Immersion::from_callback(oracles::sphere_cap(rho0), 97, 192);
    BoundReport r = bound_boundary_curvature(im, 1.0, rho0);
    CHECK(r.bound_id == "eq2.30");
    CHECK(r.verdict == Verdict::Holds);
    // closed forms: area 2 pi (1 - cos rho0), boundary integral 2 pi / sin(rho0)
    // times length 2 pi sin(rho0)
    double lhs = (1 - 0.5 * rho0 * rho0) * 2 * kPi * (1 - std::cos(rho0));
    double rhs = 0.5 * rho0 * rho0 * 2 * kPi;
    CHECK(std::abs(r.slack - (rhs - lhs)) < 1e-3);
  }
  SUBCASE("scherk patch with K0 = 0") {
    auto zeta = [](double x, double y) { return oracles::scherk(x, y); };
    Immersion im = Immersion::from_callback(oracles::graph_chart(zeta, 0.8), 97, 192);
    // geodesic radius of the patch boundary from the center, measured by a chart
    BoundReport r = bound_boundary_curvature(im, 0.0, 0.9);
    CHECK(r.verdict == Verdict::Holds);
    CHECK(r.slack >= 0);
  }
  SUBCASE("K0 r^2 >= 2 is not applicable") {
    Immersion im = Immersion::from_callback(oracles::sphere_cap(0.8), 49, 96);
    CHECK(bound_boundary_curvature(im, 4.0, 0.8).verdict == Verdict::NotApplicable);
  }
}

TEST_CASE("divergence-form bound on the flat graph is the equality case") {
  PlanarDomain d = PlanarDomain::unit_square(65, 65);
  GraphSurface s = GraphSurface::from_components(d, {[](double, double) { return 0.0; }});
  BoundReport r = bound_divergence_graph(s, {}, nullptr, 1.0, 1.0 / std::sqrt(8.0), true);
  CHECK(r.verdict == Verdict::Holds);
  CHECK(std::abs(r.slack) < 1e-12);
}

TEST_CASE("divergence-form bound on a solved minimal graph") {
  PlanarDomain d = PlanarDomain::unit_square(65, 65);
  auto sol = solve_dirichlet(d, builtin_area(), nullptr,
                             [](double x, double y) { return x * y; });
  REQUIRE(sol.converged);
  BoundReport r = bound_divergence_graph(sol.surface, solved_meta(sol), nullptr, 1.0,
                                         1.0 / std::sqrt(8.0), true);
  CHECK(r.verdict == Verdict::Holds);
  CHECK(r.slack >= 0);
}

TEST_CASE("unbounded gradient constants gate the bound") {
  PlanarDomain d = PlanarDomain::unit_square(33, 33);
  GraphSurface s = GraphSurface::from_components(
      d, {[](double x, double y) { return 0.1 * x * y; }});
  BoundReport r = bound_divergence_graph(s, {}, nullptr, std::nullopt, 1.0, true);
  CHECK(r.verdict == Verdict::NotApplicable);
}

TEST_CASE("non-converged solutions gate the bound") {
  PlanarDomain d = PlanarDomain::unit_square(33, 33);
  GraphSurface s = GraphSurface::from_components(
      d, {[](double x, double y) { return 0.1 * x * y; }});
  SolutionMeta meta{true, false, 0.5};
  BoundReport r = bound_divergence_graph(s, meta, nullptr, 1.0, 0.35, true);
  CHECK(r.verdict == Verdict::NotApplicable);
}

TEST_CASE("rhs of the divergence bound is monotone in each constant") {
  double base = divergence_rhs(1.0, 4.0, 0.5, 0.4, 0.2, 1.0, 0.35);
  CHECK(divergence_rhs(1.0, 4.0, 0.6, 0.4, 0.2, 1.0, 0.35) >= base);
  CHECK(divergence_rhs(1.0, 4.0, 0.5, 0.4, 0.3, 1.0, 0.35) >= base);
  CHECK(divergence_rhs(1.0, 4.0, 0.5, 0.4, 0.2, 1.2, 0.35) >= base);
  CHECK(divergence_rhs(1.0, 4.0, 0.5, 0.4, 0.2, 1.0, 0.30) >= base);
}

TEST_CASE("the L1 variant of the rhs is recorded") {
  PlanarDomain d = PlanarDomain::unit_disc(65, 65);
  RhsFn rhs = [](const EvalPoint&, int) { return 0.2; };
  auto sol = solve_dirichlet(d, builtin_area(), rhs, [](double, double) { return 0.0; });
  REQUIRE(sol.converged);
  BoundReport r = bound_divergence_graph(sol.surface, solved_meta(sol), rhs, 1.0,
                                         1.0 / std::sqrt(8.0), true);
  REQUIRE(r.inputs.count("rhs_l1_variant") == 1);
  // |R| integrates below its sup times the area, so the variant is tighter here
  CHECK(r.inputs.at("rhs_l1_variant") <= r.rhs + 1e-12);
}

TEST_CASE("homogeneous and minimal-graph bounds") {
  PlanarDomain d = PlanarDomain::rectangle(-0.8, 0.8, -0.8, 0.8, 65, 65);
  auto sol = solve_dirichlet(d, builtin_area(), nullptr,
                             [](double x, double y) { return oracles::scherk(x, y); });
  REQUIRE(sol.converged);
  BoundReport hom = bound_homogeneous(sol.surface, solved_meta(sol), 1.0,
                                      1.0 / std::sqrt(8.0), true);
  CHECK(hom.bound_id == "eq3.19");
  CHECK(hom.verdict == Verdict::Holds);
  BoundReport min = bound_minimal_graph(sol.surface, solved_meta(sol));
  CHECK(min.bound_id == "eq3.22");
  CHECK(min.verdict == Verdict::Holds);
  CHECK(min.slack >= 0);
  // certified constants agree with the general formula at the same inputs
  CHECK(min.rhs == doctest::Approx(hom.rhs).epsilon(1e-12));
}

TEST_CASE("prescribed-curvature bounds and the sharp variant ordering") {
  PlanarDomain d = PlanarDomain::unit_disc(65, 65);
  double h0 = 0.1;
  RhsFn rhs = [h0](const EvalPoint&, int) { return 2 * h0; };
  auto sol = solve_dirichlet(d, builtin_area(), rhs, [](double, double) { return 0.0; });
  REQUIRE(sol.converged);
  BoundReport coarse = bound_prescribed_H(sol.surface, solved_meta(sol), h0, false);
  BoundReport sharp = bound_prescribed_H(sol.surface, solved_meta(sol), h0, true);
  CHECK(coarse.bound_id == "eq3.24");
  CHECK(sharp.bound_id == "eq3.25");
  CHECK(coarse.verdict == Verdict::Holds);
  CHECK(sharp.verdict == Verdict::Holds);
  CHECK(sharp.rhs <= coarse.rhs + 1e-12);
  SUBCASE("doubling h0 moves the rhs affinely") {
    BoundReport twice = bound_prescribed_H(sol.surface, solved_meta(sol), 2 * h0, false);
    double delta1 = twice.rhs - coarse.rhs;
    BoundReport thrice = bound_prescribed_H(sol.surface, solved_meta(sol), 3 * h0, false);
    CHECK(thrice.rhs - twice.rhs == doctest::Approx(delta1).epsilon(1e-10));
  }
  SUBCASE("h0 = 0 reduces to the minimal-graph rhs") {
    BoundReport zero = bound_prescribed_H(sol.surface, solved_meta(sol), 0.0, false);
    BoundReport min = bound_minimal_graph(sol.surface, solved_meta(sol));
    CHECK(zero.rhs == doctest::Approx(min.rhs).epsilon(1e-12));
  }
}

TEST_CASE("interior estimate") {
  PlanarDomain d = PlanarDomain::unit_square(65, 65);
  SUBCASE("flat graph keeps the inner area below the rhs") {
    GraphSurface s = GraphSurface::from_components(d, {[](double, double) { return 0.0; }});
    BoundReport r = bound_interior(s, {}, nullptr, 1.0, 0.35, 0.25, true);
    CHECK(r.verdict == Verdict::Holds);
    CHECK(r.lhs <= d.area() + 1e-12);
  }
  SUBCASE("solved graph with positive offset") {
    auto sol = solve_dirichlet(d, builtin_area(), nullptr,
                               [](double x, double y) { return x * y; });
    REQUIRE(sol.converged);
    BoundReport r = bound_interior(sol.surface, solved_meta(sol), nullptr, 1.0,
                                   1.0 / std::sqrt(8.0), 0.25, true);
    CHECK(r.verdict == Verdict::Holds);
    CHECK(r.slack >= 0);
  }
  SUBCASE("the rhs grows as the offset shrinks") {
    GraphSurface s = GraphSurface::from_components(
        d, {[](double x, double y) { return 0.2 * x * y; }});
    double r1 = bound_interior(s, {}, nullptr, 1.0, 0.35, 0.10, true).rhs;
    double r2 = bound_interior(s, {}, nullptr, 1.0, 0.35, 0.20, true).rhs;
    CHECK(r1 > r2);
  }
  SUBCASE("radial nonnegativity gates the bound") {
    GraphSurface s = GraphSurface::from_components(d, {[](double, double) { return 0.0; }});
    CHECK(bound_interior(s, {}, nullptr, 1.0, 0.35, 0.25, false).verdict ==
          Verdict::NotApplicable);
  }
  SUBCASE("offsets beyond the inradius are an error") {
    GraphSurface s = GraphSurface::from_components(d, {[](double, double) { return 0.0; }});
    CHECK_THROWS_AS((void)bound_interior(s, {}, nullptr, 1.0, 0.35, 0.6, true),
                    std::invalid_argument);
  }
}

TEST_CASE("fermat-type bound") {
  SUBCASE("flat graphs are the equality case") {
    PlanarDomain d = PlanarDomain::unit_disc(65, 65);
    GraphSurface s = GraphSurface::from_components(
        d, {[](double, double) { return 0.0; }, [](double, double) { return 0.0; }});
    BoundReport r = bound_fermat(s, {}, FermatWeight::constant(1.0), 0.0);
    CHECK(r.verdict == Verdict::Holds);
    CHECK(std::abs(r.slack) < 1e-12);
    CHECK(r.inputs.at("lambda") == 1.0);
  }
  SUBCASE("constant weight on the holomorphic pair hits the closed forms") {
    PlanarDomain d = PlanarDomain::unit_disc(257, 257);
    GraphSurface s = holomorphic_graph(d, 2);
    BoundReport r = bound_fermat(s, {}, FermatWeight::constant(1.0), 0.0);
    CHECK(r.verdict == Verdict::Holds);
    CHECK(r.inputs.at("lambda") == 1.0);
    CHECK(std::abs(r.lhs - 3 * kPi) < 1e-2);
    CHECK(std::abs(r.rhs - 21 * kPi) < 1e-2);
  }
  SUBCASE("one component forces lambda to one and drops the cross term") {
    PlanarDomain d = PlanarDomain::unit_square(65, 65);
    GraphSurface s = GraphSurface::from_components(
        d, {[](double x, double y) { return 0.2 * x + 0.1 * y; }});
    FermatWeight w;
    w.gamma = [](double x, double) { return 2.0 + x; };
    w.gamma0 = 2.0;
    w.gamma1 = 3.0;
    w.gamma2 = 1.0;
    BoundReport r = bound_fermat(s, {}, w, 0.25);
    CHECK(r.inputs.at("lambda") == 1.0);
    double expect_rhs = d.area() + d.boundary_length() * s.boundary_sup(0) +
                        2 * 0.25 * d.area() * s.domain_sup(0);
    CHECK(r.rhs == doctest::Approx(expect_rhs).epsilon(1e-12));
  }
  SUBCASE("a failed smallness condition is not applicable") {
    PlanarDomain d = PlanarDomain::unit_disc(65, 65);
    GraphSurface s = holomorphic_graph(d, 2);
    FermatWeight w;
    w.gamma = [](double x, double) { return 11.0 + 10.0 * x; };
    w.gamma0 = 1.0;
    w.gamma1 = 21.0;
    w.gamma2 = 10.0;
    BoundReport r = bound_fermat(s, {}, w, 0.0);
    CHECK(r.inputs.at("lambda") < 0);
    CHECK(r.verdict == Verdict::NotApplicable);
  }
}

TEST_CASE("minimal-system bound closed forms") {
  PlanarDomain d = PlanarDomain::unit_disc(257, 257);
  SUBCASE("flat") {
    GraphSurface s = GraphSurface::from_components(
        d, {[](double, double) { return 0.0; }, [](double, double) { return 0.0; }});
    BoundReport r = bound_minimal_system(s, {});
    CHECK(std::abs(r.slack) < 1e-12);
  }
  SUBCASE("z^2") {
    BoundReport r = bound_minimal_system(holomorphic_graph(d, 2), {});
    CHECK(r.verdict == Verdict::Holds);
    CHECK(std::abs(r.lhs - 3 * kPi) < 1e-2);
    CHECK(std::abs(r.rhs - 21 * kPi) < 1e-2);
  }
  SUBCASE("z^3") {
    BoundReport r = bound_minimal_system(holomorphic_graph(d, 3), {});
    CHECK(r.verdict == Verdict::Holds);
    CHECK(std::abs(r.lhs - 4 * kPi) < 1e-2);
    CHECK(std::abs(r.rhs - 29 * kPi) < 1e-2);
  }
}

TEST_CASE("stability estimate feeds the geodesic disc bound") {
  Immersion im = Immersion::from_callback(oracles::catenoid_graph(2.0, 0.8), 65, 128);
  auto mu = mu_stability_estimate(im, identity_weight(),
                                  [](double, double) { return 0.0; });
  REQUIRE(mu.has_value());
  CHECK(*mu >= 1.95);
  GeodesicPolarChart chart(im, 0, 0, 0.35, 64, 128);
  BoundReport r = bound_mu_stable_disc(chart, *mu, 0.0, [](double, double) { return 0.0; });
  CHECK(r.verdict == Verdict::Holds);
  CHECK(r.slack >= 0);
}

TEST_CASE("reports expose hypotheses, inputs, and grid metadata") {
  PlanarDomain d = PlanarDomain::unit_square(33, 33);
  GraphSurface s = GraphSurface::from_components(d, {[](double, double) { return 0.0; }});
  BoundReport r = bound_minimal_graph(s, {});
  CHECK(r.grid.at("nx") == 33);
  CHECK(r.inputs.count("k0") == 1);
  CHECK(r.inputs.count("m1") == 1);
  for (const auto& h : r.hypotheses) CHECK(h.satisfied);
}

TEST_CASE("curvature-bound overrides are recorded and used") {
  PlanarDomain d = PlanarDomain::unit_disc(65, 65);
  GraphSurface s = GraphSurface::from_components(
      d, {[](double x, double y) { return 0.1 * x * y; },
          [](double x, double y) { return 0.05 * (x - y); }});
  FermatWeight w = FermatWeight::constant(1.0);
  BoundReport sampled = bound_fermat(s, {}, w, 0.25);
  BoundReport overridden = bound_fermat(s, {}, w, 0.3);
  CHECK(sampled.inputs.at("h0") == 0.25);
  CHECK(overridden.inputs.at("h0") == 0.3);
  double m = 2, area = d.area();
  CHECK(overridden.rhs - sampled.rhs ==
        doctest::Approx(2 * m * 0.05 * area * sampled.inputs.at("max_sup_domain"))
            .epsilon(1e-10));
}

TEST_SUITE_END();
