#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "areabound/io.hpp"
#include "oracles.hpp"

using namespace areabound;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int run(const std::string& args) {
  std::string cmd = std::string(AREABOUND_BIN) + " " + args + " > /dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("json round trips") {
  SUBCASE("domains") {
    for (auto d : {PlanarDomain::unit_square(17, 17), PlanarDomain::unit_disc(17, 17),
                   PlanarDomain::rectangle(0, 2, -1, 3, 9, 17)}) {
      PlanarDomain back = io::domain_from_json(io::domain_to_json(d));
      CHECK(back.kind_name() == d.kind_name());
      CHECK(back.nx() == d.nx());
      CHECK(back.area() == doctest::Approx(d.area()).epsilon(1e-15));
    }
  }
  SUBCASE("surfaces") {
    PlanarDomain d = PlanarDomain::unit_disc(17, 17);
    GraphSurface s = GraphSurface::from_components(
        d, {[](double x, double y) { return x - y; },
            [](double x, double y) { return x * y; }});
    GraphSurface back = io::surface_from_json(io::surface_to_json(s));
    CHECK(back.codim() == 2);
    CHECK(back.area() == doctest::Approx(s.area()).epsilon(1e-15));
  }
  SUBCASE("immersions") {
    Immersion im = Immersion::from_callback(oracles::sphere_cap(1.0), 17, 32);
    Immersion back = io::immersion_from_json(io::immersion_to_json(im));
    CHECK(back.nr() == im.nr());
    CHECK(back.area() == doctest::Approx(im.area()).epsilon(1e-14));
  }
  SUBCASE("malformed files carry a diagnostic") {
    CHECK_THROWS_WITH_AS((void)io::load_json_file("/tmp/areabound_missing.json"),
                         doctest::Contains("cannot open"), std::invalid_argument);
    CHECK_THROWS_AS((void)io::domain_from_json({{"kind", "hexagon"},
                                                {"nx", 9},
                                                {"ny", 9}}),
                    std::invalid_argument);
  }
  SUBCASE("domain spec shorthand") {
    CHECK(io::parse_domain_spec("unit_disc:33").kind_name() == "unit_disc");
    CHECK(io::parse_domain_spec("unit_square:17x33").ny() == 33);
    CHECK(io::parse_domain_spec("rect:0,2,0,3:17x17").area() ==
          doctest::Approx(6.0));
    CHECK_THROWS_AS((void)io::parse_domain_spec("hexagon:9"), std::invalid_argument);
  }
}

TEST_CASE("solve then verify round trip through files") {
  REQUIRE(run("solve --domain unit_square:33 --system minimal --codim 1 "
              "--boundary \"x*y\" --out /tmp/ab_cli_s.json") == 0);
  CHECK(run("verify --surface /tmp/ab_cli_s.json --bound eq3.22 "
            "--report /tmp/ab_cli_r.jsonl") == 0);
  CHECK(run("area --surface /tmp/ab_cli_s.json") == 0);
}

TEST_CASE("identical configs give byte-identical reports") {
  std::remove("/tmp/ab_det_1.jsonl");
  std::remove("/tmp/ab_det_2.jsonl");
  REQUIRE(run("solve --domain unit_disc:33 --system minimal --codim 2 "
              "--boundary \"x^2-y^2; 2*x*y\" --out /tmp/ab_det_s.json") == 0);
  REQUIRE(run("verify --surface /tmp/ab_det_s.json --bound eq4.38 "
              "--report /tmp/ab_det_1.jsonl") == 0);
  REQUIRE(run("verify --surface /tmp/ab_det_s.json --bound eq4.38 "
              "--report /tmp/ab_det_2.jsonl") == 0);
  CHECK(slurp("/tmp/ab_det_1.jsonl") == slurp("/tmp/ab_det_2.jsonl"));
  CHECK(!slurp("/tmp/ab_det_1.jsonl").empty());
}

TEST_CASE("hypothesis failures exit with status 2") {
  // dirichlet integrand has an unbounded gradient constant
  REQUIRE(run("solve --domain unit_square:33 --system dirichlet --codim 1 "
              "--integrand dirichlet --boundary \"0.1*x*y\" --out /tmp/ab_dir.json") == 0);
  CHECK(run("verify --surface /tmp/ab_dir.json --bound eq3.8 "
            "--integrand dirichlet") == 2);
}

TEST_CASE("geodesic-disc bounds run from immersion files") {
  Immersion im = Immersion::from_callback(oracles::plane_chart, 65, 128);
  io::save_json_file("/tmp/ab_plane.json", io::immersion_to_json(im));
  CHECK(run("verify --immersion /tmp/ab_plane.json --bound thm2.13 --mu 2 "
            "--radius 0.7 --g0 0") == 0);
  CHECK(run("verify --immersion /tmp/ab_plane.json --bound thm2.13 --mu 0.5 "
            "--radius 0.7") == 2);
  CHECK(run("verify --immersion /tmp/ab_plane.json --bound eq2.31 --radius 1.0") == 0);
  CHECK(run("stability --immersion /tmp/ab_plane.json") == 0);
  CHECK(run("geodesic --immersion /tmp/ab_plane.json --radius 0.5") == 0);
}

TEST_CASE("gradcheck flags broken derivative callbacks") {
  CHECK(run("gradcheck --integrand area") == 0);
  CHECK(run("gradcheck --integrand \"fermat:gamma=1+x^2\"") == 0);
  CHECK(run("gradcheck --integrand area-broken") == 1);
}

TEST_CASE("unconverged solves exit with status 1") {
  CHECK(run("solve --domain rect:-0.8,0.8,-0.8,0.8:33 --system dirichlet "
            "--integrand area --codim 1 --boundary \"log(cos(x)/cos(y))\" "
            "--max-iters 1 --out /tmp/ab_unconv.json") == 1);
}

TEST_CASE("malformed inputs produce a diagnostic failure") {
  std::ofstream("/tmp/ab_bad.json") << "{ not json";
  CHECK(run("verify --surface /tmp/ab_bad.json --bound eq3.22") == 1);
  CHECK(run("solve --domain hexagon:33 --system minimal --codim 1 --boundary 0") == 1);
}

TEST_CASE("the curated suite runs clean") {
  CHECK(run("suite --preset paper-desk --report /tmp/ab_suite.jsonl") == 0);
  CHECK(run("suite --preset nope") == 1);
}

TEST_SUITE_END();
