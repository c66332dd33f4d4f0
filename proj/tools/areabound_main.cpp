// areabound: solves variational graph systems and verifies area bounds.
#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "areabound/bounds.hpp"
#include "areabound/expr.hpp"
#include "areabound/io.hpp"
#include "areabound/stability.hpp"

using namespace areabound;
using nlohmann::json;

namespace {

int exit_code_for(Verdict v) {
  switch (v) {
    case Verdict::Holds: return 0;
    case Verdict::NotApplicable: return 2;
    case Verdict::Violated: return 1;
  }
  return 1;
}

std::vector<BoundaryFn> parse_boundary_list(const std::string& text, int m) {
  std::vector<BoundaryFn> out;
  std::istringstream is(text);
  std::string tok;
  while (std::getline(is, tok, ';')) {
    if (tok.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(Expression::parse(tok).as_function());
  }
  if (static_cast<int>(out.size()) != m)
    throw std::invalid_argument("boundary data: expected " + std::to_string(m) +
                                " components, got " + std::to_string(out.size()));
  return out;
}

std::string canonical_args(int argc, char** argv) {
  // output destinations do not change the computation, so they stay out of
  // the config digest
  std::string s;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    s += a;
    s += '\x1f';
    if (a == "--report" || a == "--csv" || a == "--out") ++i;
  }
  if (const char* t = std::getenv("AREABOUND_THREADS")) {
    s += "threads=";
    s += t;
  }
  return s;
}

void emit_report(const BoundReport& r, const std::string& report_path,
                 const std::string& csv_path, const std::string& digest) {
  json j = io::report_to_json(r, io::kVersion, digest);
  std::cout << j.dump(2) << "\n";
  if (!report_path.empty()) io::append_jsonl(report_path, j);
  if (!csv_path.empty()) {
    std::ofstream csv(csv_path, std::ios::app);
    csv << r.bound_id << "," << r.lhs << "," << r.rhs << "," << r.slack << ","
        << verdict_name(r.verdict) << "\n";
  }
}

struct VerifyInputs {
  std::string surface_path, immersion_path;
  std::string integrand = "area";
  std::string gamma_expr, rhs_expr, q_expr;
  double mu = 2.0, g0 = 0.0, k0_const = 0.0, radius = 0.5, rho_ball = 0.5;
  double m1_ball = 1.0, m2_ball = 1.0, nu = 0.25, h0 = -1.0;
  bool sharp = false;
  std::vector<double> center{0.0, 0.0};
  std::vector<double> ball_center;
  int chart_nrho = 96, chart_nphi = 192;
};

GraphSurface load_surface_file(const std::string& path, SolutionMeta& meta) {
  json j = io::load_json_file(path);
  GraphSurface s = io::surface_from_json(j);
  meta = io::solution_meta_from_json(j.value("solve", json::object()));
  return s;
}

BoundReport run_verify(const std::string& bound, const VerifyInputs& in) {
  auto load_immersion = [&]() {
    return io::immersion_from_json(io::load_json_file(in.immersion_path));
  };

  if (bound == "thm2.13" || bound == "eq2.14") {
    Immersion im = load_immersion();
    GeodesicPolarChart chart(im, in.center.at(0), in.center.at(1), in.radius,
                             in.chart_nrho, in.chart_nphi);
    auto q = in.q_expr.empty() ? std::function<double(double, double)>(
                                     [](double, double) { return 0.0; })
                               : Expression::parse(in.q_expr).as_function();
    return bound_mu_stable_disc(chart, in.mu, in.g0, q);
  }
  if (bound == "eq2.27") {
    Immersion im = load_immersion();
    GeodesicPolarChart chart(im, in.center.at(0), in.center.at(1), in.radius,
                             in.chart_nrho, in.chart_nphi);
    return bound_curvatura_integra(chart, im, in.k0_const);
  }
  if (bound == "eq2.31" || bound == "eq2.30") {
    Immersion im = load_immersion();
    return bound_boundary_curvature(im, in.k0_const, in.radius);
  }

  SolutionMeta meta;
  GraphSurface s = load_surface_file(in.surface_path, meta);

  if (bound == "eq2.25") {
    std::vector<double> x0 = in.ball_center;
    if (x0.empty()) x0.assign(2 + s.codim(), 0.0);
    return bound_outer_ball(s, x0, in.rho_ball, in.m1_ball, in.m2_ball);
  }

  RhsFn rhs = nullptr;
  if (!in.rhs_expr.empty()) {
    auto e = Expression::parse(in.rhs_expr).as_function();
    rhs = [e](const EvalPoint& pt, int) { return e(pt.x, pt.y); };
  }

  if (bound == "eq3.22") return bound_minimal_graph(s, meta);
  if (bound == "eq4.38") return bound_minimal_system(s, meta);
  if (bound == "eq4.21") {
    FermatWeight w = in.gamma_expr.empty()
                         ? FermatWeight::constant(1.0)
                         : FermatWeight::from_function(
                               Expression::parse(in.gamma_expr).as_function(),
                               s.domain());
    double h0 = in.h0;
    if (h0 < 0) {
      SpatialWeight g = SpatialWeight::lift_xy(w);
      h0 = h0_sampled(g, {&s});
    }
    return bound_fermat(s, meta, w, h0);
  }
  if (bound == "eq3.24" || bound == "eq3.25") {
    double h0 = in.h0 >= 0 ? in.h0 : 0.0;
    return bound_prescribed_H(s, meta, h0, bound == "eq3.25" || in.sharp);
  }

  // divergence-form bounds resolve hypothesis constants from the integrand
  // (certified where available, sampled otherwise)
  Integrand f = make_integrand(in.integrand, 1);
  std::optional<double> k0 = f.certified_k0;
  if (!k0) k0 = estimate_k0(f);
  double m1 = f.certified_m1 ? *f.certified_m1 : estimate_m1(f);
  bool a3 = f.certified_a3 || check_A3(f);
  if (bound == "eq3.8") return bound_divergence_graph(s, meta, rhs, k0, m1, a3);
  if (bound == "eq3.19") return bound_homogeneous(s, meta, k0, m1, a3);
  if (bound == "eq3.28")
    return bound_interior(s, meta, rhs, k0, m1, in.nu, nonneg_radial_check(f));
  throw std::invalid_argument("unknown bound id '" + bound + "'");
}

int run_suite(const std::string& preset, const std::string& report_path,
              const std::string& csv_path, const std::string& digest) {
  if (preset != "paper-desk")
    throw std::invalid_argument("unknown preset '" + preset + "'");

  struct Case {
    std::string name;
    Verdict expected;
    BoundReport report;
  };
  std::vector<Case> cases;
  auto push = [&](const std::string& name, Verdict expected, BoundReport r) {
    cases.push_back({name, expected, std::move(r)});
  };

  // bounds on solved graphs
  {
    PlanarDomain d = PlanarDomain::unit_square(65, 65);
    auto sol = solve_dirichlet(d, builtin_area(), nullptr,
                               [](double x, double y) { return x * y; });
    SolutionMeta meta{true, sol.converged, sol.residual};
    push("minimal graph, saddle data", Verdict::Holds,
         bound_minimal_graph(sol.surface, meta));
    push("interior estimate, saddle data", Verdict::Holds,
         bound_interior(sol.surface, meta, nullptr, 1.0, 1.0 / std::sqrt(8.0), 0.25,
                        true));
  }
  {
    PlanarDomain d = PlanarDomain::unit_disc(65, 65);
    RhsFn rhs = [](const EvalPoint&, int) { return 0.2; };
    auto sol = solve_dirichlet(d, builtin_area(), rhs,
                               [](double, double) { return 0.0; });
    SolutionMeta meta{true, sol.converged, sol.residual};
    push("prescribed curvature", Verdict::Holds,
         bound_prescribed_H(sol.surface, meta, 0.1, false));
    push("prescribed curvature, sharp variant", Verdict::Holds,
         bound_prescribed_H(sol.surface, meta, 0.1, true));
    push("general divergence form", Verdict::Holds,
         bound_divergence_graph(sol.surface, meta, rhs, 1.0, 1.0 / std::sqrt(8.0),
                                true));
  }
  // higher-codimension closed forms
  {
    PlanarDomain d = PlanarDomain::unit_disc(129, 129);
    GraphSurface s = GraphSurface::from_components(
        d, {[](double x, double y) { return x * x - y * y; },
            [](double x, double y) { return 2 * x * y; }});
    push("minimal system, holomorphic pair", Verdict::Holds,
         bound_minimal_system(s, {}));
    push("weighted system, constant weight", Verdict::Holds,
         bound_fermat(s, {}, FermatWeight::constant(1.0), 0.0));
  }
  // geodesic-disc bounds
  {
    Immersion im = Immersion::from_callback(
        [](double u, double v) { return Vec3(u, v, 0.0); }, 97, 192);
    GeodesicPolarChart chart(im, 0, 0, 0.8, 96, 192);
    auto q0 = [](double, double) { return 0.0; };
    push("stable geodesic disc, flat chart", Verdict::Holds,
         bound_mu_stable_disc(chart, 2.0, 0.0, q0));
    push("stability threshold gate", Verdict::NotApplicable,
         bound_mu_stable_disc(chart, 0.5, 0.0, q0));
    push("curvature integral, flat chart", Verdict::Holds,
         bound_curvatura_integra(chart, im, 0.0));
    push("boundary curvature, flat disc", Verdict::Holds,
         bound_boundary_curvature(im, 0.0, 1.0));
  }
  {
    PlanarDomain d = PlanarDomain::rectangle(-1, 1, -1, 1, 129, 129);
    GraphSurface s = GraphSurface::from_components(
        d, {[](double, double) { return 0.0; }});
    push("outer ball, flat piece", Verdict::Holds,
         bound_outer_ball(s, {0, 0, 0}, 0.5, 1.0, 1.0));
  }
  // hypothesis gates
  {
    PlanarDomain d = PlanarDomain::unit_square(33, 33);
    GraphSurface s = GraphSurface::from_components(
        d, {[](double x, double y) { return 0.1 * x * y; }});
    push("unbounded gradient constant gate", Verdict::NotApplicable,
         bound_divergence_graph(s, {}, nullptr, estimate_k0(builtin_dirichlet()),
                                estimate_m1(builtin_dirichlet()), true));
    PlanarDomain dd = PlanarDomain::unit_disc(65, 65);
    GraphSurface hs = GraphSurface::from_components(
        dd, {[](double x, double y) { return x * x - y * y; },
             [](double x, double y) { return 2 * x * y; }});
    FermatWeight steep;
    steep.gamma = [](double x, double) { return 11.0 + 10.0 * x; };
    steep.gamma0 = 1.0;
    steep.gamma1 = 21.0;
    steep.gamma2 = 10.0;
    push("smallness condition gate", Verdict::NotApplicable,
         bound_fermat(hs, {}, steep, 0.0));
  }

  int failures = 0;
  for (auto& c : cases) {
    bool ok = c.report.verdict == c.expected;
    if (!ok) ++failures;
    std::cout << (ok ? "[ ok ] " : "[FAIL] ") << c.name << ": verdict "
              << verdict_name(c.report.verdict) << " (expected "
              << verdict_name(c.expected) << "), slack " << c.report.slack << "\n";
    json j = io::report_to_json(c.report, io::kVersion, digest);
    j["case"] = c.name;
    j["expected"] = verdict_name(c.expected);
    if (!report_path.empty()) io::append_jsonl(report_path, j);
    if (!csv_path.empty()) {
      std::ofstream csv(csv_path, std::ios::app);
      csv << c.report.bound_id << "," << c.report.lhs << "," << c.report.rhs << ","
          << c.report.slack << "," << verdict_name(c.report.verdict) << "\n";
    }
  }
  std::cout << cases.size() - failures << "/" << cases.size()
            << " cases matched their expected verdicts\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"area bounds for minimal and weighted graph systems"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "solve a graph system");
  std::string domain_spec = "unit_square:65", system = "minimal", out_path;
  std::string boundary_text = "0", gamma_expr, integrand_name = "area", rhs_expr;
  std::string method = "newton";
  int codim = 1, max_iters = 60;
  double tol = 1e-10;
  solve->add_option("--domain", domain_spec, "domain spec or json path");
  solve->add_option("--system", system, "minimal|fermat|dirichlet");
  solve->add_option("--codim", codim, "number of height components");
  solve->add_option("--boundary", boundary_text, "';'-separated expressions in x,y");
  solve->add_option("--gamma", gamma_expr, "weight expression for fermat systems");
  solve->add_option("--integrand", integrand_name, "integrand for dirichlet solves");
  solve->add_option("--rhs", rhs_expr, "right-hand side expression in x,y");
  solve->add_option("--out", out_path, "surface output path (json)");
  solve->add_option("--tol", tol, "residual tolerance (sup norm)");
  solve->add_option("--max-iters", max_iters, "iteration cap");
  solve->add_option("--method", method, "newton|flow");

  auto* verify = app.add_subcommand("verify", "evaluate an area bound");
  VerifyInputs vin;
  std::string bound_id, report_path, csv_path;
  verify->add_option("--surface", vin.surface_path, "surface json");
  verify->add_option("--immersion", vin.immersion_path, "immersion json");
  verify->add_option("--bound", bound_id, "bound id (eq3.22, eq3.8, eq4.21, ...)")
      ->required();
  verify->add_option("--report", report_path, "jsonl report path (appended)");
  verify->add_option("--csv", csv_path, "csv projection path (appended)");
  verify->add_option("--integrand", vin.integrand, "integrand for hypothesis constants");
  verify->add_option("--gamma", vin.gamma_expr, "weight expression");
  verify->add_option("--rhs", vin.rhs_expr, "right-hand side expression");
  verify->add_option("--q", vin.q_expr, "stability shift expression");
  verify->add_option("--mu", vin.mu, "stability constant");
  verify->add_option("--g0", vin.g0, "weight eccentricity");
  verify->add_option("--K0", vin.k0_const, "curvature ceiling");
  verify->add_option("--radius", vin.radius, "geodesic radius");
  verify->add_option("--center", vin.center, "chart center (two parameters)")
      ->delimiter(',');
  verify->add_option("--ball-center", vin.ball_center, "outer ball center")
      ->delimiter(',');
  verify->add_option("--ball-radius", vin.rho_ball, "outer ball radius");
  verify->add_option("--m1", vin.m1_ball, "lower integrand bound");
  verify->add_option("--m2", vin.m2_ball, "upper integrand bound");
  verify->add_option("--nu", vin.nu, "interior offset");
  verify->add_option("--h0", vin.h0, "curvature bound override (default: sampled)");
  verify->add_flag("--sharp", vin.sharp, "use the sharp prescribed-curvature variant");

  auto* stab = app.add_subcommand("stability", "estimate the stability constant");
  std::string stab_immersion, stab_weight = "identity", stab_q;
  stab->add_option("--immersion", stab_immersion)->required();
  stab->add_option("--weight", stab_weight, "identity|norm|quad:a,b,c");
  stab->add_option("--q", stab_q, "stability shift expression");

  auto* geo = app.add_subcommand("geodesic", "shoot a geodesic polar chart");
  std::string geo_immersion;
  std::vector<double> geo_center{0.0, 0.0};
  double geo_radius = 0.5;
  int geo_nrho = 96, geo_nphi = 192;
  geo->add_option("--immersion", geo_immersion)->required();
  geo->add_option("--center", geo_center)->delimiter(',');
  geo->add_option("--radius", geo_radius);
  geo->add_option("--nrho", geo_nrho);
  geo->add_option("--nphi", geo_nphi);

  auto* grad = app.add_subcommand("gradcheck", "derivatives vs finite differences");
  std::string grad_integrand = "area";
  int grad_samples = 100, grad_codim = 1;
  std::uint64_t seed = 1;
  double grad_threshold = 1e-5;
  grad->add_option("--integrand", grad_integrand);
  grad->add_option("--samples", grad_samples);
  grad->add_option("--codim", grad_codim);
  grad->add_option("--seed", seed);
  grad->add_option("--threshold", grad_threshold);

  auto* area_cmd = app.add_subcommand("area", "area of a stored surface");
  std::string area_surface;
  area_cmd->add_option("--surface", area_surface)->required();

  auto* suite = app.add_subcommand("suite", "curated verification batch");
  std::string preset = "paper-desk", suite_report, suite_csv;
  suite->add_option("--preset", preset);
  suite->add_option("--report", suite_report, "jsonl report path (appended)");
  suite->add_option("--csv", suite_csv, "csv projection path (appended)");

  CLI11_PARSE(app, argc, argv);
  std::string digest = io::config_digest(canonical_args(argc, argv));

  try {
    if (*solve) {
      PlanarDomain d = io::parse_domain_spec(domain_spec);
      SolveConfig cfg;
      cfg.tolerance = tol;
      cfg.max_iterations = max_iters;
      cfg.method = method == "flow" ? SolveConfig::Method::GradientFlow
                                    : SolveConfig::Method::DampedNewton;
      std::vector<BoundaryFn> phi = parse_boundary_list(boundary_text, codim);

      SolveResult res = [&]() {
        if (system == "minimal") return solve_minimal_system(d, codim, phi, cfg);
        if (system == "fermat") {
          FermatWeight w = gamma_expr.empty()
                               ? FermatWeight::constant(1.0)
                               : FermatWeight::from_function(
                                     Expression::parse(gamma_expr).as_function(), d);
          return solve_fermat(d, codim, w, phi, cfg);
        }
        if (system == "dirichlet") {
          Integrand f = make_integrand(integrand_name, codim);
          RhsFn rhs = nullptr;
          if (!rhs_expr.empty()) {
            auto e = Expression::parse(rhs_expr).as_function();
            rhs = [e](const EvalPoint& pt, int) { return e(pt.x, pt.y); };
          }
          return solve_system(d, f, rhs, phi, cfg);
        }
        throw std::invalid_argument("unknown system '" + system + "'");
      }();

      json meta = io::solve_meta_to_json(res);
      meta["config_digest"] = digest;
      meta["version"] = io::kVersion;
      std::cout << meta.dump(2) << "\n";
      if (!out_path.empty()) {
        json j = io::surface_to_json(res.surface);
        j["solve"] = io::solve_meta_to_json(res);
        io::save_json_file(out_path, j);
      }
      return res.converged ? 0 : 1;
    }

    if (*verify) {
      BoundReport r = run_verify(bound_id, vin);
      emit_report(r, report_path, csv_path, digest);
      return exit_code_for(r.verdict);
    }

    if (*stab) {
      Immersion im = io::immersion_from_json(io::load_json_file(stab_immersion));
      WeightMatrix w = identity_weight();
      if (stab_weight.rfind("builtin:", 0) == 0) stab_weight = stab_weight.substr(8);
      if (stab_weight == "norm")
        w = weight_from_integrand(euclidean_norm_integrand());
      else if (stab_weight.rfind("quad:", 0) == 0) {
        std::istringstream is(stab_weight.substr(5));
        double a, b, c;
        char comma;
        is >> a >> comma >> b >> comma >> c;
        w = weight_from_integrand(quadratic_norm_integrand(Vec3(a, b, c)));
      } else if (stab_weight != "identity") {
        throw std::invalid_argument("unknown weight '" + stab_weight + "'");
      }
      auto q = stab_q.empty() ? std::function<double(double, double)>(
                                    [](double, double) { return 0.0; })
                              : Expression::parse(stab_q).as_function();
      auto mu = mu_stability_estimate(im, w, q);
      json out;
      out["unbounded"] = !mu.has_value();
      if (mu) out["mu_estimate"] = *mu;
      out["g0"] = w.g0;
      out["version"] = io::kVersion;
      out["config_digest"] = digest;
      std::cout << out.dump(2) << "\n";
      return 0;
    }

    if (*geo) {
      Immersion im = io::immersion_from_json(io::load_json_file(geo_immersion));
      GeodesicPolarChart chart(im, geo_center.at(0), geo_center.at(1), geo_radius,
                               geo_nrho, geo_nphi);
      json out;
      out["radius"] = chart.radius();
      out["area"] = chart.area();
      out["L_r"] = chart.L(chart.n_rho());
      out["bonnet_gauss_defect"] = chart.bonnet_gauss_defect(im, chart.n_rho());
      out["version"] = io::kVersion;
      out["config_digest"] = digest;
      std::cout << out.dump(2) << "\n";
      return 0;
    }

    if (*grad) {
      Integrand f = make_integrand(grad_integrand, grad_codim);
      double dev = gradcheck(f, grad_samples, seed);
      json out;
      out["integrand"] = grad_integrand;
      out["samples"] = grad_samples;
      out["max_relative_deviation"] = dev;
      out["version"] = io::kVersion;
      out["config_digest"] = digest;
      std::cout << out.dump(2) << "\n";
      return dev <= grad_threshold ? 0 : 1;
    }

    if (*area_cmd) {
      GraphSurface s = io::surface_from_json(io::load_json_file(area_surface));
      json out;
      out["area"] = s.area();
      out["domain_area"] = s.domain().area();
      out["codim"] = s.codim();
      std::cout << out.dump(2) << "\n";
      return 0;
    }

    if (*suite) return run_suite(preset, suite_report, suite_csv, digest);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
