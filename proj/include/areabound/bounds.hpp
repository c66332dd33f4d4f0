#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "areabound/domain.hpp"
#include "areabound/geodesic.hpp"
#include "areabound/graph_surface.hpp"
#include "areabound/immersion.hpp"
#include "areabound/integrands.hpp"
#include "areabound/solver.hpp"

namespace areabound {

enum class Verdict { Holds, Violated, NotApplicable };

std::string verdict_name(Verdict v);

struct Hypothesis {
  std::string name;
  bool satisfied = true;
  double value = 0;
};

/// One verified inequality instance. The slack is reported even when a
/// gating hypothesis fails, but the verdict is then NotApplicable, never
/// Violated.
struct BoundReport {
  std::string bound_id;
  double lhs = 0, rhs = 0, slack = 0;
  Verdict verdict = Verdict::Holds;
  std::vector<Hypothesis> hypotheses;
  std::map<std::string, double> inputs;
  std::map<std::string, double> grid;
  std::string note;

  void finalize();  // slack = rhs - lhs; verdict from hypotheses and slack
};

/// Solver provenance attached to a surface fed into a bound; surfaces
/// sampled from closed-form critical points use the default.
struct SolutionMeta {
  bool solved = false;
  bool converged = true;
  double residual = 0;
};

// ---- geodesic-disc bounds ----------------------------------------------------

/// Stable geodesic disc growth: area <= 2 pi mu r^2 / (2 mu - (1+g0)),
/// requiring mu > (1+g0)/2 and q >= 0. When q dips negative the variant
/// with the negative part q^- is evaluated instead (bound_id "eq2.14").
BoundReport bound_mu_stable_disc(const GeodesicPolarChart& chart, double mu,
                                 double g0,
                                 const std::function<double(double, double)>& q);

/// Constant-mean-curvature special case: rhs = 2 pi mu r^2/(2 mu - 1),
/// lhs supplied by the caller.
BoundReport bound_cmc(double lhs_area, double r, double mu, double h0);

/// Outer-ball bound for minimizers: clipped area < 4 m2 pi rho^2 / m1.
/// X0 has 2 + codim components; cells not fully inside the domain are
/// ignored, so the ball should stay clear of the domain boundary.
BoundReport bound_outer_ball(const GraphSurface& s, const std::vector<double>& x0,
                             double rho, double m1, double m2);

/// Curvature-integral bound: area <= r^2 (pi + 1/2 int (K0 - K) sqrt P).
BoundReport bound_curvatura_integra(const GeodesicPolarChart& chart,
                                    const Immersion& im, double k0_const);

/// Boundary-curvature bound: (1 - K0 r^2/2) area <= (r^2/2) int kappa ds,
/// applicable while K0 r^2 < 2 (K0 == 0 gives area <= (r^2/2) int kappa).
BoundReport bound_boundary_curvature(const Immersion& im, double k0_const,
                                     double r);

// ---- divergence-form graph bounds --------------------------------------------

/// rhs of the general divergence-form area bound (pure formula; the
/// monotonicity checks drive it directly).
double divergence_rhs(double area_omega, double boundary_len, double sup_z,
                      double sup_z_bdry, double sup_r, double k0, double m1);

BoundReport bound_divergence_graph(const GraphSurface& s, const SolutionMeta& meta,
                                   const RhsFn& rhs, std::optional<double> k0,
                                   double m1, bool a3_ok);

BoundReport bound_homogeneous(const GraphSurface& s, const SolutionMeta& meta,
                              std::optional<double> k0, double m1, bool a3_ok);

/// Minimal graphs: area <= |Omega| + sqrt(8) sup|zeta| * boundary length
/// (certified constants of the area integrand).
BoundReport bound_minimal_graph(const GraphSurface& s, const SolutionMeta& meta);

/// Prescribed mean curvature; sharp == true evaluates the tighter variant
/// without the sqrt(8) factors.
BoundReport bound_prescribed_H(const GraphSurface& s, const SolutionMeta& meta,
                               double h0, bool sharp);

/// Interior estimate over the nu-offset subdomain.
BoundReport bound_interior(const GraphSurface& s, const SolutionMeta& meta,
                           const RhsFn& rhs, std::optional<double> k0, double m1,
                           double nu, bool radial_ok);

// ---- higher-codimension bounds -----------------------------------------------

/// Fermat-type graphs: Lambda * area <= four-term rhs; Lambda is the
/// smallness factor, forced to 1 for one component or constant weight.
BoundReport bound_fermat(const GraphSurface& s, const SolutionMeta& meta,
                         const FermatWeight& w, double h0);

/// Minimal surface system in higher codimension (constant weight).
BoundReport bound_minimal_system(const GraphSurface& s, const SolutionMeta& meta);

}  // namespace areabound
