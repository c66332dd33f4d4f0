#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "areabound/domain.hpp"
#include "areabound/graph_surface.hpp"
#include "areabound/integrands.hpp"

namespace areabound {

/// Right-hand side R(x,y,zeta,grad zeta) per component; empty means zero.
using RhsFn = std::function<double(const EvalPoint&, int sigma)>;

/// Dirichlet data per component.
using BoundaryFn = std::function<double(double, double)>;

struct SolveConfig {
  enum class Method { DampedNewton, GradientFlow };
  enum class InitialGuess { HarmonicExtension, ZeroInterior };
  Method method = Method::DampedNewton;
  InitialGuess initial_guess = InitialGuess::HarmonicExtension;
  double tolerance = 1e-10;  // discrete sup norm of the residual
  int max_iterations = 60;
  int max_backtracks = 12;
  double levenberg0 = 1e-8;
  bool record_energy = true;
};

struct SolveResult {
  GraphSurface surface;
  double residual = 0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> energy_history;  // non-increasing under gradient flow
};

/// Discrete Euler-Lagrange residual: per interior node and component,
///   d/dx F_p + d/dy F_q - F_z - R,
/// with nodal fluxes (one-sided gradients at the boundary) and the outer
/// divergence by central differences. Boundary rows are zero.
VectorField el_residual(const GraphSurface& s, const Integrand& f,
                        const RhsFn& rhs = nullptr);

double residual_sup(const VectorField& r);

/// Five-point harmonic extension of the boundary data (the solver's
/// initial guess; exact for data that is discretely harmonic).
GraphSurface harmonic_extension(const PlanarDomain& d,
                                const std::vector<BoundaryFn>& phi);

/// Solve the Dirichlet problem for the quasilinear divergence-form equation
/// of the integrand: div(F_p, F_q) = F_z + R in Omega, zeta = phi on the
/// boundary. Never fabricates a surface: on failure converged == false and
/// the last iterate is returned.
SolveResult solve_dirichlet(const PlanarDomain& d, const Integrand& f,
                            const RhsFn& rhs, const BoundaryFn& phi,
                            const SolveConfig& cfg = {});

/// Minimal surface system in codimension m (area integrand of the system;
/// for m == 1 this is solve_dirichlet with the area integrand, same code
/// path and iterates).
SolveResult solve_minimal_system(const PlanarDomain& d, int m,
                                 const std::vector<BoundaryFn>& phi,
                                 const SolveConfig& cfg = {});

/// Critical point of the weighted area functional with weight Gamma(x,y).
SolveResult solve_fermat(const PlanarDomain& d, int m, const FermatWeight& w,
                         const std::vector<BoundaryFn>& phi,
                         const SolveConfig& cfg = {});

/// General engine behind the three entry points.
SolveResult solve_system(const PlanarDomain& d, const Integrand& f,
                         const RhsFn& rhs, const std::vector<BoundaryFn>& phi,
                         const SolveConfig& cfg = {});

/// Discrete objective sum(w * F) + sum(w * R * zeta) used for the energy
/// history and the gradient-flow acceptance test.
double discrete_energy(const GraphSurface& s, const Integrand& f,
                       const RhsFn& rhs = nullptr);

}  // namespace areabound
