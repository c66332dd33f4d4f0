#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "areabound/domain.hpp"
#include "areabound/graph_surface.hpp"

namespace areabound {

/// Evaluation state of an integrand F(x, y, z, p, q) with z, p, q of the
/// graph's codimension.
struct EvalPoint {
  double x = 0, y = 0;
  std::span<const double> z, p, q;
};

/// Variational integrand with optional analytic derivatives. Missing
/// derivatives fall back to central finite differences with step
/// 1e-5 * (1 + |argument|). Callbacks must be pure and reentrant.
class Integrand {
 public:
  using ValueFn = std::function<double(const EvalPoint&)>;
  using GradFn = std::function<void(const EvalPoint&, std::span<double> fp,
                                    std::span<double> fq, std::span<double> fz)>;
  // (Fpp, Fpq, Fqp, Fqq) for one-component integrands
  using Hess2Fn = std::function<std::array<double, 4>(const EvalPoint&)>;

  std::string name;
  int codim = 1;
  ValueFn value;
  GradFn analytic_grad;
  Hess2Fn analytic_hess2;

  std::optional<double> certified_k0;
  std::optional<double> certified_m1;
  bool certified_a3 = false;

  bool has_grad() const { return static_cast<bool>(analytic_grad); }

  /// First derivatives, analytic when available.
  void gradient(const EvalPoint& pt, std::span<double> fp, std::span<double> fq,
                std::span<double> fz) const;
  /// Finite differences of the value, always (used as the cross-check oracle).
  void fd_gradient(const EvalPoint& pt, std::span<double> fp, std::span<double> fq,
                   std::span<double> fz) const;
  /// Second derivatives in (p,q), one-component only.
  std::array<double, 4> hessian2(const EvalPoint& pt) const;
};

/// Fermat refraction weight Gamma(x,y) with positive bounds gamma0 <=
/// Gamma <= gamma1 and the gradient bound gamma2 >= sup |grad Gamma|.
struct FermatWeight {
  std::function<double(double, double)> gamma;
  std::function<std::array<double, 2>(double, double)> gamma_grad;  // optional
  double gamma0 = 1.0, gamma1 = 1.0, gamma2 = 0.0;

  double operator()(double x, double y) const { return gamma(x, y); }
  std::array<double, 2> grad(double x, double y) const;

  static FermatWeight constant(double c);
  static FermatWeight from_function(std::function<double(double, double)> g,
                                    const PlanarDomain& sample_domain);
};

/// Area-type first derivatives: fills F_p, F_q, F_z for the weighted area
/// integrand Gamma * W at the given state (Gamma independent of z, so the
/// F_z entries are zero; Gamma == 1 gives the plain minimal-surface fluxes).
void fermat_first_derivatives(double gamma_value, const EvalPoint& pt,
                              std::span<double> fp, std::span<double> fq,
                              std::span<double> fz);

// ---- builtin catalog --------------------------------------------------------

Integrand builtin_area();                // sqrt(1 + p^2 + q^2), m = 1
Integrand builtin_area_nd(int m);        // higher-codimension area element
Integrand builtin_dirichlet(int m = 1);  // (p^2 + q^2)/2
Integrand builtin_fermat(const FermatWeight& w, int m);
Integrand builtin_area_broken();  // deliberately wrong F_p; gradcheck fixture

/// Resolve "area" | "area_nd" | "dirichlet" | "fermat:gamma=<expr>" |
/// "area-broken" to an integrand of codimension m.
Integrand make_integrand(const std::string& spec, int m);

// ---- hypothesis constants ---------------------------------------------------

/// Sampled sup of sqrt(Fp^2 + Fq^2) over gradient radii up to 1e3
/// (log-spaced). Returns nullopt when the running sup keeps growing by more
/// than 1e-3 relative over the last decade of radii.
std::optional<double> estimate_k0(const Integrand& f, int budget = 64,
                                  std::uint64_t seed = 1);

/// Minimum eigenvalue of the (p,q)-Hessian over the closed unit gradient
/// disc. A nonpositive value reports a failed ellipticity hypothesis.
/// Throws if the Hessian is asymmetric beyond 1e-8.
double estimate_m1(const Integrand& f, int radial = 48, int angular = 64,
                   std::uint64_t seed = 1);

/// Fp(x,y,z,0,0) == 0 == Fq(x,y,z,0,0) to 1e-10 on random samples.
bool check_A3(const Integrand& f, int budget = 64, std::uint64_t seed = 1);

/// Worst sampled slack of p Fp + q Fq >= m1*(p^2+q^2) inside the unit
/// gradient disc and >= m1*sqrt(p^2+q^2) outside.
double coercivity_check(const Integrand& f, double m1, int budget = 64,
                        std::uint64_t seed = 1);

/// Sampled verification of p Fp + q Fq >= 0 everywhere.
bool nonneg_radial_check(const Integrand& f, int budget = 64,
                         std::uint64_t seed = 1);

/// Max mixed absolute/relative deviation |analytic - fd| / (1 + |analytic|)
/// of the analytic derivatives against finite differences of the value.
double gradcheck(const Integrand& f, int samples = 100, std::uint64_t seed = 1);

// ---- mean curvature of weighted graphs --------------------------------------

/// Weight Gamma over R^n (n = codim + 2) with spatial gradient.
struct SpatialWeight {
  std::function<double(std::span<const double>)> gamma;
  std::function<void(std::span<const double>, std::span<double>)> gamma_grad;

  double value(std::span<const double> x) const { return gamma(x); }
  void grad(std::span<const double> x, std::span<double> out) const;

  static SpatialWeight lift_xy(const FermatWeight& w);
};

/// H(X, N_sigma) = Gamma_X . N_sigma / (2 Gamma W) with the unit normal
/// N_sigma = (-p_sigma, -q_sigma, 0,...,1,...,0)/sqrt(1+p_sigma^2+q_sigma^2).
/// Throws if Gamma <= 0 at any node.
ScalarField mean_curvature_field(const SpatialWeight& g, const GraphSurface& s,
                                 int sigma);

/// Sampled curvature envelope sup |Gamma_X|/(2 Gamma) over the nodes of the
/// supplied surfaces; a lower envelope of the analytic sup over all of R^n.
double h0_sampled(const SpatialWeight& g,
                  const std::vector<const GraphSurface*>& surfaces);

}  // namespace areabound
