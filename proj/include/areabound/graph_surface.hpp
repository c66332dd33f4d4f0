#pragma once

#include <array>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "areabound/domain.hpp"

namespace areabound {

/// Per-node, per-axis first-derivative stencil. Centered where both axis
/// neighbors carry values, one-sided (up to 4 points, third order) at
/// boundary nodes. The stencil layout is a pure function of the domain, so
/// every surface on the same domain differentiates identically.
struct StencilSet {
  // offsets[k] in {-3..3}, coeffs scaled by the axis spacing; npts==0 marks
  // a node where no derivative is available (never happens on the kinds
  // this library builds).
  struct Entry {
    int npts = 0;
    std::array<int, 4> offset{};
    std::array<double, 4> coeff{};
  };
  std::vector<Entry> dx, dy;

  static std::shared_ptr<const StencilSet> for_domain(const PlanarDomain& d);

  double apply_x(const PlanarDomain& d, const std::vector<double>& f, int i, int j) const;
  double apply_y(const PlanarDomain& d, const std::vector<double>& f, int i, int j) const;
};

/// Graph surface (x, y, zeta_1, ..., zeta_m) over a planar domain, with the
/// gradient planes p = zeta_x and q = zeta_y cached at construction.
/// Immutable; all operations are const and thread-safe.
class GraphSurface {
 public:
  GraphSurface(PlanarDomain domain, VectorField zeta);

  static GraphSurface from_components(
      PlanarDomain domain,
      const std::vector<std::function<double(double, double)>>& comps);

  const PlanarDomain& domain() const { return domain_; }
  int codim() const { return m_; }

  double zeta(int sigma, int i, int j) const { return zeta_.comps[sigma][idx(i, j)]; }
  double p(int sigma, int i, int j) const { return p_.comps[sigma][idx(i, j)]; }
  double q(int sigma, int i, int j) const { return q_.comps[sigma][idx(i, j)]; }
  const VectorField& zeta_field() const { return zeta_; }
  const VectorField& p_field() const { return p_; }
  const VectorField& q_field() const { return q_; }
  const StencilSet& stencils() const { return *stencils_; }

  /// Induced metric coefficients h11 = 1+p^2, h12 = p.q, h22 = 1+q^2.
  std::array<ScalarField, 3> induced_metric() const;

  /// W = sqrt(1 + p^2 + q^2 + p^2 q^2 - (p.q)^2); reduces exactly to
  /// sqrt(1 + p^2 + q^2) for one component.
  ScalarField area_element() const;

  double area() const;

  /// (q_sigma, -p_sigma) . nu at each boundary polyline node, with p,q
  /// carried to the exact boundary position by a first-order correction.
  std::vector<double> tangential_derivative(int sigma) const;

  /// zeta_sigma along the boundary polyline, corrected to the exact
  /// boundary position.
  std::vector<double> boundary_trace(int sigma) const;

  double boundary_sup(int sigma) const;
  double boundary_tangential_sup(int sigma) const;
  /// sup over the closure: interior/boundary nodes plus corrected traces.
  double domain_sup(int sigma) const;

 private:
  int idx(int i, int j) const { return domain_.index(i, j); }
  double field_at_boundary(const std::vector<double>& f, const BoundaryNode& b) const;

  PlanarDomain domain_;
  int m_;
  VectorField zeta_, p_, q_;
  std::shared_ptr<const StencilSet> stencils_;
};

/// Both sides of the cross-term identity
///   p^2 q^2 - (p.q)^2 = 1/2 sum_{s,t} (p_s q_t - p_t q_s)^2 .
/// lhs via dot products, rhs via the explicit double sum.
std::pair<double, double> cross_term_identity(const std::vector<double>& p,
                                              const std::vector<double>& q);

}  // namespace areabound
