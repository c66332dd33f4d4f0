#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace areabound {

enum class DomainKind { UnitSquare, UnitDisc, Rectangle, Disc };

enum class NodeClass : unsigned char { Exterior = 0, Interior = 1, Boundary = 2 };

/// Where a sup norm is taken: the closed domain (interior + boundary nodes)
/// or the boundary polyline only.
enum class NormRegion { Domain, Boundary };

/// One node of the boundary polyline. For disc domains the grid node (i,j)
/// sits near the circle; (bx,by) is its projection onto the true boundary,
/// where the outward normal is analytic.
struct BoundaryNode {
  int i = 0, j = 0;       // associated grid node
  double bx = 0, by = 0;  // exact position on the true boundary
  double nx = 0, ny = 0;  // outward unit normal at (bx,by)
  double ds = 0;          // arclength weight
};

/// Structured tensor grid over a rectangle or a disc (the disc masks the
/// bounding square). Immutable after construction; cheap to copy.
class PlanarDomain {
 public:
  static PlanarDomain unit_square(int nx, int ny);
  static PlanarDomain rectangle(double x0, double x1, double y0, double y1,
                                int nx, int ny);
  static PlanarDomain unit_disc(int nx, int ny);
  static PlanarDomain disc(double cx, double cy, double radius, int nx, int ny);

  DomainKind kind() const { return d_->kind; }
  int nx() const { return d_->nx; }
  int ny() const { return d_->ny; }
  double hx() const { return d_->hx; }
  double hy() const { return d_->hy; }
  double x(int i) const { return d_->x0 + i * d_->hx; }
  double y(int j) const { return d_->y0 + j * d_->hy; }
  int index(int i, int j) const { return j * d_->nx + i; }

  NodeClass node_class(int i, int j) const { return d_->cls[index(i, j)]; }
  bool has_value(int i, int j) const {
    return d_->cls[index(i, j)] != NodeClass::Exterior;
  }
  bool is_interior(int i, int j) const {
    return d_->cls[index(i, j)] == NodeClass::Interior;
  }

  const std::vector<BoundaryNode>& boundary() const { return d_->polyline; }
  /// Quadrature weight per node; integrate(1) reproduces area() exactly.
  const std::vector<double>& node_weights() const { return d_->weights; }

  double area() const { return d_->area; }
  double boundary_length() const;
  double inradius() const { return d_->inradius; }

  /// Minimal distance from (px,py) to the boundary polyline segments.
  double distance_to_boundary(double px, double py) const;

  /// Nodes strictly farther than nu from the boundary polyline, on the same
  /// grid, with fresh quadrature weights for the offset region.
  /// Throws if the resulting node set is empty.
  PlanarDomain interior_subdomain(double nu) const;

  /// Disc geometry, valid for UnitDisc/Disc kinds.
  double disc_cx() const { return d_->cx; }
  double disc_cy() const { return d_->cy; }
  double disc_radius() const { return d_->radius; }

  double rect_x0() const { return d_->x0; }
  double rect_x1() const { return d_->x1; }
  double rect_y0() const { return d_->y0; }
  double rect_y1() const { return d_->y1; }

  std::string kind_name() const;

  bool same_grid(const PlanarDomain& o) const {
    return d_->nx == o.d_->nx && d_->ny == o.d_->ny && d_->x0 == o.d_->x0 &&
           d_->y0 == o.d_->y0 && d_->hx == o.d_->hx && d_->hy == o.d_->hy;
  }

 private:
  struct Data {
    DomainKind kind = DomainKind::UnitSquare;
    int nx = 0, ny = 0;
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;  // bounding box
    double hx = 0, hy = 0;
    double cx = 0, cy = 0, radius = 0;  // disc geometry
    double area = 0, inradius = 0;
    std::vector<NodeClass> cls;
    std::vector<double> weights;
    std::vector<BoundaryNode> polyline;
  };
  std::shared_ptr<const Data> d_;
  explicit PlanarDomain(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
  static PlanarDomain build_rect(DomainKind kind, double x0, double x1,
                                 double y0, double y1, int nx, int ny);
  static PlanarDomain build_disc(DomainKind kind, double cx, double cy,
                                 double radius, double bx0, double bx1,
                                 double by0, double by1, int nx, int ny);
};

/// Nodal scalar values over a PlanarDomain grid (row-major nx*ny array;
/// entries at exterior nodes are unused).
struct ScalarField {
  ScalarField() = default;
  ScalarField(PlanarDomain dom, double fill = 0.0)
      : domain(std::move(dom)), v(domain.nx() * domain.ny(), fill) {}

  template <class F>
  static ScalarField sample(PlanarDomain dom, F&& f) {
    ScalarField out(dom);
    for (int j = 0; j < dom.ny(); ++j)
      for (int i = 0; i < dom.nx(); ++i)
        if (dom.has_value(i, j)) out.v[dom.index(i, j)] = f(dom.x(i), dom.y(j));
    return out;
  }

  double operator()(int i, int j) const { return v[domain.index(i, j)]; }
  double& at(int i, int j) { return v[domain.index(i, j)]; }

  PlanarDomain domain;
  std::vector<double> v;
};

/// m-component nodal values (one plane per component).
struct VectorField {
  VectorField() = default;
  VectorField(PlanarDomain dom, int m)
      : domain(std::move(dom)), comps(m, std::vector<double>()) {
    for (auto& c : comps) c.assign(domain.nx() * domain.ny(), 0.0);
  }
  int codim() const { return static_cast<int>(comps.size()); }

  PlanarDomain domain;
  std::vector<std::vector<double>> comps;
};

double sup_norm(const ScalarField& f, NormRegion region);

/// Composite quadrature with the domain's node weights; linear in f and
/// exact for f == const by construction.
double integrate(const ScalarField& f);

/// Integrate values living on `f.domain`'s grid with the weights of
/// `region` (used for integrals over interior subdomains).
double integrate_on(const ScalarField& f, const PlanarDomain& region);

}  // namespace areabound
