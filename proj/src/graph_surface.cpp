#include "areabound/graph_surface.hpp"

#include <cmath>
#include <stdexcept>

namespace areabound {

namespace {

// One-sided coefficient tables for f'(x0) with nodes x0, x0+s*h, ... (s = +-1).
// 2pt: (-1, 1)/h            first order
// 3pt: (-3/2, 2, -1/2)/h    second order, error -(h^2/3) f'''
// 4pt: (-2, 7/2, -2, 1/2)/h second order with the leading error +(h^2/6) f'''
//      matched to the interior central stencil, so the nodal gradient error
//      field stays smooth across the boundary and flux divergences keep
//      their full second-order convergence.
void fill_one_sided(StencilSet::Entry& e, int sign, int npts, double h) {
  static const double c2[2] = {-1.0, 1.0};
  static const double c3[3] = {-1.5, 2.0, -0.5};
  static const double c4[4] = {-2.0, 3.5, -2.0, 0.5};
  const double* c = npts == 4 ? c4 : (npts == 3 ? c3 : c2);
  e.npts = npts;
  for (int k = 0; k < npts; ++k) {
    e.offset[k] = sign * k;
    e.coeff[k] = sign * c[k] / h;
  }
}

}  // namespace

std::shared_ptr<const StencilSet> StencilSet::for_domain(const PlanarDomain& d) {
  auto s = std::make_shared<StencilSet>();
  int nx = d.nx(), ny = d.ny();
  s->dx.assign(nx * ny, {});
  s->dy.assign(nx * ny, {});

  auto valued = [&](int i, int j) {
    return i >= 0 && j >= 0 && i < nx && j < ny && d.has_value(i, j);
  };
  auto run_length = [&](int i, int j, int di, int dj) {
    int len = 0;
    while (len < 3 && valued(i + (len + 1) * di, j + (len + 1) * dj)) ++len;
    return len;  // number of valued nodes beyond (i,j) in that direction
  };

  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (!d.has_value(i, j)) continue;
      int id = d.index(i, j);
      for (int axis = 0; axis < 2; ++axis) {
        int di = axis == 0 ? 1 : 0, dj = axis == 0 ? 0 : 1;
        double h = axis == 0 ? d.hx() : d.hy();
        Entry& e = axis == 0 ? s->dx[id] : s->dy[id];
        if (valued(i - di, j - dj) && valued(i + di, j + dj)) {
          e.npts = 2;
          e.offset = {-1, 1, 0, 0};
          e.coeff = {-0.5 / h, 0.5 / h, 0, 0};
          continue;
        }
        int fwd = run_length(i, j, di, dj);
        int bwd = run_length(i, j, -di, -dj);
        int len = std::max(fwd, bwd);
        int sign = (fwd >= bwd) ? 1 : -1;
        if (len >= 1)
          fill_one_sided(e, sign, std::min(len + 1, 4), h);
        // len == 0: isolated along this axis; derivative left undefined (0)
      }
    }
  return s;
}

double StencilSet::apply_x(const PlanarDomain& d, const std::vector<double>& f,
                           int i, int j) const {
  const Entry& e = dx[d.index(i, j)];
  double v = 0;
  for (int k = 0; k < e.npts; ++k) v += e.coeff[k] * f[d.index(i + e.offset[k], j)];
  return v;
}

double StencilSet::apply_y(const PlanarDomain& d, const std::vector<double>& f,
                           int i, int j) const {
  const Entry& e = dy[d.index(i, j)];
  double v = 0;
  for (int k = 0; k < e.npts; ++k) v += e.coeff[k] * f[d.index(i, j + e.offset[k])];
  return v;
}

GraphSurface::GraphSurface(PlanarDomain domain, VectorField zeta)
    : domain_(std::move(domain)),
      m_(zeta.codim()),
      zeta_(std::move(zeta)),
      p_(domain_, m_),
      q_(domain_, m_),
      stencils_(StencilSet::for_domain(domain_)) {
  if (m_ < 1) throw std::invalid_argument("GraphSurface: codimension must be >= 1");
  if (!zeta_.domain.same_grid(domain_))
    throw std::invalid_argument("GraphSurface: value array grid mismatch");
  for (int s = 0; s < m_; ++s) {
    const auto& z = zeta_.comps[s];
    if (static_cast<int>(z.size()) != domain_.nx() * domain_.ny())
      throw std::invalid_argument("GraphSurface: value array size mismatch");
    for (int j = 0; j < domain_.ny(); ++j)
      for (int i = 0; i < domain_.nx(); ++i) {
        if (!domain_.has_value(i, j)) continue;
        p_.comps[s][idx(i, j)] = stencils_->apply_x(domain_, z, i, j);
        q_.comps[s][idx(i, j)] = stencils_->apply_y(domain_, z, i, j);
      }
  }
}

GraphSurface GraphSurface::from_components(
    PlanarDomain domain,
    const std::vector<std::function<double(double, double)>>& comps) {
  VectorField z(domain, static_cast<int>(comps.size()));
  for (size_t s = 0; s < comps.size(); ++s)
    for (int j = 0; j < domain.ny(); ++j)
      for (int i = 0; i < domain.nx(); ++i)
        if (domain.has_value(i, j))
          z.comps[s][domain.index(i, j)] = comps[s](domain.x(i), domain.y(j));
  return GraphSurface(domain, std::move(z));
}

std::array<ScalarField, 3> GraphSurface::induced_metric() const {
  std::array<ScalarField, 3> h = {ScalarField(domain_), ScalarField(domain_),
                                  ScalarField(domain_)};
  for (int j = 0; j < domain_.ny(); ++j)
    for (int i = 0; i < domain_.nx(); ++i) {
      if (!domain_.has_value(i, j)) continue;
      double pp = 0, pq = 0, qq = 0;
      for (int s = 0; s < m_; ++s) {
        double ps = p(s, i, j), qs = q(s, i, j);
        pp += ps * ps;
        pq += ps * qs;
        qq += qs * qs;
      }
      h[0].at(i, j) = 1.0 + pp;
      h[1].at(i, j) = pq;
      h[2].at(i, j) = 1.0 + qq;
    }
  return h;
}

ScalarField GraphSurface::area_element() const {
  ScalarField w(domain_, 1.0);
  for (int j = 0; j < domain_.ny(); ++j)
    for (int i = 0; i < domain_.nx(); ++i) {
      if (!domain_.has_value(i, j)) continue;
      double radicand;
      if (m_ == 1) {
        double ps = p(0, i, j), qs = q(0, i, j);
        radicand = 1.0 + ps * ps + qs * qs;
      } else {
        double pp = 0, pq = 0, qq = 0;
        for (int s = 0; s < m_; ++s) {
          double ps = p(s, i, j), qs = q(s, i, j);
          pp += ps * ps;
          pq += ps * qs;
          qq += qs * qs;
        }
        radicand = 1.0 + pp + qq + pp * qq - pq * pq;
      }
      if (!(radicand >= 0))
        throw std::logic_error("area_element: negative radicand (broken invariant)");
      w.at(i, j) = std::sqrt(radicand);
    }
  return w;
}

double GraphSurface::area() const { return integrate(area_element()); }

double GraphSurface::field_at_boundary(const std::vector<double>& f,
                                       const BoundaryNode& b) const {
  // nodal value plus a gradient step to the exact boundary position
  double dx = b.bx - domain_.x(b.i), dy = b.by - domain_.y(b.j);
  double v = f[idx(b.i, b.j)];
  if (dx != 0 || dy != 0) {
    v += dx * stencils_->apply_x(domain_, f, b.i, b.j) +
         dy * stencils_->apply_y(domain_, f, b.i, b.j);
  }
  return v;
}

std::vector<double> GraphSurface::tangential_derivative(int sigma) const {
  if (sigma < 0 || sigma >= m_)
    throw std::invalid_argument("tangential_derivative: component out of range");
  const auto& poly = domain_.boundary();
  std::vector<double> out(poly.size());
  for (size_t k = 0; k < poly.size(); ++k) {
    const auto& b = poly[k];
    double ps = field_at_boundary(p_.comps[sigma], b);
    double qs = field_at_boundary(q_.comps[sigma], b);
    out[k] = qs * b.nx - ps * b.ny;
  }
  return out;
}

std::vector<double> GraphSurface::boundary_trace(int sigma) const {
  if (sigma < 0 || sigma >= m_)
    throw std::invalid_argument("boundary_trace: component out of range");
  const auto& poly = domain_.boundary();
  std::vector<double> out(poly.size());
  for (size_t k = 0; k < poly.size(); ++k)
    out[k] = field_at_boundary(zeta_.comps[sigma], poly[k]);
  return out;
}

double GraphSurface::boundary_sup(int sigma) const {
  double m = 0;
  for (double v : boundary_trace(sigma)) m = std::max(m, std::abs(v));
  return m;
}

double GraphSurface::boundary_tangential_sup(int sigma) const {
  double m = 0;
  for (double v : tangential_derivative(sigma)) m = std::max(m, std::abs(v));
  return m;
}

double GraphSurface::domain_sup(int sigma) const {
  double m = boundary_sup(sigma);
  const auto& z = zeta_.comps[sigma];
  for (int j = 0; j < domain_.ny(); ++j)
    for (int i = 0; i < domain_.nx(); ++i)
      if (domain_.is_interior(i, j)) m = std::max(m, std::abs(z[idx(i, j)]));
  return m;
}

std::pair<double, double> cross_term_identity(const std::vector<double>& p,
                                              const std::vector<double>& q) {
  if (p.size() != q.size())
    throw std::invalid_argument("cross_term_identity: size mismatch");
  size_t m = p.size();
  double pp = 0, qq = 0, pq = 0;
  for (size_t s = 0; s < m; ++s) {
    pp += p[s] * p[s];
    qq += q[s] * q[s];
    pq += p[s] * q[s];
  }
  double lhs = pp * qq - pq * pq;
  double rhs = 0;
  for (size_t s = 0; s < m; ++s)
    for (size_t t = 0; t < m; ++t) {
      double d = p[s] * q[t] - p[t] * q[s];
      rhs += d * d;
    }
  rhs *= 0.5;
  return {lhs, rhs};
}

}  // namespace areabound
