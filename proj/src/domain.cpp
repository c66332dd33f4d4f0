#include "areabound/domain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace areabound {

namespace {

// ---- exact circle / cell overlap ------------------------------------------
//
// Overlap area of the disc {x^2+y^2 <= r^2} (centered at origin) with the
// axis-aligned cell [x0,x1]x[y0,y1], by piecewise analytic integration of the
// column height min(y1,s(x)) - max(y0,-s(x)) with s(x) = sqrt(r^2-x^2).

double antider_s(double x, double r) {
  // antiderivative of sqrt(r^2-x^2)
  double c = std::clamp(x / r, -1.0, 1.0);
  return 0.5 * (x * std::sqrt(std::max(0.0, r * r - x * x)) +
                r * r * std::asin(c));
}

double circle_cell_overlap(double x0, double x1, double y0, double y1,
                           double cx, double cy, double r) {
  // shift so the circle is centered at the origin
  x0 -= cx;
  x1 -= cx;
  y0 -= cy;
  y1 -= cy;
  x0 = std::clamp(x0, -r, r);
  x1 = std::clamp(x1, -r, r);
  if (x1 <= x0) return 0.0;

  // breakpoints where s(x) crosses y0, y1, -y0, -y1
  std::vector<double> bps = {x0, x1};
  auto add_cross = [&](double yv) {
    double a = r * r - yv * yv;
    if (a > 0) {
      double s = std::sqrt(a);
      if (s > x0 && s < x1) bps.push_back(s);
      if (-s > x0 && -s < x1) bps.push_back(-s);
    }
  };
  add_cross(y0);
  add_cross(y1);
  std::sort(bps.begin(), bps.end());

  double total = 0.0;
  for (size_t k = 0; k + 1 < bps.size(); ++k) {
    double a = bps[k], b = bps[k + 1];
    if (b - a <= 0) continue;
    double xm = 0.5 * (a + b);
    double s = std::sqrt(std::max(0.0, r * r - xm * xm));
    double lo = std::max(y0, -s), hi = std::min(y1, s);
    if (hi <= lo) continue;
    // on (a,b) the integrand is c1 + c2*s(x) with constant c1,c2 in {0,+-1}
    bool hi_is_s = (s < y1);
    bool lo_is_s = (-s > y0);
    double c1 = (hi_is_s ? 0.0 : y1) - (lo_is_s ? 0.0 : y0);
    double c2 = (hi_is_s ? 1.0 : 0.0) + (lo_is_s ? 1.0 : 0.0);
    total += c1 * (b - a) + c2 * (antider_s(b, r) - antider_s(a, r));
  }
  return total;
}

// centroid of the overlap region (for bilinear placement of the cell value)
void circle_cell_centroid(double x0, double x1, double y0, double y1,
                          double cx, double cy, double r, double area,
                          double& gx, double& gy) {
  if (area <= 0) {
    gx = 0.5 * (x0 + x1);
    gy = 0.5 * (y0 + y1);
    return;
  }
  double sx0 = x0 - cx, sx1 = x1 - cx, sy0 = y0 - cy, sy1 = y1 - cy;
  sx0 = std::clamp(sx0, -r, r);
  sx1 = std::clamp(sx1, -r, r);

  std::vector<double> bps = {sx0, sx1};
  auto add_cross = [&](double yv) {
    double a = r * r - yv * yv;
    if (a > 0) {
      double s = std::sqrt(a);
      if (s > sx0 && s < sx1) bps.push_back(s);
      if (-s > sx0 && -s < sx1) bps.push_back(-s);
    }
  };
  add_cross(sy0);
  add_cross(sy1);
  std::sort(bps.begin(), bps.end());

  // integrate x*len(x) and (hi^2-lo^2)/2 by Gauss-Legendre (5pt) per smooth piece
  static const double gp[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                               0.5384693101056831, 0.9061798459386640};
  static const double gw[5] = {0.2369268850561891, 0.4786286704993665,
                               0.5688888888888889, 0.4786286704993665,
                               0.2369268850561891};
  double mx = 0.0, my = 0.0;
  for (size_t k = 0; k + 1 < bps.size(); ++k) {
    double a = bps[k], b = bps[k + 1];
    if (b - a <= 0) continue;
    for (int g = 0; g < 5; ++g) {
      double t = 0.5 * (a + b) + 0.5 * (b - a) * gp[g];
      double w = 0.5 * (b - a) * gw[g];
      double s = std::sqrt(std::max(0.0, r * r - t * t));
      double lo = std::max(sy0, -s), hi = std::min(sy1, s);
      if (hi <= lo) continue;
      mx += w * t * (hi - lo);
      my += w * 0.5 * (hi * hi - lo * lo);
    }
  }
  gx = cx + mx / area;
  gy = cy + my / area;
}

double rect_cell_overlap(double x0, double x1, double y0, double y1,
                         double rx0, double rx1, double ry0, double ry1) {
  double w = std::min(x1, rx1) - std::max(x0, rx0);
  double h = std::min(y1, ry1) - std::max(y0, ry0);
  return (w > 0 && h > 0) ? w * h : 0.0;
}

// Node quadrature weights from per-cell overlaps: 2x2-cell Simpson panels
// (positive weights, fourth order) wherever the panel is fully covered and
// all nine nodes carry values, the exact clipped-cell rule with the value
// placed at the overlap centroid elsewhere. Sum of weights == sum of
// overlaps, so integrating 1 reproduces the area.
struct CellInfo {
  double w = 0;     // overlap area
  double gx = 0, gy = 0;  // overlap centroid
  bool full = false;
};

void assemble_weights(int nx, int ny, double hx, double hy,
                      const std::vector<NodeClass>& cls,
                      const std::vector<CellInfo>& cells,
                      std::vector<double>& weights) {
  weights.assign(nx * ny, 0.0);
  int ncx = nx - 1, ncy = ny - 1;
  std::vector<char> done(ncx * ncy, 0);

  auto valued = [&](int i, int j) { return cls[j * nx + i] != NodeClass::Exterior; };

  // Simpson panels over pairs of full cells
  static const double s1[3] = {1.0 / 3.0, 4.0 / 3.0, 1.0 / 3.0};
  for (int J = 0; J + 1 < ncy; J += 2)
    for (int I = 0; I + 1 < ncx; I += 2) {
      bool ok = cells[J * ncx + I].full && cells[J * ncx + I + 1].full &&
                cells[(J + 1) * ncx + I].full && cells[(J + 1) * ncx + I + 1].full;
      for (int b = 0; b < 3 && ok; ++b)
        for (int a = 0; a < 3 && ok; ++a)
          if (!valued(I + a, J + b)) ok = false;
      if (!ok) continue;
      for (int b = 0; b < 3; ++b)
        for (int a = 0; a < 3; ++a)
          weights[(J + b) * nx + I + a] += hx * s1[a] * hy * s1[b];
      done[J * ncx + I] = done[J * ncx + I + 1] = 1;
      done[(J + 1) * ncx + I] = done[(J + 1) * ncx + I + 1] = 1;
    }

  // remaining cells: clipped trapezoid with bilinear placement at the centroid
  for (int j = 0; j < ncy; ++j)
    for (int i = 0; i < ncx; ++i) {
      if (done[j * ncx + i]) continue;
      const CellInfo& c = cells[j * ncx + i];
      if (c.w <= 0) continue;
      double tx = std::clamp((c.gx), 0.0, 1.0);
      double ty = std::clamp((c.gy), 0.0, 1.0);
      int idx[4] = {j * nx + i, j * nx + i + 1, (j + 1) * nx + i, (j + 1) * nx + i + 1};
      double lam[4] = {(1 - tx) * (1 - ty), tx * (1 - ty), (1 - tx) * ty, tx * ty};
      double avail = 0.0;
      for (int k = 0; k < 4; ++k)
        if (cls[idx[k]] != NodeClass::Exterior) avail += lam[k];
      if (avail <= 0) continue;  // sliver with no valued corner; O(h^3) mass
      for (int k = 0; k < 4; ++k)
        if (cls[idx[k]] != NodeClass::Exterior) weights[idx[k]] += c.w * lam[k] / avail;
    }
}

}  // namespace

// ---- construction -----------------------------------------------------------

PlanarDomain PlanarDomain::unit_square(int nx, int ny) {
  return build_rect(DomainKind::UnitSquare, 0, 1, 0, 1, nx, ny);
}

PlanarDomain PlanarDomain::rectangle(double x0, double x1, double y0, double y1,
                                     int nx, int ny) {
  if (!(x1 > x0 && y1 > y0)) throw std::invalid_argument("rectangle: empty extents");
  return build_rect(DomainKind::Rectangle, x0, x1, y0, y1, nx, ny);
}

PlanarDomain PlanarDomain::unit_disc(int nx, int ny) {
  return build_disc(DomainKind::UnitDisc, 0, 0, 1, -1, 1, -1, 1, nx, ny);
}

PlanarDomain PlanarDomain::disc(double cx, double cy, double radius, int nx, int ny) {
  if (radius <= 0) throw std::invalid_argument("disc: radius must be positive");
  return build_disc(DomainKind::Disc, cx, cy, radius, cx - radius, cx + radius,
                    cy - radius, cy + radius, nx, ny);
}

PlanarDomain PlanarDomain::build_rect(DomainKind kind, double x0, double x1,
                                      double y0, double y1, int nx, int ny) {
  if (nx < 3 || ny < 3) throw std::invalid_argument("domain: need nx,ny >= 3");
  auto d = std::make_shared<Data>();
  d->kind = kind;
  d->nx = nx;
  d->ny = ny;
  d->x0 = x0;
  d->x1 = x1;
  d->y0 = y0;
  d->y1 = y1;
  d->hx = (x1 - x0) / (nx - 1);
  d->hy = (y1 - y0) / (ny - 1);
  d->inradius = 0.5 * std::min(x1 - x0, y1 - y0);

  d->cls.assign(nx * ny, NodeClass::Interior);
  for (int i = 0; i < nx; ++i) {
    d->cls[i] = NodeClass::Boundary;
    d->cls[(ny - 1) * nx + i] = NodeClass::Boundary;
  }
  for (int j = 0; j < ny; ++j) {
    d->cls[j * nx] = NodeClass::Boundary;
    d->cls[j * nx + nx - 1] = NodeClass::Boundary;
  }

  {
    std::vector<CellInfo> cells((nx - 1) * (ny - 1));
    for (auto& c : cells) {
      c.w = d->hx * d->hy;
      c.gx = c.gy = 0.5;
      c.full = true;
    }
    assemble_weights(nx, ny, d->hx, d->hy, d->cls, cells, d->weights);
  }
  d->area = std::accumulate(d->weights.begin(), d->weights.end(), 0.0);

  // boundary polyline: grid edge nodes, counterclockwise from (0,0)
  auto push = [&](int i, int j, double nxv, double nyv) {
    BoundaryNode b;
    b.i = i;
    b.j = j;
    b.bx = x0 + i * d->hx;
    b.by = y0 + j * d->hy;
    double len = std::hypot(nxv, nyv);
    b.nx = nxv / len;
    b.ny = nyv / len;
    d->polyline.push_back(b);
  };
  for (int i = 0; i < nx - 1; ++i) push(i, 0, (i == 0) ? -1 : 0, -1);
  for (int j = 0; j < ny - 1; ++j) push(nx - 1, j, 1, (j == 0) ? -1 : 0);
  for (int i = nx - 1; i > 0; --i) push(i, ny - 1, (i == nx - 1) ? 1 : 0, 1);
  for (int j = ny - 1; j > 0; --j) push(0, j, -1, (j == ny - 1) ? 1 : 0);
  int M = static_cast<int>(d->polyline.size());
  for (int k = 0; k < M; ++k) {
    auto& a = d->polyline[k];
    const auto& prev = d->polyline[(k + M - 1) % M];
    const auto& next = d->polyline[(k + 1) % M];
    a.ds = 0.5 * (std::hypot(a.bx - prev.bx, a.by - prev.by) +
                  std::hypot(next.bx - a.bx, next.by - a.by));
  }
  return PlanarDomain(d);
}

PlanarDomain PlanarDomain::build_disc(DomainKind kind, double cx, double cy,
                                      double radius, double bx0, double bx1,
                                      double by0, double by1, int nx, int ny) {
  if (nx < 3 || ny < 3) throw std::invalid_argument("domain: need nx,ny >= 3");
  auto d = std::make_shared<Data>();
  d->kind = kind;
  d->nx = nx;
  d->ny = ny;
  d->x0 = bx0;
  d->x1 = bx1;
  d->y0 = by0;
  d->y1 = by1;
  d->hx = (bx1 - bx0) / (nx - 1);
  d->hy = (by1 - by0) / (ny - 1);
  d->cx = cx;
  d->cy = cy;
  d->radius = radius;
  d->inradius = radius;

  auto inside = [&](int i, int j) {
    double dx = bx0 + i * d->hx - cx, dy = by0 + j * d->hy - cy;
    return dx * dx + dy * dy < radius * radius - 1e-14 * radius * radius;
  };
  d->cls.assign(nx * ny, NodeClass::Exterior);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      if (inside(i, j)) d->cls[j * nx + i] = NodeClass::Interior;
  // boundary: not inside, with an inside 8-neighbor
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (d->cls[j * nx + i] == NodeClass::Interior) continue;
      bool adj = false;
      for (int dj = -1; dj <= 1 && !adj; ++dj)
        for (int di = -1; di <= 1 && !adj; ++di) {
          if (di == 0 && dj == 0) continue;
          int ii = i + di, jj = j + dj;
          if (ii < 0 || jj < 0 || ii >= nx || jj >= ny) continue;
          if (d->cls[jj * nx + ii] == NodeClass::Interior) adj = true;
        }
      if (adj) d->cls[j * nx + i] = NodeClass::Boundary;
    }

  // quadrature from the exact cell/disc overlaps
  {
    std::vector<CellInfo> cells((nx - 1) * (ny - 1));
    double full = d->hx * d->hy;
    for (int j = 0; j + 1 < ny; ++j)
      for (int i = 0; i + 1 < nx; ++i) {
        double cxl = bx0 + i * d->hx, cxr = cxl + d->hx;
        double cyl = by0 + j * d->hy, cyu = cyl + d->hy;
        CellInfo& c = cells[j * (nx - 1) + i];
        c.w = circle_cell_overlap(cxl, cxr, cyl, cyu, cx, cy, radius);
        if (c.w <= 0) continue;
        c.full = c.w >= full * (1.0 - 1e-12);
        double gx, gy;
        circle_cell_centroid(cxl, cxr, cyl, cyu, cx, cy, radius, c.w, gx, gy);
        c.gx = (gx - cxl) / d->hx;
        c.gy = (gy - cyl) / d->hy;
      }
    assemble_weights(nx, ny, d->hx, d->hy, d->cls, cells, d->weights);
  }
  d->area = std::accumulate(d->weights.begin(), d->weights.end(), 0.0);

  // boundary polyline: project boundary grid nodes onto the circle, sort by angle
  std::vector<BoundaryNode> poly;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (d->cls[j * nx + i] != NodeClass::Boundary) continue;
      double px = bx0 + i * d->hx - cx, py = by0 + j * d->hy - cy;
      double rr = std::hypot(px, py);
      double ux = (rr > 0) ? px / rr : 1.0, uy = (rr > 0) ? py / rr : 0.0;
      BoundaryNode b;
      b.i = i;
      b.j = j;
      b.bx = cx + radius * ux;
      b.by = cy + radius * uy;
      b.nx = ux;
      b.ny = uy;
      poly.push_back(b);
    }
  std::sort(poly.begin(), poly.end(), [&](const BoundaryNode& a, const BoundaryNode& b) {
    return std::atan2(a.by - cy, a.bx - cx) < std::atan2(b.by - cy, b.bx - cx);
  });
  int M = static_cast<int>(poly.size());
  for (int k = 0; k < M; ++k) {
    const auto& prev = poly[(k + M - 1) % M];
    const auto& next = poly[(k + 1) % M];
    poly[k].ds = 0.5 * (std::hypot(poly[k].bx - prev.bx, poly[k].by - prev.by) +
                        std::hypot(next.bx - poly[k].bx, next.by - poly[k].by));
  }
  d->polyline = std::move(poly);
  return PlanarDomain(d);
}

double PlanarDomain::boundary_length() const {
  double s = 0.0;
  for (const auto& b : d_->polyline) s += b.ds;
  return s;
}

double PlanarDomain::distance_to_boundary(double px, double py) const {
  const auto& poly = d_->polyline;
  int M = static_cast<int>(poly.size());
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < M; ++k) {
    const auto& a = poly[k];
    const auto& b = poly[(k + 1) % M];
    double ex = b.bx - a.bx, ey = b.by - a.by;
    double len2 = ex * ex + ey * ey;
    double t = (len2 > 0) ? std::clamp(((px - a.bx) * ex + (py - a.by) * ey) / len2, 0.0, 1.0)
                          : 0.0;
    double qx = a.bx + t * ex, qy = a.by + t * ey;
    best = std::min(best, std::hypot(px - qx, py - qy));
  }
  return best;
}

PlanarDomain PlanarDomain::interior_subdomain(double nu) const {
  if (nu <= 0) throw std::invalid_argument("interior_subdomain: nu must be > 0");
  const auto& s = *d_;
  auto d = std::make_shared<Data>();
  d->nx = s.nx;
  d->ny = s.ny;
  d->x0 = s.x0;
  d->x1 = s.x1;
  d->y0 = s.y0;
  d->y1 = s.y1;
  d->hx = s.hx;
  d->hy = s.hy;

  bool is_disc = (s.kind == DomainKind::UnitDisc || s.kind == DomainKind::Disc);
  double rx0 = 0, rx1 = 0, ry0 = 0, ry1 = 0;
  if (is_disc) {
    d->kind = DomainKind::Disc;
    d->cx = s.cx;
    d->cy = s.cy;
    d->radius = s.radius - nu;
    d->inradius = d->radius;
    if (d->radius <= 0)
      throw std::invalid_argument("interior_subdomain: nu exceeds the inradius");
  } else {
    d->kind = DomainKind::Rectangle;
    rx0 = s.x0 + nu;
    rx1 = s.x1 - nu;
    ry0 = s.y0 + nu;
    ry1 = s.y1 - nu;
    if (rx1 <= rx0 || ry1 <= ry0)
      throw std::invalid_argument("interior_subdomain: nu exceeds the inradius");
    d->inradius = 0.5 * std::min(rx1 - rx0, ry1 - ry0);
  }

  // node classification by distance to the parent polyline (ties go outside)
  d->cls.assign(s.nx * s.ny, NodeClass::Exterior);
  int selected = 0;
  for (int j = 0; j < s.ny; ++j)
    for (int i = 0; i < s.nx; ++i) {
      if (s.cls[j * s.nx + i] == NodeClass::Exterior) continue;
      double px = s.x0 + i * s.hx, py = s.y0 + j * s.hy;
      if (distance_to_boundary(px, py) > nu) {
        d->cls[j * s.nx + i] = NodeClass::Interior;
        ++selected;
      }
    }
  if (selected == 0)
    throw std::invalid_argument("interior_subdomain: empty node set for nu");
  for (int j = 0; j < s.ny; ++j)
    for (int i = 0; i < s.nx; ++i) {
      if (d->cls[j * s.nx + i] == NodeClass::Interior) continue;
      bool adj = false;
      for (int dj = -1; dj <= 1 && !adj; ++dj)
        for (int di = -1; di <= 1 && !adj; ++di) {
          int ii = i + di, jj = j + dj;
          if ((di == 0 && dj == 0) || ii < 0 || jj < 0 || ii >= s.nx || jj >= s.ny)
            continue;
          if (d->cls[jj * s.nx + ii] == NodeClass::Interior) adj = true;
        }
      if (adj) d->cls[j * s.nx + i] = NodeClass::Boundary;
    }

  // quadrature weights from the exact offset geometry
  {
    std::vector<CellInfo> cells((s.nx - 1) * (s.ny - 1));
    double full = s.hx * s.hy;
    for (int j = 0; j + 1 < s.ny; ++j)
      for (int i = 0; i + 1 < s.nx; ++i) {
        double cxl = s.x0 + i * s.hx, cxr = cxl + s.hx;
        double cyl = s.y0 + j * s.hy, cyu = cyl + s.hy;
        CellInfo& c = cells[j * (s.nx - 1) + i];
        double gx, gy;
        if (is_disc) {
          c.w = circle_cell_overlap(cxl, cxr, cyl, cyu, d->cx, d->cy, d->radius);
          if (c.w <= 0) continue;
          circle_cell_centroid(cxl, cxr, cyl, cyu, d->cx, d->cy, d->radius, c.w, gx, gy);
        } else {
          c.w = rect_cell_overlap(cxl, cxr, cyl, cyu, rx0, rx1, ry0, ry1);
          if (c.w <= 0) continue;
          gx = 0.5 * (std::max(cxl, rx0) + std::min(cxr, rx1));
          gy = 0.5 * (std::max(cyl, ry0) + std::min(cyu, ry1));
        }
        c.full = c.w >= full * (1.0 - 1e-12);
        c.gx = (gx - cxl) / s.hx;
        c.gy = (gy - cyl) / s.hy;
      }
    // the offset region's node classes gate the weight redistribution
    assemble_weights(s.nx, s.ny, s.hx, s.hy, d->cls, cells, d->weights);
  }
  d->area = std::accumulate(d->weights.begin(), d->weights.end(), 0.0);

  // polyline of the offset boundary, sampled like the parent kinds
  if (is_disc) {
    PlanarDomain tmp = build_disc(DomainKind::Disc, d->cx, d->cy, d->radius,
                                  s.x0, s.x1, s.y0, s.y1, s.nx, s.ny);
    d->polyline = tmp.d_->polyline;
  } else {
    int K = 4 * (s.nx + s.ny);
    double per = 2 * ((rx1 - rx0) + (ry1 - ry0));
    std::vector<BoundaryNode> poly;
    auto emit = [&](double px, double py, double nxv, double nyv) {
      BoundaryNode b;
      b.bx = px;
      b.by = py;
      b.nx = nxv;
      b.ny = nyv;
      b.i = std::clamp(static_cast<int>(std::lround((px - s.x0) / s.hx)), 0, s.nx - 1);
      b.j = std::clamp(static_cast<int>(std::lround((py - s.y0) / s.hy)), 0, s.ny - 1);
      b.ds = per / K;
      poly.push_back(b);
    };
    for (int k = 0; k < K; ++k) {
      double t = per * k / K;
      double w = rx1 - rx0, h = ry1 - ry0;
      if (t < w)
        emit(rx0 + t, ry0, 0, -1);
      else if (t < w + h)
        emit(rx1, ry0 + (t - w), 1, 0);
      else if (t < 2 * w + h)
        emit(rx1 - (t - w - h), ry1, 0, 1);
      else
        emit(rx0, ry1 - (t - 2 * w - h), -1, 0);
    }
    d->polyline = std::move(poly);
  }
  return PlanarDomain(d);
}

std::string PlanarDomain::kind_name() const {
  switch (d_->kind) {
    case DomainKind::UnitSquare: return "unit_square";
    case DomainKind::UnitDisc: return "unit_disc";
    case DomainKind::Rectangle: return "rectangle";
    case DomainKind::Disc: return "disc";
  }
  return "unknown";
}

// ---- field operations -------------------------------------------------------

double sup_norm(const ScalarField& f, NormRegion region) {
  const auto& d = f.domain;
  double m = -1.0;
  if (region == NormRegion::Boundary) {
    for (const auto& b : d.boundary())
      m = std::max(m, std::abs(f(b.i, b.j)));
  } else {
    for (int j = 0; j < d.ny(); ++j)
      for (int i = 0; i < d.nx(); ++i)
        if (d.has_value(i, j)) m = std::max(m, std::abs(f(i, j)));
  }
  if (m < 0) throw std::invalid_argument("sup_norm: empty region");
  return m;
}

double integrate(const ScalarField& f) { return integrate_on(f, f.domain); }

double integrate_on(const ScalarField& f, const PlanarDomain& region) {
  if (!f.domain.same_grid(region))
    throw std::invalid_argument("integrate_on: field and region grids differ");
  const auto& w = region.node_weights();
  double s = 0.0;
  for (size_t k = 0; k < w.size(); ++k)
    if (w[k] != 0.0) s += w[k] * f.v[k];
  return s;
}

}  // namespace areabound
