#include "areabound/integrands.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "areabound/expr.hpp"

namespace areabound {

namespace {

double fd_step(double arg) { return 1e-5 * (1.0 + std::abs(arg)); }

struct Scratch {
  std::vector<double> z, p, q;
  EvalPoint point(const EvalPoint& base) const {
    EvalPoint pt = base;
    pt.z = std::span<const double>(z);
    pt.p = std::span<const double>(p);
    pt.q = std::span<const double>(q);
    return pt;
  }
  explicit Scratch(const EvalPoint& base)
      : z(base.z.begin(), base.z.end()),
        p(base.p.begin(), base.p.end()),
        q(base.q.begin(), base.q.end()) {}
};

double area_radicand(std::span<const double> p, std::span<const double> q) {
  size_t m = p.size();
  if (m == 1) return 1.0 + p[0] * p[0] + q[0] * q[0];
  double pp = 0, qq = 0, pq = 0;
  for (size_t s = 0; s < m; ++s) {
    pp += p[s] * p[s];
    qq += q[s] * q[s];
    pq += p[s] * q[s];
  }
  return 1.0 + pp + qq + pp * qq - pq * pq;
}

}  // namespace

void Integrand::fd_gradient(const EvalPoint& pt, std::span<double> fp,
                            std::span<double> fq, std::span<double> fz) const {
  Scratch s(pt);
  int m = static_cast<int>(s.p.size());
  auto central = [&](std::vector<double>& slot, int k) {
    double save = slot[k];
    double h = fd_step(save);
    slot[k] = save + h;
    double up = value(s.point(pt));
    slot[k] = save - h;
    double dn = value(s.point(pt));
    slot[k] = save;
    return (up - dn) / (2 * h);
  };
  for (int k = 0; k < m; ++k) {
    fp[k] = central(s.p, k);
    fq[k] = central(s.q, k);
    fz[k] = s.z.empty() ? 0.0 : central(s.z, k);
  }
}

void Integrand::gradient(const EvalPoint& pt, std::span<double> fp,
                         std::span<double> fq, std::span<double> fz) const {
  if (analytic_grad) {
    analytic_grad(pt, fp, fq, fz);
    return;
  }
  fd_gradient(pt, fp, fq, fz);
}

std::array<double, 4> Integrand::hessian2(const EvalPoint& pt) const {
  if (codim != 1)
    throw std::invalid_argument("hessian2: defined for one-component integrands");
  if (analytic_hess2) return analytic_hess2(pt);
  // difference the first derivatives (analytic when present)
  Scratch s(pt);
  double g1[1], g2[1], gz[1];
  auto grad_at = [&](double dp, double dq, double& fp, double& fq) {
    double sp = s.p[0], sq = s.q[0];
    s.p[0] = sp + dp;
    s.q[0] = sq + dq;
    gradient(s.point(pt), std::span<double>(g1, 1), std::span<double>(g2, 1),
             std::span<double>(gz, 1));
    s.p[0] = sp;
    s.q[0] = sq;
    fp = g1[0];
    fq = g2[0];
  };
  double hp = fd_step(pt.p[0]), hq = fd_step(pt.q[0]);
  double fp_u, fq_u, fp_d, fq_d;
  grad_at(hp, 0, fp_u, fq_u);
  grad_at(-hp, 0, fp_d, fq_d);
  double fpp = (fp_u - fp_d) / (2 * hp);
  double fqp = (fq_u - fq_d) / (2 * hp);  // d(Fq)/dp
  grad_at(0, hq, fp_u, fq_u);
  grad_at(0, -hq, fp_d, fq_d);
  double fpq = (fp_u - fp_d) / (2 * hq);  // d(Fp)/dq
  double fqq = (fq_u - fq_d) / (2 * hq);
  return {fpp, fpq, fqp, fqq};
}

// ---- FermatWeight -----------------------------------------------------------

std::array<double, 2> FermatWeight::grad(double x, double y) const {
  if (gamma_grad) return gamma_grad(x, y);
  double hx = fd_step(x), hy = fd_step(y);
  return {(gamma(x + hx, y) - gamma(x - hx, y)) / (2 * hx),
          (gamma(x, y + hy) - gamma(x, y - hy)) / (2 * hy)};
}

FermatWeight FermatWeight::constant(double c) {
  if (c <= 0) throw std::invalid_argument("FermatWeight: constant must be positive");
  FermatWeight w;
  w.gamma = [c](double, double) { return c; };
  w.gamma_grad = [](double, double) { return std::array<double, 2>{0.0, 0.0}; };
  w.gamma0 = w.gamma1 = c;
  w.gamma2 = 0.0;
  return w;
}

FermatWeight FermatWeight::from_function(std::function<double(double, double)> g,
                                         const PlanarDomain& d) {
  FermatWeight w;
  w.gamma = std::move(g);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0, grad_sup = 0.0;
  for (int j = 0; j < d.ny(); ++j)
    for (int i = 0; i < d.nx(); ++i) {
      if (!d.has_value(i, j)) continue;
      double v = w.gamma(d.x(i), d.y(j));
      if (v <= 0)
        throw std::invalid_argument("FermatWeight: sampled Gamma is not positive");
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      auto gr = w.grad(d.x(i), d.y(j));
      grad_sup = std::max(grad_sup, std::hypot(gr[0], gr[1]));
    }
  w.gamma0 = lo;
  w.gamma1 = hi;
  w.gamma2 = grad_sup;
  return w;
}

// ---- area-type derivatives --------------------------------------------------

void fermat_first_derivatives(double gamma_value, const EvalPoint& pt,
                              std::span<double> fp, std::span<double> fq,
                              std::span<double> fz) {
  size_t m = pt.p.size();
  double w = std::sqrt(area_radicand(pt.p, pt.q));
  if (m == 1) {
    fp[0] = gamma_value * pt.p[0] / w;
    fq[0] = gamma_value * pt.q[0] / w;
    fz[0] = 0.0;
    return;
  }
  double pp = 0, qq = 0, pq = 0;
  for (size_t s = 0; s < m; ++s) {
    pp += pt.p[s] * pt.p[s];
    qq += pt.q[s] * pt.q[s];
    pq += pt.p[s] * pt.q[s];
  }
  for (size_t s = 0; s < m; ++s) {
    fp[s] = gamma_value * (pt.p[s] + pt.p[s] * qq - pt.q[s] * pq) / w;
    fq[s] = gamma_value * (pt.q[s] + pt.q[s] * pp - pt.p[s] * pq) / w;
    fz[s] = 0.0;
  }
}

// ---- builtins ---------------------------------------------------------------

Integrand builtin_area_nd(int m) {
  if (m < 1) throw std::invalid_argument("area_nd: codimension must be >= 1");
  Integrand f;
  f.name = m == 1 ? "area" : "area_nd";
  f.codim = m;
  f.value = [](const EvalPoint& pt) {
    return std::sqrt(area_radicand(pt.p, pt.q));
  };
  f.analytic_grad = [](const EvalPoint& pt, std::span<double> fp,
                       std::span<double> fq, std::span<double> fz) {
    fermat_first_derivatives(1.0, pt, fp, fq, fz);
  };
  if (m == 1) {
    f.analytic_hess2 = [](const EvalPoint& pt) -> std::array<double, 4> {
      double p = pt.p[0], q = pt.q[0];
      double w3 = std::pow(1.0 + p * p + q * q, 1.5);
      return {(1 + q * q) / w3, -p * q / w3, -p * q / w3, (1 + p * p) / w3};
    };
    f.certified_k0 = 1.0;
    f.certified_m1 = 1.0 / std::sqrt(8.0);
    f.certified_a3 = true;
  }
  return f;
}

Integrand builtin_area() { return builtin_area_nd(1); }

Integrand builtin_dirichlet(int m) {
  Integrand f;
  f.name = "dirichlet";
  f.codim = m;
  f.value = [](const EvalPoint& pt) {
    double s = 0;
    for (size_t k = 0; k < pt.p.size(); ++k)
      s += pt.p[k] * pt.p[k] + pt.q[k] * pt.q[k];
    return 0.5 * s;
  };
  f.analytic_grad = [](const EvalPoint& pt, std::span<double> fp,
                       std::span<double> fq, std::span<double> fz) {
    for (size_t k = 0; k < pt.p.size(); ++k) {
      fp[k] = pt.p[k];
      fq[k] = pt.q[k];
      fz[k] = 0.0;
    }
  };
  f.analytic_hess2 = [](const EvalPoint&) -> std::array<double, 4> {
    return {1.0, 0.0, 0.0, 1.0};
  };
  f.certified_m1 = 1.0;
  f.certified_a3 = true;
  return f;
}

Integrand builtin_fermat(const FermatWeight& w, int m) {
  Integrand f;
  f.name = "fermat";
  f.codim = m;
  auto gamma = w.gamma;
  f.value = [gamma](const EvalPoint& pt) {
    return gamma(pt.x, pt.y) * std::sqrt(area_radicand(pt.p, pt.q));
  };
  f.analytic_grad = [gamma](const EvalPoint& pt, std::span<double> fp,
                            std::span<double> fq, std::span<double> fz) {
    fermat_first_derivatives(gamma(pt.x, pt.y), pt, fp, fq, fz);
  };
  if (m == 1) {
    f.analytic_hess2 = [gamma](const EvalPoint& pt) -> std::array<double, 4> {
      double g = gamma(pt.x, pt.y);
      double p = pt.p[0], q = pt.q[0];
      double w3 = std::pow(1.0 + p * p + q * q, 1.5);
      return {g * (1 + q * q) / w3, -g * p * q / w3, -g * p * q / w3,
              g * (1 + p * p) / w3};
    };
  }
  return f;
}

Integrand builtin_area_broken() {
  Integrand f = builtin_area();
  f.name = "area-broken";
  f.analytic_grad = [](const EvalPoint& pt, std::span<double> fp,
                       std::span<double> fq, std::span<double> fz) {
    fermat_first_derivatives(1.0, pt, fp, fq, fz);
    fp[0] *= 1.05;  // intentional 5% fault
  };
  return f;
}

Integrand make_integrand(const std::string& spec, int m) {
  if (spec == "area") {
    if (m != 1) throw std::invalid_argument("integrand 'area' is one-component");
    return builtin_area();
  }
  if (spec == "area_nd") return builtin_area_nd(m);
  if (spec == "dirichlet") return builtin_dirichlet(m);
  if (spec == "area-broken") return builtin_area_broken();
  const std::string key = "fermat:gamma=";
  if (spec.rfind(key, 0) == 0) {
    Expression e = Expression::parse(spec.substr(key.size()));
    FermatWeight w;
    w.gamma = e.as_function();
    return builtin_fermat(w, m);
  }
  throw std::invalid_argument("unknown integrand '" + spec + "'");
}

// ---- hypothesis constants ---------------------------------------------------

namespace {

struct SampleState {
  std::vector<double> z, p, q;
  EvalPoint pt(double x, double y) {
    EvalPoint e;
    e.x = x;
    e.y = y;
    e.z = std::span<const double>(z);
    e.p = std::span<const double>(p);
    e.q = std::span<const double>(q);
    return e;
  }
};

}  // namespace

std::optional<double> estimate_k0(const Integrand& f, int budget,
                                  std::uint64_t seed) {
  if (f.codim != 1) throw std::invalid_argument("estimate_k0: one-component only");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  int n_radii = 61;
  int n_angles = std::max(8, budget / 2);
  SampleState s;
  s.z.assign(1, 0.0);
  s.p.assign(1, 0.0);
  s.q.assign(1, 0.0);
  double fp[1], fq[1], fz[1];

  auto probe = [&](double r, double& sup) {
    for (int a = 0; a < n_angles; ++a) {
      double th = 2 * M_PI * a / n_angles;
      s.p[0] = r * std::cos(th);
      s.q[0] = r * std::sin(th);
      s.z[0] = uni(rng);
      double x = uni(rng), y = uni(rng);
      f.gradient(s.pt(x, y), fp, fq, fz);
      sup = std::max(sup, std::hypot(fp[0], fq[0]));
    }
  };

  double sup = 0.0, sup_snapshot = 0.0;
  probe(0.0, sup);
  for (int k = 0; k < n_radii; ++k) {
    double r = std::pow(10.0, -2.0 + 5.0 * k / (n_radii - 1));  // 1e-2 .. 1e3
    probe(r, sup);
    if (r <= 100.0) sup_snapshot = sup;
  }
  double growth = (sup - sup_snapshot) / std::max(sup_snapshot, 1e-300);
  if (sup_snapshot > 0 && growth > 1e-3) return std::nullopt;
  if (sup_snapshot == 0 && sup > 1e-12) return std::nullopt;
  return sup;
}

double estimate_m1(const Integrand& f, int radial, int angular,
                   std::uint64_t seed) {
  if (f.codim != 1) throw std::invalid_argument("estimate_m1: one-component only");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  SampleState s;
  s.z.assign(1, 0.0);
  s.p.assign(1, 0.0);
  s.q.assign(1, 0.0);

  double min_eig = std::numeric_limits<double>::infinity();
  auto visit = [&](double p, double q) {
    s.p[0] = p;
    s.q[0] = q;
    s.z[0] = uni(rng);
    auto h = f.hessian2(s.pt(uni(rng), uni(rng)));
    double scale = std::max({1.0, std::abs(h[0]), std::abs(h[3])});
    if (std::abs(h[1] - h[2]) > 1e-8 * scale)
      throw std::runtime_error("estimate_m1: asymmetric Hessian (broken callbacks)");
    double off = 0.5 * (h[1] + h[2]);
    double mid = 0.5 * (h[0] + h[3]);
    double rad = std::hypot(0.5 * (h[0] - h[3]), off);
    min_eig = std::min(min_eig, mid - rad);
  };

  visit(0.0, 0.0);
  for (int r = 1; r <= radial; ++r) {
    double rr = static_cast<double>(r) / radial;  // reaches the rim exactly
    for (int a = 0; a < angular; ++a) {
      double th = 2 * M_PI * a / angular;
      visit(rr * std::cos(th), rr * std::sin(th));
    }
  }
  return min_eig;
}

bool check_A3(const Integrand& f, int budget, std::uint64_t seed) {
  if (f.codim != 1) throw std::invalid_argument("check_A3: one-component only");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-3.0, 3.0);
  SampleState s;
  s.z.assign(1, 0.0);
  s.p.assign(1, 0.0);
  s.q.assign(1, 0.0);
  double fp[1], fq[1], fz[1];
  for (int k = 0; k < budget; ++k) {
    s.z[0] = uni(rng);
    f.gradient(s.pt(uni(rng), uni(rng)), fp, fq, fz);
    if (std::abs(fp[0]) > 1e-10 || std::abs(fq[0]) > 1e-10) return false;
  }
  return true;
}

double coercivity_check(const Integrand& f, double m1, int budget,
                        std::uint64_t seed) {
  if (f.codim != 1)
    throw std::invalid_argument("coercivity_check: one-component only");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  SampleState s;
  s.z.assign(1, 0.0);
  s.p.assign(1, 0.0);
  s.q.assign(1, 0.0);
  double fp[1], fq[1], fz[1];
  int n_angles = std::max(8, budget / 2);

  double worst = std::numeric_limits<double>::infinity();
  auto visit = [&](double r) {
    for (int a = 0; a < n_angles; ++a) {
      double th = 2 * M_PI * a / n_angles;
      double p = r * std::cos(th), q = r * std::sin(th);
      s.p[0] = p;
      s.q[0] = q;
      s.z[0] = uni(rng);
      f.gradient(s.pt(uni(rng), uni(rng)), fp, fq, fz);
      double radial = p * fp[0] + q * fq[0];
      double r2 = p * p + q * q;
      double threshold = (r2 <= 1.0) ? m1 * r2 : m1 * std::sqrt(r2);
      worst = std::min(worst, radial - threshold);
    }
  };
  visit(0.0);
  for (int k = 1; k <= 40; ++k) visit(static_cast<double>(k) / 40.0);  // unit disc
  for (int k = 0; k <= 60; ++k) visit(std::pow(10.0, 3.0 * k / 60.0));  // 1..1e3
  return worst;
}

bool nonneg_radial_check(const Integrand& f, int budget, std::uint64_t seed) {
  return coercivity_check(f, 0.0, budget, seed) >= -1e-10;
}

double gradcheck(const Integrand& f, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.5, 1.5);
  int m = f.codim;
  SampleState s;
  s.z.assign(m, 0.0);
  s.p.assign(m, 0.0);
  s.q.assign(m, 0.0);
  std::vector<double> ap(m), aq(m), az(m), np(m), nq(m), nz(m);
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    for (int c = 0; c < m; ++c) {
      s.z[c] = uni(rng);
      s.p[c] = uni(rng);
      s.q[c] = uni(rng);
    }
    EvalPoint pt = s.pt(uni(rng), uni(rng));
    f.gradient(pt, ap, aq, az);
    f.fd_gradient(pt, np, nq, nz);
    for (int c = 0; c < m; ++c) {
      worst = std::max(worst, std::abs(ap[c] - np[c]) / (1 + std::abs(ap[c])));
      worst = std::max(worst, std::abs(aq[c] - nq[c]) / (1 + std::abs(aq[c])));
      worst = std::max(worst, std::abs(az[c] - nz[c]) / (1 + std::abs(az[c])));
    }
  }
  return worst;
}

// ---- mean curvature ---------------------------------------------------------

void SpatialWeight::grad(std::span<const double> x, std::span<double> out) const {
  if (gamma_grad) {
    gamma_grad(x, out);
    return;
  }
  std::vector<double> w(x.begin(), x.end());
  for (size_t k = 0; k < w.size(); ++k) {
    double save = w[k];
    double h = fd_step(save);
    w[k] = save + h;
    double up = gamma(w);
    w[k] = save - h;
    double dn = gamma(w);
    w[k] = save;
    out[k] = (up - dn) / (2 * h);
  }
}

SpatialWeight SpatialWeight::lift_xy(const FermatWeight& w) {
  SpatialWeight g;
  g.gamma = [w](std::span<const double> x) { return w.gamma(x[0], x[1]); };
  g.gamma_grad = [w](std::span<const double> x, std::span<double> out) {
    auto gr = w.grad(x[0], x[1]);
    std::fill(out.begin(), out.end(), 0.0);
    out[0] = gr[0];
    out[1] = gr[1];
  };
  return g;
}

ScalarField mean_curvature_field(const SpatialWeight& g, const GraphSurface& s,
                                 int sigma) {
  if (sigma < 0 || sigma >= s.codim())
    throw std::invalid_argument("mean_curvature_field: component out of range");
  const auto& d = s.domain();
  int m = s.codim(), n = m + 2;
  ScalarField out(d);
  ScalarField w = s.area_element();
  std::vector<double> X(n), gx(n);
  for (int j = 0; j < d.ny(); ++j)
    for (int i = 0; i < d.nx(); ++i) {
      if (!d.has_value(i, j)) continue;
      X[0] = d.x(i);
      X[1] = d.y(j);
      for (int c = 0; c < m; ++c) X[2 + c] = s.zeta(c, i, j);
      double gv = g.value(X);
      if (gv <= 0)
        throw std::invalid_argument("mean_curvature_field: Gamma <= 0 at a node");
      g.grad(X, gx);
      double ps = s.p(sigma, i, j), qs = s.q(sigma, i, j);
      double len = std::sqrt(1.0 + ps * ps + qs * qs);
      double dot = (-ps * gx[0] - qs * gx[1] + gx[2 + sigma]) / len;
      out.at(i, j) = dot / (2.0 * gv * w(i, j));
    }
  return out;
}

double h0_sampled(const SpatialWeight& g,
                  const std::vector<const GraphSurface*>& surfaces) {
  double sup = 0.0;
  for (const GraphSurface* s : surfaces) {
    const auto& d = s->domain();
    int m = s->codim(), n = m + 2;
    std::vector<double> X(n), gx(n);
    for (int j = 0; j < d.ny(); ++j)
      for (int i = 0; i < d.nx(); ++i) {
        if (!d.has_value(i, j)) continue;
        X[0] = d.x(i);
        X[1] = d.y(j);
        for (int c = 0; c < m; ++c) X[2 + c] = s->zeta(c, i, j);
        double gv = g.value(X);
        if (gv <= 0) throw std::invalid_argument("h0_sampled: Gamma <= 0 at a node");
        g.grad(X, gx);
        double norm = 0;
        for (double v : gx) norm += v * v;
        sup = std::max(sup, std::sqrt(norm) / (2.0 * gv));
      }
  }
  return sup;
}

}  // namespace areabound
