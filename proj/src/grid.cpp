#include "vdm/grid.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numbers>

namespace vdm {

Domain Domain::line(double x_min, double x_max, int n) {
  if (n < 3) throw std::invalid_argument("line grid needs n >= 3");
  if (!(x_min < x_max)) throw std::invalid_argument("line grid needs x_min < x_max");
  Domain d;
  d.kind = DomainKind::Line;
  d.x_min = x_min;
  d.x_max = x_max;
  d.n = n;
  return d;
}

Domain Domain::torus(int n) {
  if (n < 3) throw std::invalid_argument("torus grid needs n >= 3");
  Domain d;
  d.kind = DomainKind::Torus;
  d.x_min = 0.0;
  d.x_max = 1.0;
  d.n = n;
  return d;
}

Domain Domain::zonal_sphere(int n, int dim) {
  if (n < 3) throw std::invalid_argument("sphere grid needs n >= 3");
  if (dim < 1) throw std::invalid_argument("sphere dimension must be >= 1");
  Domain d;
  d.kind = DomainKind::ZonalSphere;
  d.n = n;
  d.sphere_dim = dim;
  return d;
}

double Domain::spacing() const {
  switch (kind) {
    case DomainKind::Line:
      return (x_max - x_min) / (n - 1);
    case DomainKind::Torus:
      return 1.0 / n;
    case DomainKind::ZonalSphere:
      throw std::logic_error("zonal sphere grid has non-uniform spacing");
  }
  throw std::logic_error("bad domain kind");
}

GridFunction::GridFunction(Domain dom, std::vector<double> vals)
    : domain(dom), values(std::move(vals)) {
  if (static_cast<int>(values.size()) != domain.n)
    throw std::invalid_argument("value count does not match grid size");
  for (double v : values)
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite grid value");
}

double GridFunction::node(int i) const {
  switch (domain.kind) {
    case DomainKind::Line:
      return domain.x_min + i * domain.spacing();
    case DomainKind::Torus:
      return static_cast<double>(i) / domain.n;
    case DomainKind::ZonalSphere:
      return std::acos(gauss_legendre(domain.n).nodes[domain.n - 1 - i]);
  }
  throw std::logic_error("bad domain kind");
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

namespace {

GaussLegendreRule compute_gauss_legendre(int n) {
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton iteration on P_n, standard initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (x * p1 - p0) / (x * x - 1.0);
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  // The initial guesses run from x near 1 down to -1; report ascending nodes.
  std::reverse(rule.nodes.begin(), rule.nodes.end());
  std::reverse(rule.weights.begin(), rule.weights.end());
  return rule;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int n) {
  static std::mutex mtx;
  static std::map<int, GaussLegendreRule> cache;
  std::lock_guard lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

TimeGrid TimeGrid::log_spaced(double t_min, double t_max, int n_t) {
  if (!(t_min > 0.0) || !(t_min < t_max) || n_t < 2)
    throw std::invalid_argument("time grid needs 0 < t_min < t_max and n_t >= 2");
  TimeGrid tg;
  tg.values.resize(n_t);
  double a = std::log(t_min), b = std::log(t_max);
  for (int i = 0; i < n_t; ++i)
    tg.values[i] = std::exp(a + (b - a) * i / (n_t - 1));
  return tg;
}

TimeGrid TimeGrid::rho_spaced(int n, double rho_max) {
  if (n < 2 || !(rho_max > 0.0) || !(rho_max < 1.0))
    throw std::invalid_argument("rho grid needs n >= 2 and rho_max in (0,1)");
  TimeGrid tg;
  tg.is_rho = true;
  tg.values.resize(n);
  // 1 - rho log-spaced from 1 down to 1 - rho_max; first node is rho = 0.
  double a = std::log(1.0), b = std::log(1.0 - rho_max);
  for (int i = 0; i < n; ++i)
    tg.values[i] = 1.0 - std::exp(a + (b - a) * i / (n - 1));
  return tg;
}

TimeGrid TimeGrid::default_for(const Domain& dom, int n_t) {
  switch (dom.kind) {
    case DomainKind::Line: {
      double h = dom.spacing();
      return log_spaced(h / 10.0, 10.0 * (dom.x_max - dom.x_min), n_t);
    }
    case DomainKind::Torus:
      return log_spaced(dom.spacing() / 10.0, 10.0, n_t);
    case DomainKind::ZonalSphere: {
      // Heat flow on the sphere; colatitude resolution sets the small-time end.
      double h = std::numbers::pi / dom.n;
      return log_spaced(h * h / 10.0, 10.0 * std::numbers::pi, n_t);
    }
  }
  throw std::logic_error("bad domain kind");
}

}  // namespace vdm
