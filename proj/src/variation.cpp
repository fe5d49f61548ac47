#include "vdm/variation.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace vdm {

double total_variation(const GridFunction& f) {
  double tv = 0.0;
  int n = f.size();
  for (int i = 0; i + 1 < n; ++i) tv += std::abs(f.values[i + 1] - f.values[i]);
  if (f.domain.kind == DomainKind::Torus)
    tv += std::abs(f.values[0] - f.values[n - 1]);
  return tv;
}

namespace {

double lp_accumulate(double p, double acc) {
  return (p == std::numeric_limits<double>::infinity()) ? acc : std::pow(acc, 1.0 / p);
}

}  // namespace

double grad_lp_norm(const GridFunction& f, double p) {
  bool is_inf = (p == std::numeric_limits<double>::infinity());
  if (!is_inf && p != 1.0 && p != 2.0)
    throw std::invalid_argument("grad_lp_norm supports p in {1, 2, inf}");
  int n = f.size();
  double acc = 0.0;
  if (f.domain.kind == DomainKind::ZonalSphere) {
    for (int i = 0; i + 1 < n; ++i) {
      double dth = f.node(i + 1) - f.node(i);
      double slope = (f.values[i + 1] - f.values[i]) / dth;
      double theta_mid = 0.5 * (f.node(i + 1) + f.node(i));
      double w = 2.0 * std::numbers::pi * std::sin(theta_mid) * dth;
      if (is_inf)
        acc = std::max(acc, std::abs(slope));
      else
        acc += std::pow(std::abs(slope), p) * w;
    }
    return lp_accumulate(p, acc);
  }
  double h = f.spacing();
  int pairs = (f.domain.kind == DomainKind::Torus) ? n : n - 1;
  for (int i = 0; i < pairs; ++i) {
    double slope = (f.values[(i + 1) % n] - f.values[i]) / h;
    if (is_inf)
      acc = std::max(acc, std::abs(slope));
    else
      acc += std::pow(std::abs(slope), p) * h;
  }
  return lp_accumulate(p, acc);
}

double lipschitz_constant(const GridFunction& f) {
  return grad_lp_norm(f, std::numeric_limits<double>::infinity());
}

VariationReport variation_report(const GridFunction& f) {
  VariationReport r;
  r.total_variation = total_variation(f);
  r.grad_norm_1 = grad_lp_norm(f, 1.0);
  r.grad_norm_2 = grad_lp_norm(f, 2.0);
  r.grad_norm_inf = grad_lp_norm(f, std::numeric_limits<double>::infinity());
  r.lipschitz = r.grad_norm_inf;
  return r;
}

}  // namespace vdm
