#include "vdm/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vdm {

namespace {

std::vector<std::pair<int, int>> components_of_mask(const std::vector<char>& mask,
                                                    bool cyclic) {
  int n = static_cast<int>(mask.size());
  std::vector<std::pair<int, int>> runs;
  int i = 0;
  while (i < n) {
    if (!mask[i]) {
      ++i;
      continue;
    }
    int j = i;
    while (j + 1 < n && mask[j + 1]) ++j;
    runs.emplace_back(i, j);
    i = j + 1;
  }
  if (cyclic && runs.size() >= 2 && runs.front().first == 0 &&
      runs.back().second == n - 1) {
    // Merge the wrap-around run into a single cyclic component.
    runs.back().second = runs.front().second;
    runs.erase(runs.begin());
  }
  return runs;
}

MaximalResult finalize(const GridFunction& datum, GridFunction u_star,
                       std::vector<double> arg_sup, double detach_tol) {
  int n = datum.size();
  MaximalResult res;
  res.u_star = std::move(u_star);
  res.arg_sup = std::move(arg_sup);
  res.detachment_mask.resize(n);
  for (int i = 0; i < n; ++i) {
    double u0 = std::abs(datum.values[i]);
    res.detachment_mask[i] =
        res.u_star.values[i] - u0 > detach_tol * (1.0 + std::abs(u0));
  }
  res.components = components_of_mask(res.detachment_mask,
                                      datum.domain.kind == DomainKind::Torus);
  return res;
}

}  // namespace

MaximalResult maximal_centered(const GridFunction& u0, const KernelSpec& spec,
                               const TimeGrid& tg, double detach_tol) {
  if (!(detach_tol > 0.0)) throw std::invalid_argument("detach_tol must be > 0");
  if (tg.values.empty()) throw std::invalid_argument("empty parameter grid");
  int n = u0.size();

  // Datum candidate: u(x,t) -> |u0(x)| as the parameter approaches the datum.
  std::vector<double> best(n);
  for (int i = 0; i < n; ++i) best[i] = std::abs(u0.values[i]);
  std::vector<double> arg(n, 0.0);

  auto take = [&](const GridFunction& u, double param) {
    for (int i = 0; i < n; ++i)
      if (u.values[i] > best[i]) {
        best[i] = u.values[i];
        arg[i] = param;
      }
  };

  switch (u0.domain.kind) {
    case DomainKind::Line: {
      if (spec.family == KernelSpec::Family::Elliptic) {
        LineEvolver ev(spec.elliptic, u0.domain);
        ev.prepare(tg.values);
        return maximal_centered_line(ev, u0, tg, detach_tol);
      } else if (spec.family == KernelSpec::Family::NonTangentialPoisson) {
        return maximal_nontangential(u0, 0.0, tg, 1, detach_tol);
      } else {
        throw std::invalid_argument("kernel family incompatible with line domain");
      }
      break;
    }
    case DomainKind::Torus: {
      if (spec.family != KernelSpec::Family::Elliptic)
        throw std::invalid_argument("kernel family incompatible with torus domain");
      TorusEvolver ev(spec.elliptic, u0.domain);
      ev.prepare(tg.values);
      for (double t : tg.values) take(ev.evolve(u0, t), t);
      break;
    }
    case DomainKind::ZonalSphere: {
      bool poisson = spec.family == KernelSpec::Family::SphericalPoisson;
      if (!poisson && spec.family != KernelSpec::Family::SphericalHeat)
        throw std::invalid_argument("kernel family incompatible with sphere domain");
      if (poisson != tg.is_rho)
        throw std::invalid_argument("parameter grid kind does not match kernel family");
      ZonalEvolver ev(spec, u0);
      for (double p : tg.values) take(ev.evolve(p), p);
      break;
    }
  }
  return finalize(u0, GridFunction(u0.domain, std::move(best)), std::move(arg),
                  detach_tol);
}

MaximalResult maximal_centered_line(LineEvolver& ev, const GridFunction& u0,
                                    const TimeGrid& tg, double detach_tol) {
  if (!(detach_tol > 0.0)) throw std::invalid_argument("detach_tol must be > 0");
  int n = u0.size();
  int nt = static_cast<int>(tg.values.size());
  std::vector<double> best(n), arg(n, 0.0);
  for (int i = 0; i < n; ++i) best[i] = std::abs(u0.values[i]);
  std::vector<double> vals(static_cast<size_t>(n) * nt);
  std::vector<int> best_j(n, -1);
  for (int j = 0; j < nt; ++j) {
    double t = tg.values[j];
    GridFunction u = ev.evolve(u0, t);
    for (int i = 0; i < n; ++i) {
      vals[static_cast<size_t>(i) * nt + j] = u.values[i];
      if (u.values[i] > best[i]) {
        best[i] = u.values[i];
        arg[i] = t;
        best_j[i] = j;
      }
    }
  }

  // The grid sweep scallops the supremum in t (neighbouring nodes can snap to
  // the same sample while the true argmax moves), which shows up in second
  // differences of u*. Refine with the parabola through the best sample and
  // its neighbours in log t, then evaluate the evolution at the predicted
  // vertex. Candidates are true evolution values, so this only tightens the
  // estimate from below.
  std::vector<double> extra;
  for (int i = 0; i < n; ++i) {
    int j = best_j[i];
    if (j < 1 || j > nt - 2) continue;
    double lm = std::log(tg.values[j - 1]);
    double l0 = std::log(tg.values[j]);
    double lp = std::log(tg.values[j + 1]);
    const double* row = vals.data() + static_cast<size_t>(i) * nt;
    double fm = row[j - 1], f0 = row[j], fp = row[j + 1];
    double d1 = (f0 - fm) / (l0 - lm), d2 = (fp - f0) / (lp - l0);
    double curv = (d2 - d1) / (lp - lm);
    if (!(curv < 0.0)) continue;
    double vertex = 0.5 * (lm + l0) + 0.5 * d1 * (lp - lm) / (d1 - d2);
    vertex = std::clamp(vertex, lm, lp);
    // Snap to a fixed subdivision of the bracket so candidate times repeat
    // across data and the evolver's table cache is shared; the remaining
    // offset is far below the bracket scallop being corrected.
    constexpr int kSnap = 128;
    double frac = std::round((vertex - lm) / (lp - lm) * kSnap) / kSnap;
    extra.push_back(std::exp(lm + frac * (lp - lm)));
  }
  std::sort(extra.begin(), extra.end());
  extra.erase(std::unique(extra.begin(), extra.end()), extra.end());
  for (double t : extra) {
    GridFunction u = ev.evolve(u0, t);
    for (int i = 0; i < n; ++i)
      if (u.values[i] > best[i]) {
        best[i] = u.values[i];
        arg[i] = t;
      }
  }
  return finalize(u0, GridFunction(u0.domain, std::move(best)), std::move(arg),
                  detach_tol);
}

MaximalResult maximal_centered_torus(TorusEvolver& ev, const GridFunction& u0,
                                     const TimeGrid& tg, double detach_tol) {
  if (!(detach_tol > 0.0)) throw std::invalid_argument("detach_tol must be > 0");
  int n = u0.size();
  std::vector<double> best(n), arg(n, 0.0);
  for (int i = 0; i < n; ++i) best[i] = std::abs(u0.values[i]);
  for (double t : tg.values) {
    GridFunction u = ev.evolve(u0, t);
    for (int i = 0; i < n; ++i)
      if (u.values[i] > best[i]) {
        best[i] = u.values[i];
        arg[i] = t;
      }
  }
  return finalize(u0, GridFunction(u0.domain, std::move(best)), std::move(arg),
                  detach_tol);
}

MaximalResult maximal_nontangential(const GridFunction& u0, double alpha,
                                    const TimeGrid& tg, int y_res,
                                    double detach_tol) {
  if (!(detach_tol > 0.0)) throw std::invalid_argument("detach_tol must be > 0");
  if (alpha < 0.0) throw std::invalid_argument("aperture must be >= 0");
  if (y_res < 1) throw std::invalid_argument("y_res must be >= 1");
  if (u0.domain.kind != DomainKind::Line)
    throw std::invalid_argument("non-tangential maximal needs a line datum");

  PoissonHalfplane hp(u0);
  int n = u0.size();
  std::vector<double> best(n), arg(n, 0.0);
  for (int i = 0; i < n; ++i) best[i] = std::abs(u0.values[i]);

  int m = 2 * y_res + 1;
  constexpr double kGolden = 0.6180339887498949;

  // Supremum of the half-plane extension over the cone cross-section at
  // height t. The uniform scan scallops it by O(dy^2), which is visible in
  // second differences of u*, so the best sample is refined with a
  // golden-section search. Every candidate is a true boundary value, so
  // refinement only tightens the estimate from below, never past the sup.
  auto cone_max = [&](double x, double t) {
    if (alpha == 0.0) return hp.eval(x, t);
    double half = alpha * t;
    double dy = 2.0 * half / (m - 1);
    double v = -std::numeric_limits<double>::infinity();
    int best_k = 0;
    for (int k = 0; k < m; ++k) {
      double w = hp.eval(x - half + dy * k, t);
      if (w > v) {
        v = w;
        best_k = k;
      }
    }
    double lo = std::max(x - half, x - half + dy * (best_k - 1));
    double hi = std::min(x + half, x - half + dy * (best_k + 1));
    double y1 = hi - kGolden * (hi - lo);
    double y2 = lo + kGolden * (hi - lo);
    double f1 = hp.eval(y1, t), f2 = hp.eval(y2, t);
    for (int it = 0; it < 24; ++it) {
      v = std::max(v, std::max(f1, f2));
      if (f1 < f2) {
        lo = y1;
        y1 = y2;
        f1 = f2;
        y2 = lo + kGolden * (hi - lo);
        f2 = hp.eval(y2, t);
      } else {
        hi = y2;
        y2 = y1;
        f2 = f1;
        y1 = hi - kGolden * (hi - lo);
        f1 = hp.eval(y1, t);
      }
    }
    return std::max(v, std::max(f1, f2));
  };

  int nt = static_cast<int>(tg.values.size());
  for (int i = 0; i < n; ++i) {
    double x = u0.node(i);
    int best_j = -1;
    for (int j = 0; j < nt; ++j) {
      double t = tg.values[j];
      double v = cone_max(x, t);
      if (v > best[i]) {
        best[i] = v;
        arg[i] = t;
        best_j = j;
      }
    }
    // The time grid also scallops the supremum (the cone sup along the edge
    // varies with t between samples); refine in t around the best height.
    if (best_j >= 0) {
      double lo = tg.values[best_j > 0 ? best_j - 1 : best_j];
      double hi = tg.values[best_j + 1 < nt ? best_j + 1 : best_j];
      double t1 = hi - kGolden * (hi - lo);
      double t2 = lo + kGolden * (hi - lo);
      double f1 = cone_max(x, t1), f2 = cone_max(x, t2);
      for (int it = 0; it < 24; ++it) {
        double t_best = f1 >= f2 ? t1 : t2;
        double f_best = std::max(f1, f2);
        if (f_best > best[i]) {
          best[i] = f_best;
          arg[i] = t_best;
        }
        if (f1 < f2) {
          lo = t1;
          t1 = t2;
          f1 = f2;
          t2 = lo + kGolden * (hi - lo);
          f2 = cone_max(x, t2);
        } else {
          hi = t2;
          t2 = t1;
          f2 = f1;
          t1 = hi - kGolden * (hi - lo);
          f1 = cone_max(x, t1);
        }
      }
    }
  }
  return finalize(u0, GridFunction(u0.domain, std::move(best)), std::move(arg),
                  detach_tol);
}

std::vector<std::pair<int, int>> detachment_components(const MaximalResult& res) {
  return res.components;
}

}  // namespace vdm
