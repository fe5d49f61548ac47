#include "vdm/evolution.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

namespace vdm {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> abs_values(const GridFunction& u0) {
  std::vector<double> v = u0.values;
  for (double& x : v) x = std::abs(x);
  return v;
}

// Closed-form Poisson antiderivatives (d = 1, time tau).
double poisson_k0(double tau, double z) { return std::atan(z / tau) / kPi; }
double poisson_k1(double tau, double z) {
  return tau / (2.0 * kPi) * std::log1p(z * z / (tau * tau));
}

// Closed-form Gauss antiderivatives (d = 1, variance scale s = t/b).
double gauss_k0(double s, double z) { return 0.5 * std::erf(z / (2.0 * std::sqrt(s))); }
double gauss_k1(double s, double z) {
  return std::sqrt(s / kPi) * (1.0 - std::exp(-z * z / (4.0 * s)));
}

}  // namespace

LineEvolver::LineEvolver(EllipticParams params, Domain line)
    : params_(params), line_(line) {
  if (line_.kind != DomainKind::Line)
    throw std::invalid_argument("LineEvolver needs a line domain");
  if (params_.dimension != 1)
    throw std::invalid_argument("line convolution implemented for d = 1");
}

const LineEvolver::Antiderivatives& LineEvolver::tables(double t) {
  auto it = cache_.find(t);
  if (it != cache_.end()) return it->second;
  return cache_.emplace(t, build_tables(t)).first->second;
}

void LineEvolver::prepare(const std::vector<double>& ts, int threads) {
  std::vector<double> missing;
  for (double t : ts)
    if (!cache_.count(t)) missing.push_back(t);
  if (missing.empty()) return;
  if (threads <= 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<int>(threads, static_cast<int>(missing.size()));
  std::vector<Antiderivatives> built(missing.size());
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (size_t i = next.fetch_add(1); i < missing.size(); i = next.fetch_add(1))
        built[i] = build_tables(missing[i]);
    });
  for (auto& th : pool) th.join();
  for (size_t i = 0; i < missing.size(); ++i)
    cache_.emplace(missing[i], std::move(built[i]));
}

LineEvolver::Antiderivatives LineEvolver::build_tables(double t) const {
  int n = line_.n;
  double h = line_.spacing();
  Antiderivatives tab;
  tab.k0.resize(n);
  tab.k1.resize(n);
  if (params_.b == 0.0) {
    double tau = t / std::sqrt(params_.a);
    for (int k = 0; k < n; ++k) {
      tab.k0[k] = poisson_k0(tau, k * h);
      tab.k1[k] = poisson_k1(tau, k * h);
    }
  } else if (params_.a == 0.0) {
    double s = t / params_.b;
    for (int k = 0; k < n; ++k) {
      tab.k0[k] = gauss_k0(s, k * h);
      tab.k1[k] = gauss_k1(s, k * h);
    }
  } else {
    // Schoenberg subordination phi(t, x) = int w_t(lambda) e^{-pi x^2 / lambda}
    // d lambda turns both antiderivatives into single quadratures with
    // closed-form inner factors:
    //   K0(z) = int w_t(lambda) (sqrt(lambda) / 2) erf(sqrt(pi) z / sqrt(lambda))
    //   K1(z) = int w_t(lambda) (lambda / 2 pi) (1 - e^{-pi z^2 / lambda}),
    // integrated in u = log(lambda / lambda_c) exactly as the pointwise
    // kernel does, so no nested adaptive quadrature is needed.
    double a = params_.a, b = params_.b;
    double q = t * t / a;
    double lambda_c = 4.0 * kPi * std::sqrt(a * q) / b;
    double log_pref = t * b / (2.0 * a) + std::log(t / std::sqrt(a));
    double power = -2.0;  // -(3 + d) / 2 with d = 1
    double c_up = lambda_c * b * b / (16.0 * kPi * a);
    double c_down = kPi * q / lambda_c;
    double log_base = log_pref + (power + 1.0) * std::log(lambda_c);
    double sqrt_lc = std::sqrt(lambda_c);
    QuadratureSpec quad;
    quad.abs_tol = 1e-14;
    quad.rel_tol = 1e-11;
    // The lambda powers of the inner factors are folded into the exponent
    // (never exponentiating u on its own), so large |u| underflows cleanly
    // instead of producing 0 * inf.
    auto integral = [&](auto&& g) {
      return integrate_adaptive(g, 0.0, kInfiniteUpperBound, quad) +
             integrate_adaptive([&](double u) { return g(-u); }, 0.0,
                                kInfiniteUpperBound, quad);
    };
    tab.k0[0] = 0.0;
    tab.k1[0] = 0.0;
    for (int k = 1; k < n; ++k) {
      double z = k * h;
      tab.k0[k] = 0.5 * sqrt_lc *
                  integral([&](double u) {
                    double expo = log_base + (power + 1.5) * u -
                                  c_up * std::exp(u) - c_down * std::exp(-u);
                    double arg = std::sqrt(kPi) * z * std::exp(-0.5 * u) / sqrt_lc;
                    return std::exp(expo) * std::erf(arg);
                  });
      tab.k1[k] = lambda_c / (2.0 * kPi) *
                  integral([&](double u) {
                    double expo = log_base + (power + 2.0) * u -
                                  c_up * std::exp(u) - c_down * std::exp(-u);
                    double w = kPi * z * z * std::exp(-u) / lambda_c;
                    return -std::exp(expo) * std::expm1(-w);
                  });
    }
  }
  return tab;
}

GridFunction LineEvolver::evolve(const GridFunction& u0, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("evolution needs t > 0");
  if (!(u0.domain == line_)) throw std::invalid_argument("datum grid mismatch");
  const Antiderivatives& tab = tables(t);
  int n = line_.n;
  double h = line_.spacing();
  std::vector<double> u = abs_values(u0);

  // Signed antiderivatives at offsets k in [-(n-1), n-1].
  auto k0s = [&](int k) { return k >= 0 ? tab.k0[k] : -tab.k0[-k]; };
  auto k1s = [&](int k) { return tab.k1[std::abs(k)]; };

  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j + 1 < n; ++j) {
      double s = (u[j + 1] - u[j]) / h;
      int khi = i - j, klo = i - j - 1;
      // Value of the linear extension of cell j at x_i.
      double a_val = u[j] + s * (khi * h);
      acc += a_val * (k0s(khi) - k0s(klo)) - s * (k1s(khi) - k1s(klo));
    }
    out[i] = std::max(acc, 0.0);
  }
  return GridFunction(line_, std::move(out));
}

TorusEvolver::TorusEvolver(EllipticParams params, Domain torus)
    : params_(params), domain_(torus) {
  if (domain_.kind != DomainKind::Torus)
    throw std::invalid_argument("TorusEvolver needs a torus domain");
  if (params_.dimension != 1)
    throw std::invalid_argument("torus convolution implemented for d = 1");
}

const TorusEvolver::Antiderivatives& TorusEvolver::tables(double t) {
  auto it = cache_.find(t);
  if (it != cache_.end()) return it->second;
  return cache_.emplace(t, build_tables(t)).first->second;
}

void TorusEvolver::prepare(const std::vector<double>& ts, int threads) {
  std::vector<double> missing;
  for (double t : ts)
    if (!cache_.count(t)) missing.push_back(t);
  if (missing.empty()) return;
  if (threads <= 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<int>(threads, static_cast<int>(missing.size()));
  std::vector<Antiderivatives> built(missing.size());
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (size_t i = next.fetch_add(1); i < missing.size(); i = next.fetch_add(1))
        built[i] = build_tables(missing[i]);
    });
  for (auto& th : pool) th.join();
  for (size_t i = 0; i < missing.size(); ++i)
    cache_.emplace(missing[i], std::move(built[i]));
}

TorusEvolver::Antiderivatives TorusEvolver::build_tables(double t) const {
  if (!(t > 0.0)) throw std::invalid_argument("evolution needs t > 0");
  int n = domain_.n;
  // Psi(z) = 1 + 2 sum_k m_k cos(2 pi k z), so
  //   K0(z) = z + sum_k m_k sin(2 pi k z) / (pi k),
  //   K1(z) = z^2/2 + sum_k m_k [ (cos(2 pi k z) - 1) / (2 pi^2 k^2)
  //                               + z sin(2 pi k z) / (pi k) ].
  // At z = j/n the angles reduce to the fixed table 2 pi (k j mod n) / n.
  std::vector<double> s_tab(n), c_tab(n);
  for (int r = 0; r < n; ++r) {
    s_tab[r] = std::sin(2.0 * kPi * r / n);
    c_tab[r] = std::cos(2.0 * kPi * r / n);
  }
  Antiderivatives tab;
  tab.k0.resize(n + 1);
  tab.k1.resize(n + 1);
  for (int j = 0; j <= n; ++j) {
    double z = static_cast<double>(j) / n;
    tab.k0[j] = z;
    tab.k1[j] = 0.5 * z * z;
  }
  for (long k = 1; k <= 2000000; ++k) {
    double m = elliptic_multiplier(params_, t, static_cast<double>(k));
    double c0 = m / (kPi * k);
    double c1 = m / (2.0 * kPi * kPi * k * k);
    if (c0 < 1e-17) break;
    for (int j = 0; j <= n; ++j) {
      int r = static_cast<int>((k * j) % n);
      double z = static_cast<double>(j) / n;
      tab.k0[j] += c0 * s_tab[r];
      tab.k1[j] += c1 * (c_tab[r] - 1.0) + z * c0 * s_tab[r];
    }
  }
  return tab;
}

GridFunction TorusEvolver::evolve(const GridFunction& u0, double t) {
  if (!(u0.domain == domain_)) throw std::invalid_argument("datum grid mismatch");
  const Antiderivatives& tab = tables(t);
  int n = domain_.n;
  std::vector<double> u = abs_values(u0);
  auto k0s = [&](int j) { return j >= 0 ? tab.k0[j] : -tab.k0[-j]; };
  auto k1s = [&](int j) { return tab.k1[std::abs(j)]; };
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
      double s = (u[(j + 1) % n] - u[j]) * n;
      int jz = i - j;
      if (jz < 0) jz += n;  // representative offset in [0, 1)
      double a_val = u[j] + s * (static_cast<double>(jz) / n);
      acc += a_val * (k0s(jz) - k0s(jz - 1)) - s * (k1s(jz) - k1s(jz - 1));
    }
    out[i] = std::max(acc, 0.0);
  }
  return GridFunction(domain_, std::move(out));
}

namespace {

// Degree cap for the zonal Legendre expansion. At rho = 0.999 the neglected
// tail of a piecewise-linear datum is below 1e-5.
constexpr int kZonalDegreeCap = 6000;

}  // namespace

ZonalEvolver::ZonalEvolver(KernelSpec spec, const GridFunction& u0)
    : spec_(spec), domain_(u0.domain), degree_cap_(kZonalDegreeCap) {
  if (domain_.kind != DomainKind::ZonalSphere)
    throw std::invalid_argument("ZonalEvolver needs a zonal sphere domain");
  if (spec_.family != KernelSpec::Family::SphericalPoisson &&
      spec_.family != KernelSpec::Family::SphericalHeat)
    throw std::invalid_argument("ZonalEvolver needs a spherical kernel family");
  if (domain_.sphere_dim != 2)
    throw std::invalid_argument("zonal evolution implemented for d = 2");

  int n = domain_.n;
  int big_k = degree_cap_;
  const auto& rule = gauss_legendre(n);
  std::vector<double> u = abs_values(u0);

  // Cell endpoints in s = cos(theta): the poles plus the ascending GL nodes.
  // Grid index i corresponds to GL node n-1-i (colatitude ascending).
  int m = n + 2;
  std::vector<double> es(m), ws(m);
  es[0] = -1.0;
  es[m - 1] = 1.0;
  for (int j = 0; j < n; ++j) {
    es[j + 1] = rule.nodes[j];
    ws[j + 1] = u[n - 1 - j];
  }
  // Extend linearly to the poles with the boundary cell slope, clamped at 0.
  double slope_lo = (ws[2] - ws[1]) / (es[2] - es[1]);
  double slope_hi = (ws[m - 2] - ws[m - 3]) / (es[m - 2] - es[m - 3]);
  ws[0] = std::max(0.0, ws[1] - slope_lo * (es[1] - es[0]));
  ws[m - 1] = std::max(0.0, ws[m - 2] + slope_hi * (es[m - 1] - es[m - 2]));

  // P_k at every endpoint, degrees 0 .. big_k + 2, k-major.
  std::vector<double> pk((big_k + 3) * m);
  for (int i = 0; i < m; ++i) {
    pk[i] = 1.0;
    pk[m + i] = es[i];
  }
  for (int k = 1; k <= big_k + 1; ++k)
    for (int i = 0; i < m; ++i)
      pk[(k + 1) * m + i] =
          ((2 * k + 1) * es[i] * pk[k * m + i] - k * pk[(k - 1) * m + i]) / (k + 1);

  // Antiderivative of P_k: Q_k = (P_{k+1} - P_{k-1}) / (2k+1) for k >= 1,
  // Q_0 = s; and s P_k = ((k+1) P_{k+1} + k P_{k-1}) / (2k+1).
  auto q_at = [&](int k, int i) {
    if (k == 0) return es[i];
    return (pk[(k + 1) * m + i] - pk[(k - 1) * m + i]) / (2 * k + 1);
  };
  auto int_p = [&](int k, int c) { return q_at(k, c + 1) - q_at(k, c); };
  auto int_sp = [&](int k, int c) {
    if (k == 0) return int_p(1, c);
    return ((k + 1.0) * (q_at(k + 1, c + 1) - q_at(k + 1, c)) +
            k * (q_at(k - 1, c + 1) - q_at(k - 1, c))) /
           (2 * k + 1);
  };

  coeffs_.assign(big_k + 1, 0.0);
  for (int c = 0; c + 1 < m; ++c) {
    double dx = es[c + 1] - es[c];
    if (!(dx > 0.0)) continue;
    double alpha = (ws[c + 1] - ws[c]) / dx;
    double beta = ws[c] - alpha * es[c];
    for (int k = 0; k <= big_k; ++k)
      coeffs_[k] += alpha * int_sp(k, c) + beta * int_p(k, c);
  }
  for (int k = 0; k <= big_k; ++k) coeffs_[k] *= (2.0 * k + 1.0) / 2.0;

  suffix_abs_sum_.assign(big_k + 2, 0.0);
  for (int k = big_k; k >= 0; --k)
    suffix_abs_sum_[k] = suffix_abs_sum_[k + 1] + std::abs(coeffs_[k]);

  // Keep the node block of the P table for synthesis.
  node_poly_.resize((big_k + 1) * n);
  for (int k = 0; k <= big_k; ++k)
    for (int j = 0; j < n; ++j) node_poly_[k * n + j] = pk[k * m + j + 1];
}

GridFunction ZonalEvolver::evolve(double param) const {
  int n = domain_.n;
  bool poisson = spec_.family == KernelSpec::Family::SphericalPoisson;
  if (poisson) {
    if (!(param >= 0.0) || !(param < 1.0))
      throw std::invalid_argument("poisson evolution needs rho in [0,1)");
  } else if (!(param > 0.0)) {
    throw std::invalid_argument("heat evolution needs t > 0");
  }
  double tail_cut = 1e-15 * (1.0 + suffix_abs_sum_[0]);
  std::vector<double> out(n, 0.0);
  double rho_pow = 1.0;
  for (int k = 0; k <= degree_cap_; ++k) {
    double mult;
    if (poisson) {
      mult = rho_pow;
      rho_pow *= param;
    } else {
      mult = std::exp(-param * k * (k + 1.0));
    }
    if (mult * suffix_abs_sum_[k] < tail_cut) break;
    double ck = coeffs_[k] * mult;
    const double* row = &node_poly_[static_cast<size_t>(k) * n];
    for (int j = 0; j < n; ++j) out[j] += ck * row[j];
  }
  std::vector<double> by_theta(n);
  for (int j = 0; j < n; ++j) by_theta[n - 1 - j] = std::max(0.0, out[j]);
  return GridFunction(domain_, std::move(by_theta));
}

PoissonHalfplane::PoissonHalfplane(const GridFunction& u0) {
  if (u0.domain.kind != DomainKind::Line)
    throw std::invalid_argument("PoissonHalfplane needs a line datum");
  int n = u0.size();
  double h = u0.spacing();
  std::vector<double> u = abs_values(u0);
  std::vector<double> xs, ys;
  xs.reserve(n + 4);
  ys.reserve(n + 4);
  // Close off nonzero edge values with a one-cell ramp to zero.
  if (u.front() != 0.0) {
    xs.push_back(u0.node(0) - h);
    ys.push_back(0.0);
  }
  for (int i = 0; i < n; ++i) {
    xs.push_back(u0.node(i));
    ys.push_back(u[i]);
  }
  if (u.back() != 0.0) {
    xs.push_back(u0.node(n - 1) + h);
    ys.push_back(0.0);
  }
  int m = static_cast<int>(xs.size());
  double max_slope = 0.0;
  std::vector<double> slopes(m + 1, 0.0);
  for (int j = 0; j + 1 < m; ++j) {
    slopes[j + 1] = (ys[j + 1] - ys[j]) / (xs[j + 1] - xs[j]);
    max_slope = std::max(max_slope, std::abs(slopes[j + 1]));
  }
  double cut = 1e-14 * max_slope;
  for (int j = 0; j < m; ++j) {
    double sigma = slopes[j + 1] - slopes[j];
    if (std::abs(sigma) > cut) {
      positions_.push_back(xs[j]);
      slope_jumps_.push_back(sigma);
    }
  }
}

double PoissonHalfplane::eval(double y, double t) const {
  if (!(t > 0.0)) throw std::invalid_argument("halfplane evaluation needs t > 0");
  // G2(z) = (z atan(z/t) - (t/2) log(t^2 + z^2)) / pi, with G2'' the Poisson kernel.
  double acc = 0.0;
  for (size_t j = 0; j < positions_.size(); ++j) {
    double z = y - positions_[j];
    double g2 = (z * std::atan(z / t) - 0.5 * t * std::log(t * t + z * z)) / kPi;
    acc += slope_jumps_[j] * g2;
  }
  return acc;
}

GridFunction evolve_line(const GridFunction& u0, const KernelSpec& spec, double t) {
  if (spec.family != KernelSpec::Family::Elliptic)
    throw std::invalid_argument("evolve_line needs an elliptic kernel spec");
  LineEvolver ev(spec.elliptic, u0.domain);
  return ev.evolve(u0, t);
}

GridFunction evolve_torus(const GridFunction& u0, const EllipticParams& params,
                          double t) {
  if (!(t > 0.0)) throw std::invalid_argument("evolution needs t > 0");
  if (u0.domain.kind != DomainKind::Torus)
    throw std::invalid_argument("evolve_torus needs a torus datum");
  int n = u0.domain.n;
  auto coeffs = dft_forward(abs_values(u0));
  for (int i = 0; i < n; ++i)
    coeffs[i] *= elliptic_multiplier(params, t, std::abs(dft_frequency(i, n)));
  return GridFunction(u0.domain, dft_inverse(coeffs));
}

GridFunction evolve_zonal_sphere(const GridFunction& u0, const KernelSpec& spec,
                                 double param) {
  return ZonalEvolver(spec, u0).evolve(param);
}

double poisson_halfplane(const GridFunction& u0, double y, double t) {
  return PoissonHalfplane(u0).eval(y, t);
}

}  // namespace vdm
