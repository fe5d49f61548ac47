#include "vdm/kernels.hpp"

#include <cmath>
#include <numbers>

namespace vdm {

namespace {
constexpr double kPi = std::numbers::pi;
}

EllipticParams::EllipticParams(double a_, double b_, int d_)
    : a(a_), b(b_), dimension(d_) {
  if (a < 0.0 || b < 0.0) throw std::invalid_argument("elliptic params need a, b >= 0");
  if (a == 0.0 && b == 0.0) throw std::invalid_argument("elliptic params need (a,b) != (0,0)");
  if (d_ < 1) throw std::invalid_argument("elliptic params need dimension >= 1");
}

KernelSpec KernelSpec::make_elliptic(double a, double b, int d) {
  KernelSpec s;
  s.family = Family::Elliptic;
  s.elliptic = EllipticParams(a, b, d);
  return s;
}

KernelSpec KernelSpec::spherical_poisson(int d) {
  KernelSpec s;
  s.family = Family::SphericalPoisson;
  s.sphere_dim = d;
  return s;
}

KernelSpec KernelSpec::spherical_heat(int d, int truncation) {
  if (truncation < 1) throw std::invalid_argument("heat truncation must be >= 1");
  KernelSpec s;
  s.family = Family::SphericalHeat;
  s.sphere_dim = d;
  s.heat_truncation = truncation;
  return s;
}

KernelSpec KernelSpec::non_tangential(double alpha) {
  if (alpha < 0.0) throw std::invalid_argument("aperture must be >= 0");
  KernelSpec s;
  s.family = Family::NonTangentialPoisson;
  s.aperture = alpha;
  s.elliptic = EllipticParams(1.0, 0.0, 1);
  return s;
}

double schoenberg_density(const EllipticParams& params, double t, double lambda) {
  if (!(params.a > 0.0))
    throw std::invalid_argument("schoenberg density needs a > 0 (use the heat closed form)");
  if (!(t > 0.0) || !(lambda > 0.0))
    throw std::invalid_argument("schoenberg density needs t > 0 and lambda > 0");
  double a = params.a, b = params.b;
  double expo = t * b / (2.0 * a) - lambda * b * b / (16.0 * kPi * a) -
                kPi * t * t / (a * lambda);
  return (t / std::sqrt(a)) * std::exp(expo) * std::pow(lambda, -1.5);
}

double elliptic_multiplier(const EllipticParams& params, double t, double xi_norm) {
  if (!(t > 0.0)) throw std::invalid_argument("multiplier needs t > 0");
  if (xi_norm < 0.0) throw std::invalid_argument("multiplier needs |xi| >= 0");
  double a = params.a, b = params.b;
  if (a == 0.0) {
    double w = 2.0 * kPi * xi_norm;
    return std::exp(-(t / b) * w * w);
  }
  if (xi_norm == 0.0) return 1.0;
  // (-b + sqrt(b^2 + 16 a pi^2 xi^2)) / (2a) rationalized; stable for small a.
  double s = 16.0 * a * kPi * kPi * xi_norm * xi_norm;
  double rate = s / (2.0 * a * (b + std::sqrt(b * b + s)));
  return std::exp(-t * rate);
}

namespace {

double gamma_half_int(double x) { return std::tgamma(x); }

double poisson_closed_form(int d, double t, double r) {
  double cd = gamma_half_int((d + 1) / 2.0) * std::pow(kPi, -(d + 1) / 2.0);
  return cd * t / std::pow(r * r + t * t, (d + 1) / 2.0);
}

double gauss_closed_form(int d, double s, double r) {
  return std::pow(4.0 * kPi * s, -d / 2.0) * std::exp(-r * r / (4.0 * s));
}

}  // namespace

double elliptic_kernel(const EllipticParams& params, double t, double x_norm,
                       const QuadratureSpec& quad) {
  if (!(t > 0.0)) throw std::invalid_argument("kernel needs t > 0");
  double r = std::abs(x_norm);
  double a = params.a, b = params.b;
  int d = params.dimension;
  if (b == 0.0) return poisson_closed_form(d, t / std::sqrt(a), r);
  if (a == 0.0) return gauss_closed_form(d, t / b, r);
  return elliptic_kernel_schoenberg(params, t, r, quad);
}

double elliptic_kernel_schoenberg(const EllipticParams& params, double t,
                                  double x_norm, const QuadratureSpec& quad) {
  if (!(t > 0.0)) throw std::invalid_argument("kernel needs t > 0");
  if (!(params.a > 0.0))
    throw std::invalid_argument("schoenberg path needs a > 0");
  double r = std::abs(x_norm);
  double a = params.a, b = params.b;
  int d = params.dimension;

  // Schoenberg representation, integrated in log(lambda) around the peak of
  // the combined exponent. q collects the time and space Gaussian scales.
  double q = t * t / a + r * r;
  double lambda_c = b > 0.0 ? 4.0 * kPi * std::sqrt(a * q) / b
                            : 2.0 * kPi * q / (d + 1);
  double log_pref = t * b / (2.0 * a) + std::log(t / std::sqrt(a));
  double power = -(3.0 + d) / 2.0;
  // Exponent written in u = log(lambda / lambda_c), so the log-power term
  // stays finite even where lambda would under- or overflow.
  double c_up = lambda_c * b * b / (16.0 * kPi * a);
  double c_down = kPi * q / lambda_c;
  double log_base = log_pref + (power + 1.0) * std::log(lambda_c);
  auto integrand = [=](double u) {
    double expo = log_base + (power + 1.0) * u - c_up * std::exp(u) -
                  c_down * std::exp(-u);
    return std::exp(expo);
  };
  double right = integrate_adaptive(integrand, 0.0, kInfiniteUpperBound, quad);
  double left = integrate_adaptive([&](double u) { return integrand(-u); }, 0.0,
                                   kInfiniteUpperBound, quad);
  return left + right;
}

double periodic_kernel(const EllipticParams& params, double t, double x,
                       const QuadratureSpec& quad) {
  if (!(t > 0.0)) throw std::invalid_argument("periodic kernel needs t > 0");
  if (params.dimension != 1)
    throw std::invalid_argument("periodic kernel implemented for d = 1");
  double xr = x - std::floor(x);  // reduce to [0, 1)
  if (params.b == 0.0) {
    // Geometric Fourier series in closed form.
    double rho = elliptic_multiplier(params, t, 1.0);
    double c = std::cos(2.0 * kPi * xr);
    return (1.0 - rho * rho) / (1.0 - 2.0 * rho * c + rho * rho);
  }
  if (elliptic_multiplier(params, t, 1.0) < 0.5) {
    double sum = 1.0;
    for (int n = 1; n < 100000; ++n) {
      double m = elliptic_multiplier(params, t, n);
      sum += 2.0 * m * std::cos(2.0 * kPi * xr * n);
      if (m < 1e-16) break;
    }
    return sum;
  }
  double sum = 0.0;
  for (int n = 0; n < 100000; ++n) {
    double term = elliptic_kernel(params, t, xr + n, quad);
    sum += term;
    if (n > 0) {
      double term2 = elliptic_kernel(params, t, xr - n, quad);
      sum += term2;
      term = std::max(term, term2);
    }
    if (n >= 1 && term < 1e-14) break;
  }
  return sum;
}

double sphere_surface_area(int d) {
  if (d < 1) throw std::invalid_argument("sphere dimension must be >= 1");
  return 2.0 * std::pow(kPi, (d + 1) / 2.0) / std::tgamma((d + 1) / 2.0);
}

double spherical_poisson(double cos_angle, double rho, int d) {
  if (std::abs(cos_angle) > 1.0)
    throw std::invalid_argument("spherical poisson needs |cos| <= 1");
  if (!(rho >= 0.0) || !(rho < 1.0))
    throw std::invalid_argument("spherical poisson needs rho in [0,1)");
  double denom = rho * rho - 2.0 * rho * cos_angle + 1.0;
  return (1.0 - rho * rho) /
         (sphere_surface_area(d) * std::pow(denom, (d + 1) / 2.0));
}

namespace {

// C_N^lambda(1) = binom(N + 2 lambda - 1, N).
double gegenbauer_at_one(double lambda, int n) {
  double c = 1.0;
  for (int k = 1; k <= n; ++k) c *= (k + 2.0 * lambda - 1.0) / k;
  return c;
}

double heat_tail_bound(double t, int d, int n) {
  double lambda = (d - 1) / 2.0;
  return std::exp(-t * n * (n + d - 1.0)) * ((n + lambda) / lambda) *
         gegenbauer_at_one(lambda, n);
}

}  // namespace

int spherical_heat_truncation(double t, int d, double tail_tol) {
  if (!(t > 0.0) || d < 2) throw std::invalid_argument("heat truncation needs t > 0, d >= 2");
  for (int n = 8; n <= 100000; ++n)
    if (heat_tail_bound(t, d, n) < tail_tol) return n;
  throw std::runtime_error("heat truncation search exceeded cap");
}

double spherical_heat(double cos_angle, double t, int d, int truncation,
                      double tail_tol) {
  if (std::abs(cos_angle) > 1.0)
    throw std::invalid_argument("spherical heat needs |cos| <= 1");
  if (!(t > 0.0)) throw std::invalid_argument("spherical heat needs t > 0");
  if (d < 2) throw std::invalid_argument("spherical heat needs d >= 2");
  if (truncation < 1) throw std::invalid_argument("spherical heat needs N >= 1");
  if (heat_tail_bound(t, d, truncation) >= tail_tol)
    throw std::invalid_argument(
        "spherical heat truncation insufficient for requested tail tolerance");
  double lambda = (d - 1) / 2.0;
  double x = cos_angle;
  double c0 = 1.0, c1 = 2.0 * lambda * x;
  double sum = 1.0;  // n = 0 term
  for (int n = 1; n <= truncation; ++n) {
    double cn = (n == 1) ? c1 : 0.0;
    if (n >= 2) {
      cn = (2.0 * x * (n + lambda - 1.0) * c1 - (n + 2.0 * lambda - 2.0) * c0) / n;
      c0 = c1;
      c1 = cn;
    }
    sum += std::exp(-t * n * (n + d - 1.0)) * ((n + lambda) / lambda) * cn;
  }
  double value = sum / sphere_surface_area(d);
  if (value < 0.0) {
    if (value > -tail_tol) return 0.0;
    throw std::runtime_error("spherical heat value below -tail_tol; increase N");
  }
  return value;
}

}  // namespace vdm
