#pragma once

#include "vdm/numerics.hpp"

namespace vdm {

/// Parameters of the elliptic kernel family. The Fourier symbol is
/// exp(-t (-b + sqrt(b^2 + 16 a pi^2 |xi|^2)) / (2a)) for a > 0 and the Gauss
/// symbol exp(-(t/b)(2 pi |xi|)^2) for a = 0.
struct EllipticParams {
  double a = 1.0;
  double b = 0.0;
  int dimension = 1;

  EllipticParams() = default;
  EllipticParams(double a_, double b_, int d_);
};

struct KernelSpec {
  enum class Family { Elliptic, SphericalPoisson, SphericalHeat, NonTangentialPoisson };

  Family family = Family::Elliptic;
  EllipticParams elliptic{};
  int sphere_dim = 2;
  int heat_truncation = 64;
  double aperture = 0.0;  // cone aperture alpha for the non-tangential case

  static KernelSpec make_elliptic(double a, double b, int d = 1);
  static KernelSpec spherical_poisson(int d = 2);
  static KernelSpec spherical_heat(int d = 2, int truncation = 64);
  static KernelSpec non_tangential(double alpha);
};

/// Density of the Schoenberg mixing measure for a > 0, t > 0:
///   exp(tb/(2a)) (t/sqrt(a)) exp(-lambda b^2/(16 pi a)) exp(-pi t^2/(a lambda)) lambda^{-3/2}.
double schoenberg_density(const EllipticParams& params, double t, double lambda);

/// Fourier multiplier of the elliptic family at radial frequency |xi|.
double elliptic_multiplier(const EllipticParams& params, double t, double xi_norm);

/// Space-side kernel value at radius |x|. Dispatches to the Poisson closed
/// form (b = 0), the Gauss closed form (a = 0), or quadrature of the
/// Schoenberg representation (a, b > 0).
double elliptic_kernel(const EllipticParams& params, double t, double x_norm,
                       const QuadratureSpec& quad = {});

/// Schoenberg-representation quadrature path, available for any a > 0
/// (including b = 0). Used by elliptic_kernel when no closed form applies and
/// by the parameter-continuity cross-checks.
double elliptic_kernel_schoenberg(const EllipticParams& params, double t,
                                  double x_norm, const QuadratureSpec& quad = {});

/// Periodized kernel on the unit torus (d = 1): Fourier series for large t,
/// truncated lattice sum of the space-side kernel for small t.
double periodic_kernel(const EllipticParams& params, double t, double x,
                       const QuadratureSpec& quad = {});

/// Surface area of the unit sphere S^d in R^{d+1}.
double sphere_surface_area(int d);

/// Poisson kernel on S^d:
///   (1 - rho^2) / (sigma_d (rho^2 - 2 rho cos + 1)^{(d+1)/2}).
double spherical_poisson(double cos_angle, double rho, int d);

/// Heat kernel on S^d via the truncated Gegenbauer series
///   (1/sigma_d) sum_{n<=N} exp(-t n(n+d-1)) ((n+lambda)/lambda) C_n^lambda(cos),
/// lambda = (d-1)/2. Throws if the tail bound at degree N exceeds tail_tol.
double spherical_heat(double cos_angle, double t, int d, int truncation,
                      double tail_tol = 1e-10);

/// Smallest truncation degree (at least 8) whose tail bound is below tail_tol.
int spherical_heat_truncation(double t, int d, double tail_tol = 1e-10);

}  // namespace vdm
