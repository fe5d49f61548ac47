#pragma once

#include <map>
#include <memory>

#include "vdm/kernels.hpp"

namespace vdm {

/// Convolution of a line datum with the elliptic kernel. The datum is treated
/// as piecewise linear between grid nodes and zero outside the window; the
/// convolution is evaluated cell by cell through the kernel antiderivatives
///   K0(z) = int_0^z phi, K1(z) = int_0^z s phi(s) ds,
/// which makes it exact (up to the antiderivative accuracy) for
/// piecewise-linear-on-grid data. Antiderivative tables are cached per time.
class LineEvolver {
 public:
  LineEvolver(EllipticParams params, Domain line);

  GridFunction evolve(const GridFunction& u0, double t);

  /// Build antiderivative tables for all listed times up front, in parallel.
  /// After this, evolve() at those times only reads the cache, so a prepared
  /// evolver can be shared by concurrent callers.
  void prepare(const std::vector<double>& ts, int threads = 0);

  const EllipticParams& params() const { return params_; }

 private:
  struct Antiderivatives {
    std::vector<double> k0;  // K0 at multiples of h, 0..n-1
    std::vector<double> k1;
  };
  Antiderivatives build_tables(double t) const;
  const Antiderivatives& tables(double t);

  EllipticParams params_;
  Domain line_;
  std::map<double, Antiderivatives> cache_;
};

/// Convolution of a torus datum with the periodized kernel, treating the
/// datum as piecewise linear between the grid nodes. The periodized-kernel
/// antiderivatives K0, K1 at grid offsets are summed from the multiplier
/// Fourier series in closed form, so the evolution is the exact continuum
/// evolution of the nodal interpolant (up to series round-off). Tables are
/// cached per time, as in LineEvolver.
class TorusEvolver {
 public:
  TorusEvolver(EllipticParams params, Domain torus);

  GridFunction evolve(const GridFunction& u0, double t);

  /// Build antiderivative tables for all listed times up front, in parallel.
  void prepare(const std::vector<double>& ts, int threads = 0);

  const EllipticParams& params() const { return params_; }

 private:
  struct Antiderivatives {
    std::vector<double> k0;  // K0 at j/n, j = 0..n
    std::vector<double> k1;
  };
  Antiderivatives build_tables(double t) const;
  const Antiderivatives& tables(double t);

  EllipticParams params_;
  Domain domain_;
  std::map<double, Antiderivatives> cache_;
};

/// Zonal evolution on S^2. The datum |u0| is read as piecewise linear in
/// s = cos(theta) between the Gauss-Legendre nodes (extended linearly to the
/// poles, clamped at 0), its Legendre coefficients are computed exactly cell
/// by cell through the P_k antiderivative identities, and degree-k modes are
/// multiplied by rho^k (Poisson) or exp(-t k(k+1)) (heat). With the high
/// degree cap this is the continuum evolution of the nodal interpolant up to
/// a tiny truncation tail, so node values approach the datum as rho -> 1.
class ZonalEvolver {
 public:
  ZonalEvolver(KernelSpec spec, const GridFunction& u0);

  /// param is rho for the Poisson family, t for the heat family.
  GridFunction evolve(double param) const;

 private:
  KernelSpec spec_;
  Domain domain_;
  int degree_cap_;
  std::vector<double> coeffs_;          // Legendre coefficients of |u0|
  std::vector<double> suffix_abs_sum_;  // sum_{j>=k} |coeffs_[j]|
  std::vector<double> node_poly_;       // P_k at the nodes, k * n + j
};

/// Harmonic extension of a line datum to the upper half plane, evaluated at
/// arbitrary points through the sparse second-antiderivative form
///   u(y,t) = sum_j sigma_j G2(y - y_j),
/// where sigma_j are the slope jumps of the piecewise-linear datum and
/// G2'' is the Poisson kernel. Data with nonzero edge values are closed off
/// with a one-cell ramp to zero.
class PoissonHalfplane {
 public:
  explicit PoissonHalfplane(const GridFunction& u0);

  double eval(double y, double t) const;

 private:
  std::vector<double> positions_;
  std::vector<double> slope_jumps_;
};

GridFunction evolve_line(const GridFunction& u0, const KernelSpec& spec, double t);
GridFunction evolve_torus(const GridFunction& u0, const EllipticParams& params, double t);
GridFunction evolve_zonal_sphere(const GridFunction& u0, const KernelSpec& spec,
                                 double param);
double poisson_halfplane(const GridFunction& u0, double y, double t);

}  // namespace vdm
