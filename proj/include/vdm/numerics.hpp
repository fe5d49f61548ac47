#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "vdm/grid.hpp"

namespace vdm {

/// Tolerances and limits for adaptive quadrature.
struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_subdivisions = 2000;
  double truncation_radius = 50.0;

  void validate() const;
};

/// Thrown when the subdivision budget is exhausted before the error target is
/// met. Carries the best estimate and its error bound.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(double estimate, double error_bound)
      : std::runtime_error("adaptive quadrature did not converge"),
        estimate_(estimate),
        error_bound_(error_bound) {}
  double estimate() const { return estimate_; }
  double error_bound() const { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

constexpr double kInfiniteUpperBound = std::numeric_limits<double>::infinity();

/// Adaptive Gauss-Kronrod integration of f over (a, b). b may be +infinity,
/// in which case the half-line is mapped onto a finite interval and the far
/// tail (beyond truncation_radius, once |f| < abs_tol/10) is dropped.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, const QuadratureSpec& spec = {});

/// Forward DFT; coefficients ordered by frequency -floor(n/2) .. ceil(n/2)-1,
/// normalized so that the frequency-0 coefficient is the mean.
std::vector<std::complex<double>> dft_forward(const std::vector<double>& values);
std::vector<double> dft_inverse(const std::vector<std::complex<double>>& coeffs);

/// Frequency carried by coefficient index i of an n-point transform.
inline int dft_frequency(int i, int n) { return i - n / 2; }
inline int dft_index(int freq, int n) { return freq + n / 2; }

/// Gegenbauer (ultraspherical) polynomial family C_n^lambda up to a degree cap.
struct GegenbauerEval {
  double order_lambda;
  int degree_cap;

  GegenbauerEval(double lambda, int cap);
};

/// C_n^lambda(x) by the three-term recurrence.
double gegenbauer(const GegenbauerEval& ev, int n, double x);

/// Centered second difference (f_{i+1} - 2 f_i + f_{i-1}) / h^2 at an
/// interior index of a uniform grid.
double second_difference(const GridFunction& f, int i);

}  // namespace vdm
