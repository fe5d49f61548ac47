#pragma once

#include "vdm/grid.hpp"

namespace vdm {

struct VariationReport {
  double total_variation = 0.0;
  double grad_norm_1 = 0.0;
  double grad_norm_2 = 0.0;
  double grad_norm_inf = 0.0;
  double lipschitz = 0.0;
};

/// Discrete total variation: sum of |f_{i+1} - f_i|, with the wrap term on the
/// torus; zonal sphere grids use colatitude ordering without wrap.
double total_variation(const GridFunction& f);

/// Forward-difference gradient norm for p in {1, 2, inf}. Line/torus grids use
/// (sum |df/h|^p h)^{1/p}; the zonal sphere uses the colatitude spacing with
/// the 2 pi sin(theta) surface weight.
double grad_lp_norm(const GridFunction& f, double p);

/// Max adjacent-pair slope; exact for piecewise-linear-on-grid functions.
double lipschitz_constant(const GridFunction& f);

VariationReport variation_report(const GridFunction& f);

}  // namespace vdm
