#pragma once

#include "vdm/evolution.hpp"

namespace vdm {

/// Maximal function over a parameter grid, with the detachment set
/// A = { x : u*(x) > u0(x) } and its connected components.
struct MaximalResult {
  GridFunction u_star;
  /// Per-point parameter achieving the max; 0 denotes the t -> 0 datum candidate.
  std::vector<double> arg_sup;
  std::vector<char> detachment_mask;
  /// Maximal runs of the mask as inclusive index intervals; on the torus a
  /// wrap-around run is reported as a single component with start > end.
  std::vector<std::pair<int, int>> components;
};

/// Centered maximal function: pointwise max of the datum candidate and the
/// evolutions over the parameter grid.
MaximalResult maximal_centered(const GridFunction& u0, const KernelSpec& spec,
                               const TimeGrid& tg, double detach_tol = 1e-9);

/// Variants reusing a prepared evolver, so that the kernel antiderivative
/// tables are shared across many data on the same grid.
MaximalResult maximal_centered_line(LineEvolver& ev, const GridFunction& u0,
                                    const TimeGrid& tg, double detach_tol = 1e-9);
MaximalResult maximal_centered_torus(TorusEvolver& ev, const GridFunction& u0,
                                     const TimeGrid& tg, double detach_tol = 1e-9);

/// Non-tangential Poisson maximal function on the line: supremum over the
/// discretized cone { (y,t) : t in tg, |y - x| <= alpha t } with 2*y_res+1
/// uniform cone samples per time, joined with the datum candidate.
MaximalResult maximal_nontangential(const GridFunction& u0, double alpha,
                                    const TimeGrid& tg, int y_res = 16,
                                    double detach_tol = 1e-9);

std::vector<std::pair<int, int>> detachment_components(const MaximalResult& res);

}  // namespace vdm
