#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace vdm {

enum class DomainKind { Line, Torus, ZonalSphere };

/// Discretization domain for a sampled datum.
///
/// Line grids are uniform on [x_min, x_max] including both endpoints; the
/// datum is taken to vanish outside the window (compact-support convention).
/// Torus grids hold n equispaced points x_j = j/n on the unit circle.
/// ZonalSphere grids hold n Gauss-Legendre colatitude nodes in (0, pi).
struct Domain {
  DomainKind kind = DomainKind::Line;
  double x_min = 0.0;
  double x_max = 1.0;
  int n = 0;
  int sphere_dim = 2;

  static Domain line(double x_min, double x_max, int n);
  static Domain torus(int n);
  static Domain zonal_sphere(int n, int d = 2);

  double spacing() const;
  bool operator==(const Domain&) const = default;
};

/// Real-valued function sampled on a Domain.
struct GridFunction {
  Domain domain;
  std::vector<double> values;

  GridFunction() = default;
  GridFunction(Domain dom, std::vector<double> vals);

  int size() const { return static_cast<int>(values.size()); }
  double spacing() const { return domain.spacing(); }

  /// Node position: x coordinate on Line/Torus, colatitude on ZonalSphere.
  double node(int i) const;

  double max_abs() const;
};

/// Gauss-Legendre nodes (ascending in x = cos(theta)) and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussLegendreRule& gauss_legendre(int n);

/// Discretization of the supremum parameter. Holds either a log-spaced grid
/// of times t > 0 or a grid of Poisson radii rho in [0, 1).
struct TimeGrid {
  std::vector<double> values;
  bool is_rho = false;

  static TimeGrid log_spaced(double t_min, double t_max, int n_t);
  /// rho grid on [0, rho_max] clustered toward 1 (1 - rho log-spaced).
  static TimeGrid rho_spaced(int n, double rho_max = 0.999);
  /// Default grid for a domain: t_min = h/10, t_max = 10 * length, 200 nodes.
  static TimeGrid default_for(const Domain& dom, int n_t = 200);
};

}  // namespace vdm
