#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "vdm/maximal.hpp"
#include "vdm/variation.hpp"

using namespace vdm;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("total variation: hand values and the abs contraction") {
  Domain line = Domain::line(0.0, 1.0, 5);
  GridFunction f(line, {0.0, 1.0, -1.0, 0.5, 0.0});
  CHECK(total_variation(f) == doctest::Approx(1.0 + 2.0 + 1.5 + 0.5));
  GridFunction g(line, {0.0, 1.0, 1.0, 0.5, 0.0});
  CHECK(total_variation(g) == doctest::Approx(2.0));

  std::mt19937_64 rng(3);
  std::vector<double> v(40);
  for (double& x : v) x = (rng() >> 11) * 0x1.0p-53 - 0.5;
  Domain d40 = Domain::line(0.0, 1.0, 40);
  GridFunction h(d40, v);
  std::vector<double> av(v);
  for (double& x : av) x = std::abs(x);
  CHECK(total_variation(GridFunction(d40, av)) <= total_variation(h) + 1e-14);
}

TEST_CASE("total variation on the torus includes the wrap term") {
  Domain t4 = Domain::torus(4);
  GridFunction f(t4, {0.0, 1.0, 0.0, 2.0});
  CHECK(total_variation(f) == doctest::Approx(1.0 + 1.0 + 2.0 + 2.0));
}

TEST_CASE("gradient norms: ordering on a unit-length grid") {
  std::mt19937_64 rng(11);
  Domain dom = Domain::line(0.0, 1.0, 33);
  std::vector<double> v(33);
  for (double& x : v) x = (rng() >> 11) * 0x1.0p-53;
  GridFunction f(dom, v);
  double n1 = grad_lp_norm(f, 1.0);
  double n2 = grad_lp_norm(f, 2.0);
  double ninf = grad_lp_norm(f, std::numeric_limits<double>::infinity());
  CHECK(n1 <= n2 * (1.0 + 1e-12));
  CHECK(n2 <= ninf * (1.0 + 1e-12));
  CHECK(ninf == doctest::Approx(lipschitz_constant(f)));
  CHECK(n1 == doctest::Approx(total_variation(f)));
  CHECK_THROWS_AS(grad_lp_norm(f, 3.0), std::invalid_argument);
}

TEST_CASE("variation report is consistent") {
  Domain dom = Domain::torus(16);
  std::vector<double> v(16);
  for (int i = 0; i < 16; ++i) v[i] = std::sin(2.0 * kPi * i / 16.0);
  GridFunction f(dom, v);
  VariationReport rep = variation_report(f);
  CHECK(rep.total_variation == doctest::Approx(total_variation(f)));
  CHECK(rep.grad_norm_2 == doctest::Approx(grad_lp_norm(f, 2.0)));
  CHECK(rep.lipschitz == doctest::Approx(lipschitz_constant(f)));
}

namespace {

GridFunction bump_line(int n) {
  Domain dom = Domain::line(-1.0, 2.0, n);
  std::vector<double> v(n, 0.0);
  GridFunction probe(dom, v);
  for (int i = 0; i < n; ++i) {
    double x = probe.node(i);
    v[i] = std::max(0.0, 1.0 - 4.0 * std::abs(x - 0.5));
  }
  return GridFunction(dom, v);
}

}  // namespace

TEST_CASE("maximal function dominates the datum and detaches off the bump") {
  GridFunction u0 = bump_line(81);
  TimeGrid tg = TimeGrid::default_for(u0.domain, 60);
  MaximalResult res = maximal_centered(u0, KernelSpec::make_elliptic(1.0, 0.0), tg);
  int n = u0.size();
  bool any_detached = false;
  for (int i = 0; i < n; ++i) {
    CHECK(res.u_star.values[i] >= std::abs(u0.values[i]) - 1e-15);
    if (res.detachment_mask[i]) {
      any_detached = true;
      CHECK(res.arg_sup[i] > 0.0);
    }
  }
  CHECK(any_detached);
  // components cover exactly the masked indices
  std::vector<char> cover(n, 0);
  for (auto [a, b] : res.components)
    for (int i = a; i <= b; ++i) cover[i] = 1;
  for (int i = 0; i < n; ++i) CHECK(static_cast<bool>(cover[i]) ==
                                    static_cast<bool>(res.detachment_mask[i]));
}

TEST_CASE("torus maximal merges wrap-around detachment components") {
  Domain dom = Domain::torus(64);
  std::vector<double> v(64, 0.0);
  for (int i = 24; i <= 40; ++i) v[i] = 1.0 - std::abs(i - 32) / 9.0;
  GridFunction u0(dom, v);
  TimeGrid tg = TimeGrid::default_for(dom, 60);
  MaximalResult res = maximal_centered(u0, KernelSpec::make_elliptic(1.0, 1.0), tg);
  CHECK(res.detachment_mask[0]);
  CHECK(res.detachment_mask[63]);
  // the run through index 0 is reported once, not split at the seam
  bool split = res.components.size() >= 2 && res.components.front().first == 0 &&
               res.components.back().second == 63;
  CHECK(!split);
}

TEST_CASE("non-tangential maximal grows with the aperture") {
  GridFunction u0 = bump_line(61);
  TimeGrid tg = TimeGrid::default_for(u0.domain, 40);
  MaximalResult narrow = maximal_nontangential(u0, 0.0, tg, 8);
  MaximalResult wide = maximal_nontangential(u0, 1.0, tg, 8);
  for (int i = 0; i < u0.size(); ++i)
    CHECK(wide.u_star.values[i] >= narrow.u_star.values[i] - 1e-14);
}

TEST_CASE("maximal argument validation") {
  GridFunction u0 = bump_line(21);
  TimeGrid tg = TimeGrid::default_for(u0.domain, 10);
  CHECK_THROWS_AS(maximal_centered(u0, KernelSpec::make_elliptic(1.0, 0.0), tg, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(maximal_centered(u0, KernelSpec::spherical_poisson(2), tg),
                  std::invalid_argument);
  CHECK_THROWS_AS(maximal_nontangential(u0, -1.0, tg), std::invalid_argument);
  CHECK_THROWS_AS(maximal_nontangential(u0, 1.0, tg, 0), std::invalid_argument);

  Domain sph = Domain::zonal_sphere(16);
  GridFunction s0(sph, std::vector<double>(16, 1.0));
  // Poisson family needs a rho grid, heat a time grid.
  TimeGrid tsph = TimeGrid::default_for(sph, 10);
  CHECK_THROWS_AS(maximal_centered(s0, KernelSpec::spherical_poisson(2), tsph),
                  std::invalid_argument);
  CHECK_NOTHROW(maximal_centered(s0, KernelSpec::spherical_heat(2), tsph));
  TimeGrid rsph = TimeGrid::rho_spaced(10);
  CHECK_NOTHROW(maximal_centered(s0, KernelSpec::spherical_poisson(2), rsph));
  CHECK_THROWS_AS(maximal_centered(s0, KernelSpec::spherical_heat(2), rsph),
                  std::invalid_argument);
}

TEST_CASE("constant sphere datum never detaches") {
  Domain sph = Domain::zonal_sphere(24);
  GridFunction s0(sph, std::vector<double>(24, 0.7));
  MaximalResult res =
      maximal_centered(s0, KernelSpec::spherical_poisson(2), TimeGrid::rho_spaced(20));
  for (int i = 0; i < 24; ++i) {
    CHECK(res.u_star.values[i] == doctest::Approx(0.7).epsilon(1e-9));
    CHECK(!res.detachment_mask[i]);
  }
  CHECK(detachment_components(res).empty());
}
