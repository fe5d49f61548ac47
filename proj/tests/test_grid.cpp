#include <doctest.h>

#include <cmath>
#include <numbers>

#include "vdm/grid.hpp"

using namespace vdm;

TEST_CASE("domain factories validate") {
  CHECK_THROWS_AS(Domain::line(1.0, 0.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(Domain::line(0.0, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(Domain::torus(0), std::invalid_argument);
  CHECK_THROWS_AS(Domain::zonal_sphere(0), std::invalid_argument);
  CHECK_THROWS_AS(Domain::zonal_sphere(8).spacing(), std::logic_error);
}

TEST_CASE("grid nodes") {
  Domain line = Domain::line(-1.0, 2.0, 7);
  GridFunction f(line, std::vector<double>(7, 0.0));
  CHECK(f.node(0) == doctest::Approx(-1.0));
  CHECK(f.node(6) == doctest::Approx(2.0));
  CHECK(f.spacing() == doctest::Approx(0.5));

  Domain torus = Domain::torus(8);
  GridFunction g(torus, std::vector<double>(8, 0.0));
  CHECK(g.node(3) == doctest::Approx(0.375));

  Domain sphere = Domain::zonal_sphere(16);
  GridFunction h(sphere, std::vector<double>(16, 0.0));
  for (int i = 0; i + 1 < 16; ++i) CHECK(h.node(i) < h.node(i + 1));
  CHECK(h.node(0) > 0.0);
  CHECK(h.node(15) < std::numbers::pi);
}

TEST_CASE("gauss-legendre rule integrates polynomials exactly") {
  const auto& rule = gauss_legendre(8);
  double s0 = 0.0, s2 = 0.0, s14 = 0.0;
  for (int i = 0; i < 8; ++i) {
    s0 += rule.weights[i];
    s2 += rule.weights[i] * rule.nodes[i] * rule.nodes[i];
    s14 += rule.weights[i] * std::pow(rule.nodes[i], 14);
  }
  CHECK(s0 == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(s2 == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(s14 == doctest::Approx(2.0 / 15.0).epsilon(1e-13));
}

TEST_CASE("time grids") {
  TimeGrid tg = TimeGrid::log_spaced(0.1, 10.0, 5);
  REQUIRE(tg.values.size() == 5);
  CHECK(tg.values.front() == doctest::Approx(0.1));
  CHECK(tg.values.back() == doctest::Approx(10.0));
  CHECK(tg.values[2] == doctest::Approx(1.0));
  CHECK(!tg.is_rho);

  TimeGrid rg = TimeGrid::rho_spaced(10, 0.999);
  REQUIRE(rg.values.size() == 10);
  CHECK(rg.is_rho);
  CHECK(rg.values.front() == doctest::Approx(0.0));
  CHECK(rg.values.back() == doctest::Approx(0.999));
  for (size_t i = 0; i + 1 < rg.values.size(); ++i)
    CHECK(rg.values[i] < rg.values[i + 1]);

  TimeGrid dg = TimeGrid::default_for(Domain::line(0.0, 2.0, 21), 50);
  CHECK(dg.values.front() == doctest::Approx(0.01));
  CHECK(dg.values.back() == doctest::Approx(20.0));
}
