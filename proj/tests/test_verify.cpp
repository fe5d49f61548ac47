#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "vdm/verify.hpp"

using namespace vdm;

TEST_CASE("check outcome convention") {
  CheckOutcome ok = CheckOutcome::make("x", 1.0, 1.0, 1e-3);
  CHECK(ok.passed);
  CHECK(ok.in_expected_state());
  CheckOutcome bad = CheckOutcome::make("x", 1.002, 1.0, 1e-3);
  CHECK(!bad.passed);
  CheckOutcome neg = CheckOutcome::make("x", -1e-9, 0.0, 0.0);
  CHECK(neg.passed);
  CheckOutcome xf = CheckOutcome::make("x", 2.0, 1.0, 0.0, true);
  CHECK(!xf.passed);
  CHECK(xf.in_expected_state());
}

TEST_CASE("datum generators are deterministic in the seed") {
  DatumSpec ds;
  ds.kind = DatumSpec::Kind::PiecewiseLinear;
  ds.domain = Domain::line(-1.0, 2.0, 61);
  ds.seed = 123;
  GridFunction a = make_datum(ds);
  GridFunction b = make_datum(ds);
  for (int i = 0; i < a.size(); ++i) CHECK(a.values[i] == b.values[i]);
  ds.seed = 124;
  GridFunction c = make_datum(ds);
  bool differs = false;
  for (int i = 0; i < a.size(); ++i) differs = differs || a.values[i] != c.values[i];
  CHECK(differs);
}

TEST_CASE("datum generators cover every domain") {
  for (Domain dom : {Domain::line(0.0, 1.0, 41), Domain::torus(32),
                     Domain::zonal_sphere(24)}) {
    for (auto kind : {DatumSpec::Kind::PiecewiseLinear, DatumSpec::Kind::Step,
                      DatumSpec::Kind::GaussianBump}) {
      DatumSpec ds;
      ds.kind = kind;
      ds.domain = dom;
      ds.seed = 5;
      GridFunction f = make_datum(ds);
      CHECK(f.size() == dom.n);
      CHECK(f.max_abs() > 0.0);
    }
  }
  DatumSpec sm;
  sm.kind = DatumSpec::Kind::SingleMode;
  sm.domain = Domain::torus(64);
  GridFunction f = make_datum(sm);
  CHECK(f.values[0] == doctest::Approx(2.0));
  sm.domain = Domain::line(0.0, 1.0, 11);
  CHECK_THROWS_AS(make_datum(sm), std::invalid_argument);
}

TEST_CASE("csv datum round trip and validation") {
  const char* path = "vdm_test_datum.csv";
  {
    std::ofstream out(path);
    out << "x,value\n";
    for (int i = 0; i < 5; ++i) out << 0.5 * i << "," << i * i << "\n";
  }
  DatumSpec ds;
  ds.kind = DatumSpec::Kind::Csv;
  ds.csv_path = path;
  GridFunction f = make_datum(ds);
  CHECK(f.size() == 5);
  CHECK(f.domain.kind == DomainKind::Line);
  CHECK(f.node(0) == doctest::Approx(0.0));
  CHECK(f.node(4) == doctest::Approx(2.0));
  CHECK(f.values[3] == doctest::Approx(9.0));

  {
    std::ofstream out(path);
    out << "x,value\n0,1\n1,2\n1.7,3\n";  // non-uniform spacing
  }
  CHECK_THROWS_AS(make_datum(ds), std::invalid_argument);
  {
    std::ofstream out(path);
    out << "a,b\n0,1\n1,2\n";  // wrong header
  }
  CHECK_THROWS_AS(make_datum(ds), std::invalid_argument);
  std::remove(path);
  ds.csv_path = "no_such_file_hopefully.csv";
  CHECK_THROWS(make_datum(ds));
}

TEST_CASE("tangent envelope: analytic pair behaves") {
  Domain dom = Domain::line(0.0, 1.0, 401);
  std::vector<double> fv(dom.n), gv(dom.n);
  GridFunction probe(dom, std::vector<double>(dom.n, 0.0));
  for (int i = 0; i < dom.n; ++i) {
    double x = probe.node(i);
    fv[i] = x * x;
    gv[i] = x;
  }
  GridFunction f(dom, fv), g(dom, gv);
  for (double p : {1.0, 2.0, std::numeric_limits<double>::infinity()}) {
    CheckOutcome c = tangent_envelope_check(f, g, p, 40, 7);
    CHECK(c.passed);
    CHECK(c.metadata.count("f_grad_norm") == 1);
  }
}

TEST_CASE("tangent envelope: hypothesis violations throw") {
  Domain dom = Domain::line(0.0, 1.0, 101);
  std::vector<double> fv(dom.n), gv(dom.n), hv(dom.n);
  GridFunction probe(dom, std::vector<double>(dom.n, 0.0));
  for (int i = 0; i < dom.n; ++i) {
    double x = probe.node(i);
    fv[i] = x * x;
    gv[i] = x + 0.1;             // endpoint mismatch
    hv[i] = std::sin(3.0 * x);   // not convex
  }
  GridFunction f(dom, fv), g(dom, gv), h(dom, hv);
  CHECK_THROWS_AS(tangent_envelope_check(f, g, 2.0, 10, 1), std::invalid_argument);
  GridFunction hfix = h;
  hfix.values.front() = f.values.front();
  hfix.values.back() = f.values.back();
  CHECK_THROWS_AS(tangent_envelope_check(f, hfix, 2.0, 10, 1), std::invalid_argument);
  // f above g in the interior
  std::vector<double> above(fv);
  for (int i = 1; i + 1 < dom.n; ++i) above[i] = gv[i] - 0.1 + 0.2;
  CHECK_THROWS_AS(
      tangent_envelope_check(GridFunction(dom, above), GridFunction(dom, fv), 2.0, 10, 1),
      std::invalid_argument);
  CHECK_THROWS_AS(tangent_envelope_check(f, g, 3.0, 10, 1), std::invalid_argument);
}

TEST_CASE("counterexample scan validates parameters") {
  CHECK_THROWS_AS(counterexample_scan(1, 3.0), std::invalid_argument);
  CHECK_THROWS_AS(counterexample_scan(2, 0.5), std::invalid_argument);
}

TEST_CASE("counterexample scan: golden values and the expected failure") {
  auto outcomes = counterexample_scan(2, 2.0, 101);
  bool saw_expected_failure = false;
  for (const auto& c : outcomes) {
    CHECK(c.in_expected_state());
    if (c.expect_fail) {
      saw_expected_failure = true;
      CHECK(!c.passed);
    }
    if (c.name.find("golden_neg_laplacian") != std::string::npos)
      CHECK(c.measured_lhs <= c.tolerance);
  }
  CHECK(saw_expected_failure);
}

TEST_CASE("run_suite rejects unknown suite names") {
  SuiteConfig cfg;
  CHECK_THROWS_AS(run_suite("theorem4", cfg), std::invalid_argument);
}

TEST_CASE("small seeded variation check passes end to end") {
  SuiteConfig cfg;
  DatumSpec ds;
  ds.kind = DatumSpec::Kind::Step;
  ds.domain = Domain::line(-1.0, 2.0, 61);
  ds.seed = 99;
  TimeGrid tg = TimeGrid::default_for(ds.domain, 40);
  CheckOutcome c = check_variation_diminishing(
      ds, KernelSpec::make_elliptic(1.0, 0.0), tg, 1e-3);
  CHECK(c.passed);
  CheckOutcome g = check_gradient_diminishing(
      ds, KernelSpec::make_elliptic(1.0, 0.0), tg,
      std::numeric_limits<double>::infinity(), 1e-3);
  CHECK(g.passed);
  CheckOutcome v = check_convexity_on_detachment(
      ds, KernelSpec::make_elliptic(1.0, 0.0), tg, 1e-6);
  CHECK(v.passed);
  CHECK_THROWS_AS(check_gradient_diminishing(
                      ds, KernelSpec::make_elliptic(1.0, 0.0), tg, 3.0, 1e-3),
                  std::invalid_argument);
}
