#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "vdm/maximal.hpp"
#include "vdm/variation.hpp"

namespace vdm {

/// One named inequality check: passed iff lhs <= rhs * (1 + tol) + tol.
/// Checks encoding a negative result set expect_fail; such a check is in its
/// expected state when it fails.
struct CheckOutcome {
  std::string name;
  double measured_lhs = 0.0;
  double measured_rhs = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  bool expect_fail = false;
  std::map<std::string, std::string> metadata;

  bool in_expected_state() const { return passed != expect_fail; }

  static CheckOutcome make(std::string name, double lhs, double rhs, double tol,
                           bool expect_fail = false);
};

/// Seeded datum generators.
struct DatumSpec {
  enum class Kind { PiecewiseLinear, Step, GaussianBump, SingleMode, Csv };

  Kind kind = Kind::PiecewiseLinear;
  Domain domain;
  std::uint64_t seed = 1;
  int segments = 8;
  int jumps = 4;
  double center = 0.5;
  double width = 0.1;
  std::string csv_path;
};

GridFunction make_datum(const DatumSpec& spec);

/// V(u*) <= V(u0) (1 + tol).
CheckOutcome check_variation_diminishing(const DatumSpec& datum,
                                         const KernelSpec& spec,
                                         const TimeGrid& tg, double tol);

/// ||grad u*||_p <= ||grad u0||_p (1 + tol), p in {2, inf}.
CheckOutcome check_gradient_diminishing(const DatumSpec& datum,
                                        const KernelSpec& spec,
                                        const TimeGrid& tg, double p, double tol);

/// Raw second differences of u* on detachment components >= -tol * ||u*||_inf.
CheckOutcome check_convexity_on_detachment(const DatumSpec& datum,
                                           const KernelSpec& spec,
                                           const TimeGrid& tg, double tol);

/// Tangent-line envelope construction between f and a convex upper bound g
/// with matching endpoints: verifies that the iterate derivative norms are
/// non-increasing and that ||g'||_p <= ||f'||_p (1 + tol). f and g are taken
/// as exact piecewise-linear functions on their grid.
CheckOutcome tangent_envelope_check(const GridFunction& f, const GridFunction& g,
                                    double p, int iterations, std::uint64_t seed,
                                    double tol = 1e-6);

/// Radial counterexample for the non-tangential operator in dimension d >= 2:
/// closed-form and finite-difference -Laplacian of the maximal function agree
/// and are strictly positive on (1/alpha + delta, (d-1) alpha - delta); the
/// subharmonicity assertion is an expected failure.
std::vector<CheckOutcome> counterexample_scan(int d, double alpha,
                                              int radial_points = 201,
                                              double delta = 0.05);

/// Kernel invariant battery: closed-form golden values, normalization,
/// semigroup, monotonicity, parameter-continuity limits.
std::vector<CheckOutcome> check_kernel_identities();

/// Suite configuration shared by the CLI and the acceptance harness.
struct SuiteConfig {
  std::uint64_t seed = 42;
  int num_data = 100;     // data per family setting (half piecewise-linear, half step)
  int line_n = 121;       // line grid points
  int torus_n = 256;
  int sphere_n = 64;
  int n_t = 200;          // parameter grid nodes
  int y_res = 16;         // cone samples per side
  double tol = 1e-3;      // one-sided inequality tolerance
  double convexity_tol = 1e-6;
  int threads = 0;        // 0 = hardware concurrency
};

std::vector<CheckOutcome> suite_kernels(const SuiteConfig& cfg);
std::vector<CheckOutcome> suite_theorem1(const SuiteConfig& cfg);
std::vector<CheckOutcome> suite_theorem2(const SuiteConfig& cfg);
std::vector<CheckOutcome> suite_theorem3(const SuiteConfig& cfg);
std::vector<CheckOutcome> suite_theorem5(const SuiteConfig& cfg);
std::vector<CheckOutcome> suite_lemma7(const SuiteConfig& cfg);
std::vector<CheckOutcome> suite_counterexample(const SuiteConfig& cfg);
std::vector<CheckOutcome> run_suite(const std::string& name, const SuiteConfig& cfg);

}  // namespace vdm
