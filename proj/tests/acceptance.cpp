// Acceptance harness: one pass/fail line per criterion. The subharmonicity
// assertion inside the counterexample suite is an expected failure and counts
// as pass when it fails. Criterion 10 needs the CLI binary path as argv[1].

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "vdm/verify.hpp"

using namespace vdm;

namespace {

constexpr double kPi = std::numbers::pi;

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

int g_failures = 0;

void report(int id, const std::string& label, bool ok, double secs) {
  std::printf("criterion %2d  %-58s %s  (%.2f s)\n", id, label.c_str(),
              ok ? "PASS" : "FAIL", secs);
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

double rel_err(double got, double expect) {
  return std::abs(got - expect) / std::max(std::abs(expect), 1e-300);
}

bool all_with_suffix(const std::vector<CheckOutcome>& outs,
                     const std::string& suffix, int expected_count) {
  int count = 0;
  bool ok = true;
  for (const auto& c : outs)
    if (c.name.size() >= suffix.size() &&
        c.name.compare(c.name.size() - suffix.size(), suffix.size(), suffix) == 0) {
      ++count;
      ok = ok && c.in_expected_state();
    }
  return ok && count == expected_count;
}

std::string strip_timestamp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line))
    if (line.find("\"timestamp\"") == std::string::npos) out << line << "\n";
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli = argc > 1 ? argv[1] : "";

  // 1: closed-form kernels.
  {
    double t0 = now_seconds();
    double worst = 0.0;
    EllipticParams poisson(1.0, 0.0, 1), gauss(0.0, 1.0, 1);
    for (int i = 0; i < 20; ++i) {
      double x = -2.0 + 4.0 * i / 19.0;
      double t = 0.2 + 0.15 * i;
      worst = std::max(worst, rel_err(elliptic_kernel(poisson, t, x),
                                      t / (kPi * (t * t + x * x))));
      worst = std::max(worst,
                       rel_err(elliptic_kernel(gauss, t, x),
                               std::exp(-x * x / (4.0 * t)) /
                                   std::sqrt(4.0 * kPi * t)));
    }
    double dt = now_seconds() - t0;
    report(1, "elliptic kernel closed forms (poisson, gauss)",
           worst <= 1e-8 && dt < 1.0, dt);
  }

  // 2: kernel mass is one on the line/plane, torus and sphere.
  {
    double t0 = now_seconds();
    double worst = 0.0;
    for (auto [a, b] : {std::pair{1.0, 1.0}, {2.0, 0.5}, {1.0, 0.0}, {0.0, 1.0}})
      for (double t : {0.1, 1.0, 10.0})
        for (int d : {1, 2}) {
          EllipticParams p(a, b, d);
          double mass =
              d == 1 ? 2.0 * integrate_adaptive(
                                 [&](double x) { return elliptic_kernel(p, t, x); },
                                 0.0, kInfiniteUpperBound)
                     : 2.0 * kPi *
                           integrate_adaptive(
                               [&](double r) { return r * elliptic_kernel(p, t, r); },
                               0.0, kInfiniteUpperBound);
          worst = std::max(worst, std::abs(mass - 1.0));
        }
    for (double t : {0.1, 1.0}) {
      EllipticParams p(1.0, 1.0, 1);
      double mass = integrate_adaptive(
          [&](double x) { return periodic_kernel(p, t, x); }, 0.0, 1.0);
      worst = std::max(worst, std::abs(mass - 1.0));
    }
    for (double rho : {0.3, 0.9}) {
      double mass = 2.0 * kPi *
                    integrate_adaptive(
                        [&](double th) {
                          return spherical_poisson(std::cos(th), rho, 2) * std::sin(th);
                        },
                        0.0, kPi);
      worst = std::max(worst, std::abs(mass - 1.0));
    }
    for (double t : {0.1, 1.0, 10.0}) {
      int trunc = spherical_heat_truncation(t, 2);
      double mass = 2.0 * kPi *
                    integrate_adaptive(
                        [&](double th) {
                          return spherical_heat(std::cos(th), t, 2, trunc) * std::sin(th);
                        },
                        0.0, kPi);
      worst = std::max(worst, std::abs(mass - 1.0));
    }
    double dt = now_seconds() - t0;
    report(2, "kernel normalization across families and domains",
           worst <= 1e-6 && dt < 30.0, dt);
  }

  // 3: a -> 0 multiplier limit is the Gauss symbol.
  {
    double t0 = now_seconds();
    EllipticParams p(1e-6, 1.0, 1);
    double worst = 0.0;
    for (double xi : {0.5, 1.0, 2.0}) {
      double w = 2.0 * kPi * xi;
      worst = std::max(worst,
                       std::abs(elliptic_multiplier(p, 1.0, xi) - std::exp(-w * w)));
    }
    report(3, "gauss limit of the multiplier", worst <= 1e-4,
           now_seconds() - t0);
  }

  // 4-7: seeded families across all settings, shared suite runs.
  SuiteConfig cfg;
  std::vector<CheckOutcome> family;
  double family_secs = 0.0;
  {
    double t0 = now_seconds();
    for (const char* s : {"theorem1", "theorem2", "theorem3", "theorem5"}) {
      auto outs = run_suite(s, cfg);
      family.insert(family.end(), outs.begin(), outs.end());
    }
    family_secs = now_seconds() - t0;
  }
  report(4, "variation diminishing for 100 seeded data per setting",
         all_with_suffix(family, ".variation", 10) && family_secs < 120.0,
         family_secs);
  report(5, "gradient norms diminishing (p = 2 and p = inf)",
         all_with_suffix(family, ".grad_l2", 3) &&
             all_with_suffix(family, ".grad_linf", 8),
         0.0);
  {
    bool ok = true;
    int count = 0;
    for (const auto& c : family)
      if (c.name.rfind("theorem2.single_mode.", 0) == 0) {
        ++count;
        ok = ok && c.in_expected_state();
      }
    report(6, "single-mode torus datum matches the closed form",
           ok && count == 3, 0.0);
  }
  report(7, "discrete convexity on detachment components (1-D runs)",
         all_with_suffix(family, ".convexity", 8), 0.0);

  // 8: tangent-line envelope construction.
  {
    double t0 = now_seconds();
    auto outs = run_suite("lemma7", cfg);
    bool ok = !outs.empty();
    for (const auto& c : outs) ok = ok && c.in_expected_state();
    report(8, "tangent envelope: norms non-increasing, 50 seeded pairs", ok,
           now_seconds() - t0);
  }

  // 9: radial counterexample, with the subharmonicity expected failure.
  {
    double t0 = now_seconds();
    auto outs = run_suite("counterexample", cfg);
    bool ok = !outs.empty();
    int expected_failures = 0;
    for (const auto& c : outs) {
      ok = ok && c.in_expected_state();
      if (c.expect_fail && !c.passed) ++expected_failures;
    }
    report(9, "radial counterexample (subharmonicity is an expected failure)",
           ok && expected_failures == 3, now_seconds() - t0);
  }

  // 10: the CLI report is deterministic across runs.
  {
    double t0 = now_seconds();
    bool ok = false;
    if (cli.empty()) {
      std::printf("criterion 10: no CLI path given on the command line\n");
    } else {
      std::string r1 = "acceptance_report_1.json";
      std::string r2 = "acceptance_report_2.json";
      std::string base = "\"" + cli + "\" verify --suite all --seed 42 --output ";
      double ta = now_seconds();
      int s1 = std::system((base + r1).c_str());
      double tb = now_seconds();
      int s2 = std::system((base + r2).c_str());
      double tc = now_seconds();
      ok = s1 == 0 && s2 == 0 && (tb - ta) < 300.0 && (tc - tb) < 300.0;
      if (ok) {
        std::string a = strip_timestamp(r1);
        std::string b = strip_timestamp(r2);
        ok = !a.empty() && a == b;
      }
      std::remove(r1.c_str());
      std::remove(r2.c_str());
    }
    report(10, "full verify suite runs twice with identical reports", ok,
           now_seconds() - t0);
  }

  std::printf("acceptance: %d/10 criteria passed\n", 10 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
