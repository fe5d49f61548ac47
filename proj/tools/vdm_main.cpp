#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>

#include "vdm/verify.hpp"

namespace {

using vdm::CheckOutcome;
using vdm::DatumSpec;
using vdm::Domain;
using vdm::GridFunction;
using vdm::KernelSpec;
using vdm::TimeGrid;

struct DatumOptions {
  std::string kind = "pl";
  std::uint64_t seed = 1;
  int segments = 8;
  int jumps = 4;
  double center = 0.5;
  double width = 0.1;
  std::string csv_path;
};

struct DomainOptions {
  std::string kind = "line";
  double x_min = -1.0;
  double x_max = 2.0;
  int n = 121;
};

void add_datum_options(CLI::App* cmd, DatumOptions& opt) {
  cmd->add_option("--datum", opt.kind, "datum generator: pl, step, bump, single-mode, csv");
  cmd->add_option("--datum-seed", opt.seed, "generator seed");
  cmd->add_option("--segments", opt.segments, "piecewise-linear segment count");
  cmd->add_option("--jumps", opt.jumps, "step jump count");
  cmd->add_option("--center", opt.center, "bump center");
  cmd->add_option("--width", opt.width, "bump width");
  cmd->add_option("--datum-csv", opt.csv_path, "CSV datum path (header x,value)");
}

void add_domain_options(CLI::App* cmd, DomainOptions& opt) {
  cmd->add_option("--domain", opt.kind, "domain: line, torus, sphere");
  cmd->add_option("--x-min", opt.x_min, "line window left end");
  cmd->add_option("--x-max", opt.x_max, "line window right end");
  cmd->add_option("--n", opt.n, "grid points");
}

Domain resolve_domain(const DomainOptions& opt) {
  if (opt.kind == "line") return Domain::line(opt.x_min, opt.x_max, opt.n);
  if (opt.kind == "torus") return Domain::torus(opt.n);
  if (opt.kind == "sphere") return Domain::zonal_sphere(opt.n);
  throw CLI::ValidationError("--domain", "unknown domain: " + opt.kind);
}

GridFunction resolve_datum(const DatumOptions& opt, const Domain& dom) {
  DatumSpec ds;
  ds.domain = dom;
  ds.seed = opt.seed;
  ds.segments = opt.segments;
  ds.jumps = opt.jumps;
  ds.center = opt.center;
  ds.width = opt.width;
  ds.csv_path = opt.csv_path;
  if (opt.kind == "pl") ds.kind = DatumSpec::Kind::PiecewiseLinear;
  else if (opt.kind == "step") ds.kind = DatumSpec::Kind::Step;
  else if (opt.kind == "bump") ds.kind = DatumSpec::Kind::GaussianBump;
  else if (opt.kind == "single-mode") ds.kind = DatumSpec::Kind::SingleMode;
  else if (opt.kind == "csv") ds.kind = DatumSpec::Kind::Csv;
  else throw CLI::ValidationError("--datum", "unknown datum kind: " + opt.kind);
  return vdm::make_datum(ds);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

void write_table(std::ostream& os, const std::string& header,
                 const std::vector<std::array<double, 2>>& rows) {
  os << header << "\n";
  char buf[80];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g", r[0], r[1]);
    os << buf << "\n";
  }
}

nlohmann::ordered_json outcome_json(const CheckOutcome& c) {
  nlohmann::ordered_json j;
  j["name"] = c.name;
  j["lhs"] = c.measured_lhs;
  j["rhs"] = c.measured_rhs;
  j["tol"] = c.tolerance;
  j["passed"] = c.passed;
  if (c.expect_fail) j["expect_fail"] = true;
  j["in_expected_state"] = c.in_expected_state();
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [k, v] : c.metadata) meta[k] = v;
  j["metadata"] = std::move(meta);
  return j;
}

int run_kernel(const std::string& family, double a, double b, int d, double t,
               double rho, int truncation, const std::string& table,
               double x_min, double x_max, int points, const std::string& output) {
  std::vector<std::array<double, 2>> rows;
  std::string header;
  if (family == "elliptic") {
    vdm::EllipticParams params(a, b, d);
    if (table == "multiplier") {
      header = "n,multiplier";
      for (int k = 0; k <= points; ++k)
        rows.push_back({static_cast<double>(k),
                        vdm::elliptic_multiplier(params, t, k)});
    } else {
      header = "x,phi";
      for (int i = 0; i < points; ++i) {
        double x = x_min + (x_max - x_min) * i / (points - 1);
        rows.push_back({x, vdm::elliptic_kernel(params, t, x)});
      }
    }
  } else if (family == "periodic") {
    vdm::EllipticParams params(a, b, 1);
    header = "x,psi";
    for (int i = 0; i < points; ++i) {
      double x = static_cast<double>(i) / points;
      rows.push_back({x, vdm::periodic_kernel(params, t, x)});
    }
  } else if (family == "spherical-poisson" || family == "spherical-heat") {
    header = "theta,value";
    int trunc = truncation > 0 ? truncation : vdm::spherical_heat_truncation(t, d);
    for (int i = 0; i < points; ++i) {
      double theta = std::numbers::pi * i / (points - 1);
      double v = family == "spherical-poisson"
                     ? vdm::spherical_poisson(std::cos(theta), rho, d)
                     : vdm::spherical_heat(std::cos(theta), t, d, trunc);
      rows.push_back({theta, v});
    }
  } else {
    throw CLI::ValidationError("--family", "unknown kernel family: " + family);
  }
  if (output.empty()) {
    write_table(std::cout, header, rows);
  } else {
    auto os = open_output(output);
    write_table(os, header, rows);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maximal operators of convolution type: kernels, evolutions, "
               "maximal functions and inequality suites"};
  app.require_subcommand(1);

  // kernel
  auto* kernel = app.add_subcommand("kernel", "tabulate a kernel profile");
  std::string k_family = "elliptic", k_table = "space", k_output;
  double k_a = 1.0, k_b = 0.0, k_t = 1.0, k_rho = 0.5;
  double k_xmin = -3.0, k_xmax = 3.0;
  int k_d = 1, k_points = 201, k_trunc = 0;
  kernel->add_option("--family", k_family,
                     "elliptic, periodic, spherical-poisson, spherical-heat");
  kernel->add_option("--a", k_a, "elliptic parameter a");
  kernel->add_option("--b", k_b, "elliptic parameter b");
  kernel->add_option("--d", k_d, "dimension");
  kernel->add_option("--t", k_t, "time");
  kernel->add_option("--rho", k_rho, "Poisson radius");
  kernel->add_option("--N", k_trunc, "heat series truncation (0 = automatic)");
  kernel->add_option("--table", k_table, "space or multiplier");
  kernel->add_option("--x-min", k_xmin, "profile left end");
  kernel->add_option("--x-max", k_xmax, "profile right end");
  kernel->add_option("--points", k_points, "rows in the table");
  kernel->add_option("--output,-o", k_output, "output CSV (default stdout)");

  // evolve
  auto* evolve = app.add_subcommand("evolve", "evolve a datum to a fixed time");
  DomainOptions e_dom;
  DatumOptions e_datum;
  std::string e_output;
  double e_a = 1.0, e_b = 0.0, e_t = 1.0, e_rho = -1.0;
  std::string e_family = "elliptic";
  add_domain_options(evolve, e_dom);
  add_datum_options(evolve, e_datum);
  evolve->add_option("--family", e_family,
                     "elliptic, spherical-poisson, spherical-heat");
  evolve->add_option("--a", e_a, "elliptic parameter a");
  evolve->add_option("--b", e_b, "elliptic parameter b");
  evolve->add_option("--t", e_t, "time");
  evolve->add_option("--rho", e_rho, "Poisson radius (sphere)");
  evolve->add_option("--output,-o", e_output, "output CSV (default stdout)");

  // maximal
  auto* maximal = app.add_subcommand("maximal", "compute a maximal function");
  DomainOptions m_dom;
  DatumOptions m_datum;
  std::string m_output, m_family = "elliptic";
  double m_a = 1.0, m_b = 0.0, m_alpha = 0.0, m_rho_max = 0.999;
  int m_nt = 200, m_yres = 16;
  add_domain_options(maximal, m_dom);
  add_datum_options(maximal, m_datum);
  maximal->add_option("--family", m_family,
                      "elliptic, non-tangential, spherical-poisson, spherical-heat");
  maximal->add_option("--a", m_a, "elliptic parameter a");
  maximal->add_option("--b", m_b, "elliptic parameter b");
  maximal->add_option("--alpha", m_alpha, "cone aperture");
  maximal->add_option("--n-t", m_nt, "parameter grid nodes");
  maximal->add_option("--rho-max", m_rho_max, "largest Poisson radius");
  maximal->add_option("--y-res", m_yres, "cone samples per side");
  maximal->add_option("--output,-o", m_output, "output CSV (default stdout)");

  // verify (+ counterexample alias)
  auto* verify = app.add_subcommand("verify", "run an inequality suite");
  vdm::SuiteConfig cfg;
  std::string v_suite = "all", v_output;
  auto add_verify_options = [&](CLI::App* cmd) {
    cmd->add_option("--seed", cfg.seed, "suite seed");
    cmd->add_option("--num-data", cfg.num_data, "data per family setting");
    cmd->add_option("--line-n", cfg.line_n, "line grid points");
    cmd->add_option("--torus-n", cfg.torus_n, "torus grid points");
    cmd->add_option("--sphere-n", cfg.sphere_n, "sphere grid points");
    cmd->add_option("--n-t", cfg.n_t, "parameter grid nodes");
    cmd->add_option("--y-res", cfg.y_res, "cone samples per side");
    cmd->add_option("--tol", cfg.tol, "inequality tolerance");
    cmd->add_option("--convexity-tol", cfg.convexity_tol, "convexity tolerance");
    cmd->add_option("--threads", cfg.threads, "worker threads (0 = hardware)");
    cmd->add_option("--output,-o", v_output, "report JSON (default stdout)");
  };
  verify->add_option("--suite", v_suite,
                     "kernels, theorem1, theorem2, theorem3, theorem5, lemma7, "
                     "counterexample, all");
  add_verify_options(verify);

  auto* counter = app.add_subcommand(
      "counterexample", "alias for verify --suite counterexample");
  int c_d = 0;
  double c_alpha = 0.0;
  counter->add_option("--d", c_d, "dimension (0 = the standard trio)");
  counter->add_option("--alpha", c_alpha, "aperture (with --d)");
  add_verify_options(counter);

  CLI11_PARSE(app, argc, argv);

  try {
    if (kernel->parsed())
      return run_kernel(k_family, k_a, k_b, k_d, k_t, k_rho, k_trunc, k_table,
                        k_xmin, k_xmax, k_points, k_output);

    if (evolve->parsed()) {
      Domain dom = resolve_domain(e_dom);
      GridFunction u0 = resolve_datum(e_datum, dom);
      if (e_datum.kind == "csv") dom = u0.domain;
      GridFunction ut = [&] {
        switch (dom.kind) {
          case vdm::DomainKind::Line:
            return vdm::evolve_line(u0, KernelSpec::make_elliptic(e_a, e_b), e_t);
          case vdm::DomainKind::Torus:
            return vdm::evolve_torus(u0, vdm::EllipticParams(e_a, e_b, 1), e_t);
          case vdm::DomainKind::ZonalSphere: {
            if (e_family == "spherical-poisson") {
              if (e_rho < 0.0)
                throw CLI::ValidationError("--rho", "sphere Poisson evolution needs --rho");
              return vdm::evolve_zonal_sphere(u0, KernelSpec::spherical_poisson(2), e_rho);
            }
            return vdm::evolve_zonal_sphere(u0, KernelSpec::spherical_heat(2), e_t);
          }
        }
        throw std::logic_error("bad domain kind");
      }();
      std::ofstream file;
      std::ostream* os = &std::cout;
      if (!e_output.empty()) {
        file = open_output(e_output);
        os = &file;
      }
      *os << "x,u0,u_t\n";
      char buf[120];
      for (int i = 0; i < ut.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g", ut.node(i),
                      u0.values[i], ut.values[i]);
        *os << buf << "\n";
      }
      return 0;
    }

    if (maximal->parsed()) {
      Domain dom = resolve_domain(m_dom);
      GridFunction u0 = resolve_datum(m_datum, dom);
      if (m_datum.kind == "csv") dom = u0.domain;
      KernelSpec ks = [&] {
        if (m_family == "elliptic") return KernelSpec::make_elliptic(m_a, m_b);
        if (m_family == "non-tangential") return KernelSpec::non_tangential(m_alpha);
        if (m_family == "spherical-poisson") return KernelSpec::spherical_poisson(2);
        if (m_family == "spherical-heat") return KernelSpec::spherical_heat(2);
        throw CLI::ValidationError("--family", "unknown family: " + m_family);
      }();
      TimeGrid tg = ks.family == KernelSpec::Family::SphericalPoisson
                        ? TimeGrid::rho_spaced(m_nt, m_rho_max)
                        : TimeGrid::default_for(dom, m_nt);
      vdm::MaximalResult res =
          ks.family == KernelSpec::Family::NonTangentialPoisson
              ? vdm::maximal_nontangential(u0, m_alpha, tg, m_yres)
              : vdm::maximal_centered(u0, ks, tg);
      std::ofstream file;
      std::ostream* os = &std::cout;
      if (!m_output.empty()) {
        file = open_output(m_output);
        os = &file;
      }
      *os << "x,u0,u_star,arg_sup,detached\n";
      char buf[160];
      for (int i = 0; i < u0.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g,%d", u0.node(i),
                      u0.values[i], res.u_star.values[i], res.arg_sup[i],
                      res.detachment_mask[i] ? 1 : 0);
        *os << buf << "\n";
      }
      return 0;
    }

    // verify / counterexample
    std::vector<CheckOutcome> outcomes;
    std::string suite_name = v_suite;
    if (counter->parsed()) {
      suite_name = "counterexample";
      if (c_d != 0)
        outcomes = vdm::counterexample_scan(c_d, c_alpha);
      else
        outcomes = vdm::suite_counterexample(cfg);
    } else {
      outcomes = vdm::run_suite(v_suite, cfg);
    }

    nlohmann::ordered_json report;
    nlohmann::ordered_json config;
    config["suite"] = suite_name;
    config["seed"] = cfg.seed;
    config["num_data"] = cfg.num_data;
    config["line_n"] = cfg.line_n;
    config["torus_n"] = cfg.torus_n;
    config["sphere_n"] = cfg.sphere_n;
    config["n_t"] = cfg.n_t;
    config["y_res"] = cfg.y_res;
    config["tol"] = cfg.tol;
    config["convexity_tol"] = cfg.convexity_tol;
    report["config"] = std::move(config);
    report["timestamp"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::system_clock::now().time_since_epoch())
                              .count();
    report["outcomes"] = nlohmann::ordered_json::array();
    bool all_ok = true;
    for (const auto& c : outcomes) {
      report["outcomes"].push_back(outcome_json(c));
      all_ok = all_ok && c.in_expected_state();
    }
    report["all_in_expected_state"] = all_ok;
    if (v_output.empty()) {
      std::cout << report.dump(2) << "\n";
    } else {
      auto os = open_output(v_output);
      os << report.dump(2) << "\n";
    }
    return all_ok ? 0 : 1;
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
