// Command-line front end: derived quantities, probe and cooperativity sweeps,
// pole trajectories, time-domain integration and power inversion.
//
// Exit codes: 0 ok, 2 bad configuration or arguments, 3 solver failure,
// 4 I/O failure.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "oems/errors.hpp"
#include "oems/scenario.hpp"

namespace {

struct CommonOptions {
  std::string scenario = "fig2";
  std::string out;
  std::string format;
  std::string model;
  int points = 0;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--scenario", o.scenario,
                  "Scenario JSON file or preset name (fig2, fig2_inset, fig3, fig4, fig5, "
                  "integrate)")
      ->capture_default_str();
  cmd->add_option("--out", o.out, "Output path (overrides the scenario)");
  cmd->add_option("--format", o.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--model", o.model, "full, rwa, analytic or oscillator")
      ->check(CLI::IsMember({"full", "rwa", "analytic", "oscillator"}));
  cmd->add_option("--points", o.points, "Number of grid points (>= 2)");
}

oems::Scenario build(const CommonOptions& o) {
  oems::Scenario s = oems::load_scenario(o.scenario);
  if (!o.out.empty()) s.out_path = o.out;
  if (!o.format.empty()) s.format = oems::parse_format(o.format);
  if (!o.model.empty()) s.models = {oems::parse_model(o.model)};
  if (o.points != 0) {
    if (o.points < 2) throw oems::ConfigError("--points must be >= 2");
    s.sweep.n_points = o.points;
  }
  return s;
}

void require_kind(const oems::Scenario& s,
                  std::initializer_list<oems::SweepKind> kinds,
                  const std::string& command) {
  for (auto k : kinds)
    if (s.sweep.kind == k) return;
  throw oems::ConfigError("scenario sweep kind '" + oems::to_string(s.sweep.kind) +
                          "' cannot be run by '" + command + "'");
}

void report(const oems::RunResult& r) {
  for (const auto& p : r.written) std::cout << "wrote " << p.string() << '\n';
  std::cout << r.summary.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Double-cavity opto-electro-mechanical response simulator"};
  app.require_subcommand(1);

  CommonOptions derive_opts, sweep_opts, roots_opts, integrate_opts, invert_opts;
  roots_opts.scenario = "fig3";
  integrate_opts.scenario = "integrate";
  auto* derive = app.add_subcommand("derive", "Print the derived-quantity summary");
  add_common(derive, derive_opts);
  auto* sweep = app.add_subcommand("sweep", "Probe-detuning or cooperativity-ratio sweep");
  add_common(sweep, sweep_opts);
  auto* roots = app.add_subcommand("roots", "Pole trajectories versus C2/C1");
  add_common(roots, roots_opts);
  auto* integrate = app.add_subcommand("integrate", "Time-domain oscillator integration");
  add_common(integrate, integrate_opts);
  std::string method;
  double dt = 0.0;
  integrate->add_option("--method", method, "exact or rk4")
      ->check(CLI::IsMember({"exact", "rk4"}));
  integrate->add_option("--dt", dt, "RK4 step in the scenario's time unit");
  auto* invert = app.add_subcommand("invert", "Coupling power for a target cooperativity");
  add_common(invert, invert_opts);
  int cavity = 1;
  double target = 0.0;
  invert->add_option("--cavity", cavity, "1 (optical) or 2 (microwave)")
      ->check(CLI::IsMember({1, 2}));
  invert->add_option("--target", target, "Target cooperativity")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*derive) {
      const oems::Scenario s = build(derive_opts);
      const auto text = oems::summary(s).dump(2) + "\n";
      std::cout << text;
      if (!derive_opts.out.empty()) {
        std::FILE* f = std::fopen(derive_opts.out.c_str(), "wb");
        if (!f) throw oems::IoError("cannot open " + derive_opts.out);
        const bool ok = std::fwrite(text.data(), 1, text.size(), f) == text.size();
        if (std::fclose(f) != 0 || !ok) throw oems::IoError("write failed for " + derive_opts.out);
      }
    } else if (*sweep) {
      const oems::Scenario s = build(sweep_opts);
      require_kind(s, {oems::SweepKind::probe_x, oems::SweepKind::cooperativity_ratio},
                   "sweep");
      report(oems::run_scenario(s));
    } else if (*roots) {
      const oems::Scenario s = build(roots_opts);
      require_kind(s, {oems::SweepKind::roots_vs_ratio}, "roots");
      report(oems::run_scenario(s));
    } else if (*integrate) {
      oems::Scenario s = build(integrate_opts);
      require_kind(s, {oems::SweepKind::time_domain}, "integrate");
      if (method == "rk4") s.sweep.method = oems::Integrator::rk4;
      if (method == "exact") s.sweep.method = oems::Integrator::exact_propagator;
      if (dt > 0.0) s.sweep.dt = dt;
      report(oems::run_scenario(s));
    } else if (*invert) {
      const oems::Scenario s = build(invert_opts);
      const double p = oems::invert_cooperativity(target, cavity, s.params, s.drives,
                                                  s.wp_options);
      std::cout << "cavity " << cavity << " target C=" << oems::format_number(target)
                << " power_W=" << oems::format_number(p) << '\n';
    }
  } catch (const oems::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const oems::InvalidParameter& e) {
    std::cerr << "invalid parameter: " << e.what() << '\n';
    return 2;
  } catch (const oems::ConvergenceError& e) {
    std::cerr << "solver did not converge: " << e.what() << " (residual "
              << e.residual() << ")\n";
    return 3;
  } catch (const oems::SingularSystem& e) {
    std::cerr << "singular system: " << e.what() << '\n';
    return 3;
  } catch (const oems::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
