#include "oems/scenario.hpp"

#include <boost/math/tools/roots.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>

#include "oems/analytic.hpp"
#include "oems/errors.hpp"

namespace oems {

using nlohmann::json;

namespace {

template <typename E>
E lookup(const std::string& name,
         std::initializer_list<std::pair<const char*, E>> table,
         const char* what) {
  for (const auto& [key, value] : table)
    if (name == key) return value;
  throw ConfigError(std::string("unknown ") + what + " '" + name + "'");
}

double get_number(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(std::string(key) + " must be a number");
  return v.get<double>();
}

cdouble unit_phase(cdouble z) {
  return std::abs(z) == 0.0 ? cdouble(1.0) : z / std::abs(z);
}

}  // namespace

Model parse_model(const std::string& name) {
  return lookup<Model>(name,
                       {{"full", Model::full},
                        {"rwa", Model::rwa},
                        {"analytic", Model::analytic},
                        {"oscillator", Model::oscillator}},
                       "model");
}

std::string to_string(Model m) {
  switch (m) {
    case Model::full: return "full";
    case Model::rwa: return "rwa";
    case Model::analytic: return "analytic";
    case Model::oscillator: return "oscillator";
  }
  return "?";
}

SweepKind parse_sweep_kind(const std::string& name) {
  return lookup<SweepKind>(name,
                           {{"probe_x", SweepKind::probe_x},
                            {"cooperativity_ratio", SweepKind::cooperativity_ratio},
                            {"roots_vs_ratio", SweepKind::roots_vs_ratio},
                            {"time_domain", SweepKind::time_domain}},
                           "sweep kind");
}

std::string to_string(SweepKind k) {
  switch (k) {
    case SweepKind::probe_x: return "probe_x";
    case SweepKind::cooperativity_ratio: return "cooperativity_ratio";
    case SweepKind::roots_vs_ratio: return "roots_vs_ratio";
    case SweepKind::time_domain: return "time_domain";
  }
  return "?";
}

OutputFormat parse_format(const std::string& name) {
  return lookup<OutputFormat>(
      name, {{"csv", OutputFormat::csv}, {"json", OutputFormat::json}}, "format");
}

double parse_power(const json& value) {
  if (value.is_number()) {
    const double p = value.get<double>();
    if (!(p >= 0.0)) throw ConfigError("power must be >= 0");
    return p;
  }
  if (!value.is_string()) throw ConfigError("power must be a number or string");
  std::string text = value.get<std::string>();
  const std::string micro = "\xC2\xB5";
  for (auto pos = text.find(micro); pos != std::string::npos;
       pos = text.find(micro)) {
    text.replace(pos, micro.size(), "u");
  }
  static const std::regex pattern(
      R"(^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([pnumk]?)\s*W?\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, pattern)) {
    throw ConfigError("cannot parse power '" + text + "'");
  }
  double scale = 1.0;
  if (m[2] == "p") scale = 1e-12;
  else if (m[2] == "n") scale = 1e-9;
  else if (m[2] == "u") scale = 1e-6;
  else if (m[2] == "m") scale = 1e-3;
  else if (m[2] == "k") scale = 1e3;
  const double p = std::stod(m[1].str()) * scale;
  if (!(p >= 0.0)) throw ConfigError("power must be >= 0");
  return p;
}

Scenario scenario_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("scenario must be a JSON object");
  Scenario s;
  try {
    s.name = doc.value("name", s.name);

    const json params = doc.value("params", json::object());
    const std::string unit = params.value("unit", "hz");
    double factor = 0.0;
    if (unit == "hz") factor = kTwoPi;
    else if (unit == "rad_s") factor = 1.0;
    else throw ConfigError("params.unit must be 'hz' or 'rad_s'");
    auto freq = [&](const char* key, double default_rad) {
      return params.contains(key) ? get_number(params, key, 0.0) * factor
                                  : default_rad;
    };
    SystemParams& p = s.params;
    p.omega_c1 = freq("omega_c1", p.omega_c1);
    p.omega_c2 = freq("omega_c2", p.omega_c2);
    p.omega_m = freq("omega_m", p.omega_m);
    p.gamma_m = freq("gamma_m", p.gamma_m);
    p.kappa1 = freq("kappa1", p.kappa1);
    p.kappa2 = freq("kappa2", p.kappa2);
    p.g1 = freq("g1", p.g1);
    p.g2 = freq("g2", p.g2);
    p.delta_bare1 = freq("delta_bare1", p.omega_m);
    p.delta_bare2 = freq("delta_bare2", p.omega_m);

    const json detuning = doc.value("detuning", json::object());
    const std::string mode = detuning.value("mode", "effective");
    if (mode == "effective") s.wp_options.mode = DetuningMode::effective;
    else if (mode == "bare") s.wp_options.mode = DetuningMode::bare;
    else throw ConfigError("detuning.mode must be 'effective' or 'bare'");
    if (detuning.contains("delta1"))
      s.wp_options.target_delta1 = get_number(detuning, "delta1", 0.0) * factor;
    if (detuning.contains("delta2"))
      s.wp_options.target_delta2 = get_number(detuning, "delta2", 0.0) * factor;

    const json solver = doc.value("solver", json::object());
    s.wp_options.tolerance = get_number(solver, "tolerance", s.wp_options.tolerance);
    if (solver.contains("max_iterations"))
      s.wp_options.max_iterations = solver.at("max_iterations").get<int>();
    if (!(s.wp_options.tolerance > 0.0) || s.wp_options.max_iterations < 1)
      throw ConfigError("solver.tolerance must be > 0 and max_iterations >= 1");

    const json drives = doc.value("drives", json::object());
    if (drives.contains("p_c1")) s.drives.p_c1 = parse_power(drives.at("p_c1"));
    if (drives.contains("p_c2")) s.drives.p_c2 = parse_power(drives.at("p_c2"));
    if (drives.contains("p_p")) s.drives.p_p = parse_power(drives.at("p_p"));
    if (drives.contains("c1")) s.target_c1 = get_number(drives, "c1", 0.0);
    if (drives.contains("c2")) s.target_c2 = get_number(drives, "c2", 0.0);
    for (auto c : {s.target_c1, s.target_c2}) {
      if (c && !(*c >= 0.0)) throw ConfigError("cooperativity targets must be >= 0");
    }

    const json sweep = doc.value("sweep", json::object());
    SweepSpec& sw = s.sweep;
    sw.kind = parse_sweep_kind(sweep.value("kind", "probe_x"));
    sw.x_min = get_number(sweep, "x_min", sw.x_min);
    sw.x_max = get_number(sweep, "x_max", sw.x_max);
    sw.x_unit = sweep.value("x_unit", sw.x_unit);
    if (sw.x_unit != "gamma_m" && sw.x_unit != "kappa1" && sw.x_unit != "rad_s")
      throw ConfigError("sweep.x_unit must be gamma_m, kappa1 or rad_s");
    sw.x = get_number(sweep, "x", sw.x);
    if (sweep.contains("n_points")) {
      if (!sweep.at("n_points").is_number_integer())
        throw ConfigError("sweep.n_points must be an integer");
      sw.n_points = sweep.at("n_points").get<int>();
    }
    if (sweep.contains("c2_over_c1")) {
      sw.c2_over_c1 = sweep.at("c2_over_c1").get<std::vector<double>>();
    }
    sw.ratio_min = get_number(sweep, "ratio_min", sw.ratio_min);
    sw.ratio_max = get_number(sweep, "ratio_max", sw.ratio_max);
    sw.t_final = get_number(sweep, "t_final", sw.t_final);
    sw.t_unit = sweep.value("t_unit", sw.t_unit);
    if (sw.t_unit != "1/kappa2" && sw.t_unit != "s")
      throw ConfigError("sweep.t_unit must be '1/kappa2' or 's'");
    if (sweep.contains("method")) {
      const std::string m = sweep.at("method").get<std::string>();
      if (m == "exact" || m == "exact_propagator") sw.method = Integrator::exact_propagator;
      else if (m == "rk4") sw.method = Integrator::rk4;
      else throw ConfigError("sweep.method must be 'exact' or 'rk4'");
    }
    if (sweep.contains("dt")) sw.dt = get_number(sweep, "dt", 0.0);

    if (doc.contains("models")) {
      s.models.clear();
      for (const auto& m : doc.at("models")) s.models.push_back(parse_model(m.get<std::string>()));
      if (s.models.empty()) throw ConfigError("models must not be empty");
    }

    const json output = doc.value("output", json::object());
    s.out_path = output.value("path", s.out_path.string());
    s.format = parse_format(output.value("format", "csv"));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed scenario: ") + e.what());
  }

  const SweepSpec& sw = s.sweep;
  if (sw.n_points && *sw.n_points < 2) throw ConfigError("n_points must be >= 2");
  if (!(std::isfinite(sw.x_min) && std::isfinite(sw.x_max) && sw.x_min < sw.x_max))
    throw ConfigError("sweep needs finite x_min < x_max");
  if (!(std::isfinite(sw.ratio_min) && std::isfinite(sw.ratio_max) &&
        sw.ratio_min >= 0.0 && sw.ratio_min < sw.ratio_max))
    throw ConfigError("sweep needs finite 0 <= ratio_min < ratio_max");
  if (!(std::isfinite(sw.t_final) && sw.t_final > 0.0))
    throw ConfigError("sweep.t_final must be > 0");
  for (double r : sw.c2_over_c1)
    if (!(std::isfinite(r) && r >= 0.0)) throw ConfigError("c2_over_c1 entries must be >= 0");
  try {
    validate(s.params);
  } catch (const InvalidParameter& e) {
    throw ConfigError(e.what());
  }
  return s;
}

Scenario load_scenario(const std::string& name_or_path) {
  std::filesystem::path path(name_or_path);
  if (!std::filesystem::exists(path)) {
    const std::filesystem::path preset =
        std::filesystem::path(OEMS_SCENARIO_DIR) / (name_or_path + ".json");
    if (!std::filesystem::exists(preset)) {
      throw IoError("scenario '" + name_or_path + "' not found");
    }
    path = preset;
  }
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return scenario_from_json(doc);
}

Cooperativities cooperativities(const WorkingPoint& wp, const SystemParams& p) {
  return {cooperativity(p.g1, wp.n1, p.kappa1, p.gamma_m),
          cooperativity(p.g2, wp.n2, p.kappa2, p.gamma_m)};
}

double invert_cooperativity(double target, int cavity,
                            const SystemParams& params,
                            const DriveConfig& drives,
                            const WorkingPointOptions& options) {
  if (cavity != 1 && cavity != 2) throw InvalidParameter("cavity must be 1 or 2");
  if (!(target >= 0.0 && std::isfinite(target)))
    throw InvalidParameter("target cooperativity must be >= 0");
  if (target == 0.0) return 0.0;
  const double g = cavity == 1 ? params.g1 : params.g2;
  if (g == 0.0) throw InvalidParameter("zero coupling cannot reach a nonzero cooperativity");

  auto coop_at = [&](double power) {
    DriveConfig d = drives;
    (cavity == 1 ? d.p_c1 : d.p_c2) = power;
    const WorkingPoint wp = solve_working_point(params, d, options);
    const Cooperativities c = cooperativities(wp, params);
    return cavity == 1 ? c.c1 : c.c2;
  };

  // Linear estimate from the Lorentzian at the nominal detuning.
  const double kappa = cavity == 1 ? params.kappa1 : params.kappa2;
  const double carrier = cavity == 1 ? params.omega_c1 : params.omega_c2;
  const double det = options.mode == DetuningMode::effective
                         ? (cavity == 1 ? options.target_delta1 : options.target_delta2)
                               .value_or(params.omega_m)
                         : (cavity == 1 ? params.delta_bare1 : params.delta_bare2);
  const double per_watt = g * g * (2.0 * kappa / (kHbar * carrier)) /
                          (kappa * kappa + det * det) / (kappa * params.gamma_m);
  double hi = target / per_watt;
  double lo = 0.0;
  int expand = 0;
  while (coop_at(hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (++expand > 200) {
      throw ConvergenceError("cannot bracket power for target cooperativity", 0.0);
    }
  }
  std::uintmax_t max_iter = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      [&](double p) { return coop_at(p) - target; }, lo, hi,
      boost::math::tools::eps_tolerance<double>(45), max_iter);
  const double power = 0.5 * (a + b);
  const double achieved = coop_at(power);
  const double err = std::abs(achieved - target) / target;
  if (err > 1e-3) {
    throw ConvergenceError("cooperativity inversion missed target", err);
  }
  return power;
}

DriveConfig resolve_drives(const Scenario& s, std::optional<double> c2_override) {
  DriveConfig d = s.drives;
  const std::optional<double> t1 = s.target_c1;
  const std::optional<double> t2 = c2_override ? c2_override : s.target_c2;
  if (!t1 && !t2) return d;
  // Alternate the two single-cavity inversions; in effective mode they are
  // independent and this settles after one pass.
  for (int pass = 0; pass < 50; ++pass) {
    const DriveConfig before = d;
    if (t1) d.p_c1 = invert_cooperativity(*t1, 1, s.params, d, s.wp_options);
    if (t2) d.p_c2 = invert_cooperativity(*t2, 2, s.params, d, s.wp_options);
    if (std::abs(d.p_c1 - before.p_c1) <= 1e-12 * d.p_c1 &&
        std::abs(d.p_c2 - before.p_c2) <= 1e-12 * d.p_c2) {
      return d;
    }
  }
  return d;
}

ProbeResponse evaluate_model(Model model, const WorkingPoint& wp,
                             const SystemParams& params, double x) {
  const double delta = params.omega_m + x;
  switch (model) {
    case Model::full:
    case Model::rwa:
      return probe_outputs(solve_sidebands(wp, params, delta, model == Model::rwa),
                           wp, params);
    case Model::analytic: {
      // Closed-form chain of the RWA equations for Delta_i = omega_m:
      //   Q+ = -g1 conj(a10) a1+ / (2 D_m),  a2+ = g2 a20 Q+ / (x + i kappa2)
      const RwaCoefficients<double> c{params.kappa1, params.kappa2, params.gamma_m,
                                      params.g1 * params.g1 * wp.n1 / 2.0,
                                      params.g2 * params.g2 * wp.n2 / 2.0};
      SidebandSolution sol;
      sol.delta = delta;
      sol.rwa = true;
      sol.a1_plus = response_rwa(x, c) / (2.0 * params.kappa1);
      const cdouble inner(x, params.kappa2);
      const cdouble mech = cdouble(x, params.gamma_m / 2.0) - c.s2 / inner;
      sol.q_plus = -params.g1 * std::conj(wp.a10) * sol.a1_plus / (2.0 * mech);
      sol.a2_plus = params.g2 * wp.a20 * sol.q_plus / inner;
      return probe_outputs(sol, wp, params);
    }
    case Model::oscillator: {
      // u = a1+, w = -sqrt(2) e^{i phi1} Q+, v = -e^{i(phi1 - phi2)} a2+.
      const auto m = from_working_point<double>(wp, params);
      const State3<double> z = harmonic_steady_state(m, delta, 1.0);
      const cdouble ph1 = unit_phase(wp.a10), ph2 = unit_phase(wp.a20);
      SidebandSolution sol;
      sol.delta = delta;
      sol.rwa = true;
      sol.a1_plus = z(0);
      sol.q_plus = -z(2) * std::conj(ph1) / std::sqrt(2.0);
      sol.a2_plus = -z(1) * ph2 * std::conj(ph1);
      return probe_outputs(sol, wp, params);
    }
  }
  throw InvalidParameter("unknown model");
}

const std::vector<std::string> kProbeColumns = {
    "x_over_gamma_m", "re_EL",          "im_EL",      "reflect_flux",
    "abs_ER_sq",      "transmit_flux",  "mech_intensity", "flux_budget"};

namespace {

double x_scale(const Scenario& s) {
  if (s.sweep.x_unit == "kappa1") return s.params.kappa1;
  if (s.sweep.x_unit == "rad_s") return 1.0;
  return s.params.gamma_m;
}

std::vector<double> probe_row(const ProbeResponse& r, double gamma_m) {
  return {r.x / gamma_m,    r.e_l.real(),      r.e_l.imag(),     r.reflect_flux,
          r.abs_er_sq,      r.transmit_flux,   r.mech_intensity, r.flux_budget};
}

std::string ratio_label(double r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", r);
  return buf;
}

// ~20 points across the narrowest spectral feature in the window.
int default_probe_points(const Scenario& s, double span, double c1, double c2) {
  const double gamma_eit = eit_width(c1, s.params.gamma_m);
  double feature = gamma_eit;
  if (c2 > 0.0) {
    const double s2 = c2 * s.params.kappa2 * s.params.gamma_m / 2.0;
    feature = eia_splitting(gamma_eit, s2, s.params.kappa2).gamma_eia_approx;
  }
  const double want = std::ceil(20.0 * span / feature);
  return static_cast<int>(std::clamp(want, 201.0, 2.0e6));
}

}  // namespace

std::vector<Table> probe_x_tables(const Scenario& s) {
  const double scale = x_scale(s);
  const double x_min = s.sweep.x_min * scale, x_max = s.sweep.x_max * scale;
  const DriveConfig base = resolve_drives(s);
  const WorkingPoint base_wp = solve_working_point(s.params, base, s.wp_options);
  const double c1 = cooperativities(base_wp, s.params).c1;

  std::vector<std::optional<double>> ratios;
  if (s.sweep.c2_over_c1.empty()) ratios.push_back(std::nullopt);
  for (double r : s.sweep.c2_over_c1) ratios.push_back(r);

  std::vector<Table> tables;
  for (const auto& ratio : ratios) {
    const DriveConfig d =
        ratio ? resolve_drives(s, *ratio * (s.target_c1 ? *s.target_c1 : c1)) : base;
    const WorkingPoint wp = solve_working_point(s.params, d, s.wp_options);
    const Cooperativities c = cooperativities(wp, s.params);
    const int n = s.sweep.n_points.value_or(
        default_probe_points(s, x_max - x_min, c.c1, c.c2));
    const std::vector<double> grid = uniform_grid(x_min, x_max, n);
    for (Model model : s.models) {
      Table t;
      t.label = to_string(model) + (ratio ? "_c2c1_" + ratio_label(*ratio) : "");
      t.columns = kProbeColumns;
      t.meta = {{"model", to_string(model)}, {"c1", c.c1}, {"c2", c.c2},
                {"p_c1_W", d.p_c1}, {"p_c2_W", d.p_c2}};
      if (ratio) t.meta["c2_over_c1"] = *ratio;
      t.rows.reserve(grid.size());
      for (std::size_t k = 0; k < grid.size(); ++k) {
        try {
          t.rows.push_back(probe_row(evaluate_model(model, wp, s.params, grid[k]),
                                     s.params.gamma_m));
        } catch (const SingularSystem& e) {
          throw SingularSystem("row " + std::to_string(k) + ": " + e.what(),
                               e.detuning());
        }
      }
      tables.push_back(std::move(t));
    }
  }
  return tables;
}

std::vector<Table> ratio_tables(const Scenario& s) {
  const double x = s.sweep.x * x_scale(s);
  const int n = s.sweep.n_points.value_or(101);
  const std::vector<double> grid = uniform_grid(s.sweep.ratio_min, s.sweep.ratio_max, n);
  const DriveConfig base = resolve_drives(s);
  const double c1 = s.target_c1
                        ? *s.target_c1
                        : cooperativities(solve_working_point(s.params, base, s.wp_options),
                                          s.params).c1;
  std::vector<std::string> columns{"c2_over_c1"};
  columns.insert(columns.end(), kProbeColumns.begin(), kProbeColumns.end());

  std::vector<Table> tables;
  for (Model model : s.models) {
    Table t;
    t.label = to_string(model);
    t.columns = columns;
    t.meta = {{"model", to_string(model)}, {"c1", c1}, {"x_over_gamma_m", x / s.params.gamma_m}};
    tables.push_back(std::move(t));
  }
  for (double r : grid) {
    const DriveConfig d = resolve_drives(s, r * c1);
    const WorkingPoint wp = solve_working_point(s.params, d, s.wp_options);
    for (std::size_t m = 0; m < s.models.size(); ++m) {
      std::vector<double> row{r};
      const auto probe =
          probe_row(evaluate_model(s.models[m], wp, s.params, x), s.params.gamma_m);
      row.insert(row.end(), probe.begin(), probe.end());
      tables[m].rows.push_back(std::move(row));
    }
  }
  return tables;
}

Table roots_table(const Scenario& s) {
  const int n = s.sweep.n_points.value_or(401);
  const std::vector<double> grid = uniform_grid(s.sweep.ratio_min, s.sweep.ratio_max, n);
  const DriveConfig base = resolve_drives(s);
  const double c1 = s.target_c1
                        ? *s.target_c1
                        : cooperativities(solve_working_point(s.params, base, s.wp_options),
                                          s.params).c1;
  std::vector<RwaCoefficients<double>> path;
  path.reserve(grid.size());
  for (double r : grid) {
    const DriveConfig d = resolve_drives(s, r * c1);
    const WorkingPoint wp = solve_working_point(s.params, d, s.wp_options);
    path.push_back({s.params.kappa1, s.params.kappa2, s.params.gamma_m,
                    s.params.g1 * s.params.g1 * wp.n1 / 2.0,
                    s.params.g2 * s.params.g2 * wp.n2 / 2.0});
  }
  const auto poles = track_roots(path);
  Table t;
  t.label = "roots";
  t.columns = {"c2_over_c1",           "im_root_a_over_gamma_m", "im_root_b_over_gamma_m",
               "im_root_c_over_gamma_m", "re_root_a_over_gamma_m", "re_root_b_over_gamma_m",
               "re_root_c_over_gamma_m", "nms_flag"};
  t.meta = {{"c1", c1},
            {"labels", "trajectories a, b, c start at the smallest, middle and largest |Im|"}};
  const double g = s.params.gamma_m;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto& r = poles[k].roots;
    t.rows.push_back({grid[k], std::abs(r[0].imag()) / g, std::abs(r[1].imag()) / g,
                      std::abs(r[2].imag()) / g, r[0].real() / g, r[1].real() / g,
                      r[2].real() / g,
                      poles[k].regime == PoleRegime::eit ? 0.0 : 1.0});
  }
  return t;
}

Table time_domain_table(const Scenario& s) {
  const DriveConfig d = resolve_drives(s);
  const WorkingPoint wp = solve_working_point(s.params, d, s.wp_options);
  const auto model = from_working_point<double>(wp, s.params);
  const double delta = s.params.omega_m + s.sweep.x * x_scale(s);
  const double tscale = s.sweep.t_unit == "s" ? 1.0 : 1.0 / s.params.kappa2;
  const double t_final = s.sweep.t_final * tscale;
  const double dt = s.sweep.dt ? *s.sweep.dt * tscale : 0.5 * rk4_max_step(model, delta);
  const int n = s.sweep.n_points.value_or(201);
  const auto traj = propagate(model, 1.0, delta, t_final, s.sweep.method, dt, n);
  const State3<double> steady = harmonic_steady_state(model, delta, 1.0);

  Table t;
  t.label = "trajectory";
  t.columns = {"t", "re_u", "im_u", "re_v", "im_v", "re_w", "im_w", "rel_dev_from_steady"};
  t.meta = {{"method", s.sweep.method == Integrator::rk4 ? "rk4" : "exact"},
            {"x_over_gamma_m", (delta - s.params.omega_m) / s.params.gamma_m},
            {"g_eff1", model.g_eff1},
            {"g_eff2", model.g_eff2}};
  for (std::size_t k = 0; k < traj.time.size(); ++k) {
    const auto& z = traj.state[k];
    t.rows.push_back({traj.time[k], z(0).real(), z(0).imag(), z(1).real(), z(1).imag(),
                      z(2).real(), z(2).imag(), (z - steady).norm() / steady.norm()});
  }
  return t;
}

json summary(const Scenario& s) {
  const SystemParams& p = s.params;
  const DriveConfig d = resolve_drives(s);
  const WorkingPoint wp = solve_working_point(p, d, s.wp_options);
  const Cooperativities c = cooperativities(wp, p);
  const double p_cr = critical_power(p, p.omega_c1);
  const double gamma_eit = eit_width(c.c1, p.gamma_m);
  const double s1 = p.g1 * p.g1 * wp.n1 / 2.0;
  const double s2 = p.g2 * p.g2 * wp.n2 / 2.0;
  const RwaCoefficients<double> coeffs{p.kappa1, p.kappa2, p.gamma_m, s1, s2};
  const PoleSet<double> poles = denominator_roots(coeffs);
  const auto split = eia_splitting(gamma_eit, s2, p.kappa2);
  const auto height = peak_height(c.c1, c.c2);
  const auto osc = from_working_point<double>(wp, p);
  const HierarchyReport hier = hierarchy(osc);

  json out;
  out["scenario"] = s.name;
  out["params_hz"] = {{"omega_c1", p.omega_c1 / kTwoPi}, {"omega_c2", p.omega_c2 / kTwoPi},
                      {"omega_m", p.omega_m / kTwoPi},   {"gamma_m", p.gamma_m / kTwoPi},
                      {"kappa1", p.kappa1 / kTwoPi},     {"kappa2", p.kappa2 / kTwoPi},
                      {"g1", p.g1 / kTwoPi},             {"g2", p.g2 / kTwoPi}};
  out["resolved_sideband_ratio"] = resolved_sideband_ratio(p);
  out["drives_W"] = {{"p_c1", d.p_c1}, {"p_c2", d.p_c2}, {"p_p", d.p_p}};
  out["working_point"] = {
      {"mode", s.wp_options.mode == DetuningMode::effective ? "effective" : "bare"},
      {"n1", wp.n1}, {"n2", wp.n2}, {"q0", wp.q0},
      {"g1_q0_rad_s", p.g1 * wp.q0},
      {"delta1_hz", wp.delta1 / kTwoPi}, {"delta2_hz", wp.delta2 / kTwoPi},
      {"delta_bare1_hz", wp.delta_bare1 / kTwoPi}, {"delta_bare2_hz", wp.delta_bare2 / kTwoPi},
      {"solution_count", wp.solution_count}, {"multistable", wp.multistable()}};
  out["cooperativity"] = {{"c1", c.c1}, {"c2", c.c2}};
  out["critical_power_W"] = p_cr;
  out["below_critical_power"] = d.p_c1 < p_cr;
  out["gamma_eit_over_gamma_m"] = gamma_eit / p.gamma_m;
  out["eia"] = {{"gamma_eia_approx_over_kappa2", split.gamma_eia_approx / p.kappa2},
                {"gamma_minus_over_kappa2", split.gamma_minus.real() / p.kappa2},
                {"smallest_root_over_kappa2", std::abs(poles.roots[0].imag()) / p.kappa2},
                {"validity_ratio", split.validity_ratio},
                {"approx_valid", split.approx_valid}};
  json roots = json::array();
  for (const auto& r : poles.roots)
    roots.push_back({{"re_over_gamma_m", r.real() / p.gamma_m},
                     {"im_over_gamma_m", r.imag() / p.gamma_m}});
  out["roots"] = roots;
  out["pole_regime"] = poles.regime == PoleRegime::eit ? "eit" : "normal_mode_splitting";
  out["peak_height"] = {{"exact", height.exact}};
  if (height.approx) out["peak_height"]["approx"] = *height.approx;
  out["hierarchy"] = {{"kappa1_over_gamma_m", hier.kappa1_over_gamma_m},
                      {"gamma_m_over_kappa2", hier.gamma_m_over_kappa2},
                      {"satisfied", hier.satisfied}};
  out["transduced_frequency_hz_at_line_center"] =
      (p.omega_c2 + p.omega_m) / kTwoPi;

  // Routing at line center with C2 = 0 and C2 = C1.
  const DriveConfig d_off = resolve_drives(s, 0.0);
  const DriveConfig d_on = resolve_drives(s, s.target_c1 ? *s.target_c1 : c.c1);
  const WorkingPoint wp_off = solve_working_point(p, d_off, s.wp_options);
  const WorkingPoint wp_on = solve_working_point(p, d_on, s.wp_options);
  for (Model m : {Model::rwa, Model::full}) {
    const ProbeResponse off = evaluate_model(m, wp_off, p, 0.0);
    const ProbeResponse on = evaluate_model(m, wp_on, p, 0.0);
    out["switching"][to_string(m)] = {
        {"reflect_flux_c2_zero", off.reflect_flux},
        {"reflect_flux_c2_eq_c1", on.reflect_flux},
        {"transmit_flux_c2_eq_c1", on.transmit_flux},
        {"mech_intensity_ratio", on.mech_intensity / off.mech_intensity},
        {"transmit_over_reflect", on.transmit_flux / on.reflect_flux},
        {"reflect_off_over_on", off.reflect_flux / on.reflect_flux}};
  }
  return out;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string to_csv(const Table& t) {
  std::ostringstream os;
  for (std::size_t k = 0; k < t.columns.size(); ++k)
    os << (k ? "," : "") << t.columns[k];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t k = 0; k < row.size(); ++k)
      os << (k ? "," : "") << format_number(row[k]);
    os << '\n';
  }
  return os.str();
}

json to_json(const Table& t) {
  json rows = json::array();
  for (const auto& row : t.rows) {
    json r = json::object();
    for (std::size_t k = 0; k < row.size(); ++k) r[t.columns[k]] = row[k];
    rows.push_back(std::move(r));
  }
  return {{"label", t.label}, {"columns", t.columns}, {"meta", t.meta}, {"rows", rows}};
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

std::filesystem::path sibling(const std::filesystem::path& base,
                              const std::string& suffix, const std::string& ext) {
  std::filesystem::path p = base;
  p.replace_filename(base.stem().string() + suffix + ext);
  return p;
}

}  // namespace

RunResult run_scenario(const Scenario& s) {
  std::vector<Table> tables;
  switch (s.sweep.kind) {
    case SweepKind::probe_x: tables = probe_x_tables(s); break;
    case SweepKind::cooperativity_ratio: tables = ratio_tables(s); break;
    case SweepKind::roots_vs_ratio: tables.push_back(roots_table(s)); break;
    case SweepKind::time_domain: tables.push_back(time_domain_table(s)); break;
  }

  RunResult result;
  result.summary = summary(s);
  if (s.format == OutputFormat::json) {
    json doc = {{"scenario", s.name}, {"kind", to_string(s.sweep.kind)}};
    doc["tables"] = json::array();
    for (const auto& t : tables) doc["tables"].push_back(to_json(t));
    write_file(s.out_path, doc.dump(2) + "\n");
    result.written.push_back(s.out_path);
  } else if (tables.size() == 1) {
    write_file(s.out_path, to_csv(tables.front()));
    result.written.push_back(s.out_path);
  } else {
    const std::string ext = s.out_path.has_extension() ? s.out_path.extension().string() : ".csv";
    for (const auto& t : tables) {
      const auto path = sibling(s.out_path, "_" + t.label, ext);
      write_file(path, to_csv(t));
      result.written.push_back(path);
    }
  }
  const auto summary_path = sibling(s.out_path, "_summary", ".json");
  write_file(summary_path, result.summary.dump(2) + "\n");
  result.written.push_back(summary_path);
  return result;
}

}  // namespace oems
