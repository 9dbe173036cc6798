#ifndef OEMS_SCENARIO_HPP_
#define OEMS_SCENARIO_HPP_

#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "oems/linear_response.hpp"
#include "oems/oscillators.hpp"
#include "oems/params.hpp"
#include "oems/working_point.hpp"

namespace oems {

enum class Model { full, rwa, analytic, oscillator };
enum class SweepKind { probe_x, cooperativity_ratio, roots_vs_ratio, time_domain };
enum class OutputFormat { csv, json };

Model parse_model(const std::string& name);
std::string to_string(Model m);
SweepKind parse_sweep_kind(const std::string& name);
std::string to_string(SweepKind k);
OutputFormat parse_format(const std::string& name);

/// Parses a power such as 1.3e-3, "1.3mW", "3.3 uW" or "3.3µW" into watts.
double parse_power(const nlohmann::json& value);

struct SweepSpec {
  SweepKind kind = SweepKind::probe_x;
  /// probe_x: detuning range in units of x_unit.
  double x_min = -30.0;
  double x_max = 30.0;
  std::string x_unit = "gamma_m";  ///< gamma_m | kappa1 | rad_s
  /// Fixed probe detuning for ratio and time-domain sweeps, in x_unit.
  double x = 0.0;
  /// Unset means "choose so the narrowest feature gets ~20 points".
  std::optional<int> n_points;
  /// probe_x: one curve per C2/C1 value; empty keeps the base drives.
  std::vector<double> c2_over_c1;
  double ratio_min = 0.0;
  double ratio_max = 1.0;
  /// time_domain
  double t_final = 10.0;
  std::string t_unit = "1/kappa2";  ///< 1/kappa2 | s
  Integrator method = Integrator::exact_propagator;
  std::optional<double> dt;  ///< same unit as t_final; default 0.5 * guard
};

struct Scenario {
  std::string name = "custom";
  SystemParams params = default_params();
  WorkingPointOptions wp_options;
  DriveConfig drives;
  std::optional<double> target_c1;
  std::optional<double> target_c2;
  SweepSpec sweep;
  std::vector<Model> models{Model::rwa};
  std::filesystem::path out_path = "out.csv";
  OutputFormat format = OutputFormat::csv;
};

/// Builds a scenario from a JSON document. Frequencies are read in Hz
/// (2*pi applied) unless params.unit is "rad_s". Throws ConfigError.
Scenario scenario_from_json(const nlohmann::json& doc);

/// Loads a scenario file, or a built-in preset (fig2, fig3, fig4, fig5, ...)
/// when `name_or_path` is not an existing file.
Scenario load_scenario(const std::string& name_or_path);

/// Coupling power that gives cooperativity `target` in cavity 1 or 2 with
/// the other cavity's power taken from `drives`. Root-solves the
/// self-consistent working point to 0.1% or throws ConvergenceError.
double invert_cooperativity(double target, int cavity,
                            const SystemParams& params,
                            const DriveConfig& drives = {},
                            const WorkingPointOptions& options = {});

/// Drives for the scenario, with cooperativity targets inverted to powers.
/// `c2_override` replaces the cavity-2 target.
DriveConfig resolve_drives(const Scenario& s,
                           std::optional<double> c2_override = std::nullopt);

struct Cooperativities {
  double c1 = 0.0;
  double c2 = 0.0;
};
Cooperativities cooperativities(const WorkingPoint& wp, const SystemParams& p);

/// Probe observables at detuning x = delta - omega_m from the chosen model.
ProbeResponse evaluate_model(Model model, const WorkingPoint& wp,
                             const SystemParams& params, double x);

/// A plot-ready table. Column names are stable API.
struct Table {
  std::string label;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  nlohmann::json meta = nlohmann::json::object();
};

extern const std::vector<std::string> kProbeColumns;

std::vector<Table> probe_x_tables(const Scenario& s);
std::vector<Table> ratio_tables(const Scenario& s);
Table roots_table(const Scenario& s);
Table time_domain_table(const Scenario& s);

/// Derived-quantity report: working point, cooperativities, critical power,
/// window widths, roots, peak heights and switching ratios.
nlohmann::json summary(const Scenario& s);

std::string format_number(double v);
std::string to_csv(const Table& t);
nlohmann::json to_json(const Table& t);

struct RunResult {
  nlohmann::json summary;
  std::vector<std::filesystem::path> written;
};

/// Computes the scenario's sweep and writes the table(s) plus
/// `<stem>_summary.json` next to the output path. Throws IoError on write
/// failure.
RunResult run_scenario(const Scenario& s);

}  // namespace oems

#endif  // OEMS_SCENARIO_HPP_
