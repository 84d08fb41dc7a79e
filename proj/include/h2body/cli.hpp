#pragma once

// Command-line front end: scenario parsing, the five commands, CSV / JSON writers.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "h2body/sim.hpp"
#include "h2body/stability.hpp"

namespace h2body::cli {

enum ExitCode : int {
  kOk = 0,
  kValidation = 2,
  kCollision = 3,
  kIntegratorFailure = 4,
  kOracleMismatch = 5,
};

enum class Mode { Simulate, Equilibrium, Stability, ThresholdCurve, Perturb };

const char* to_string(Mode m);

struct EquilibriumSpec {
  Family family = Family::Elliptic;
  double d1 = 0.0;
  int sign = 1;
};

struct PerturbSpec {
  double scale = 1e-4;
  int n_trials = 50;
  double horizon_periods = 20.0;
  std::uint64_t seed = 0;
  double stable_band = 1e-2;
  double escape_threshold = 0.5;
  int threads = 0;
};

struct CurveSpec {
  double c_min = 0.0;
  double c_max = 0.0;
  int n_points = 0;
};

struct Scenario {
  Mode mode = Mode::Simulate;
  std::optional<Params> params;
  std::optional<State> initial_state;
  std::optional<EquilibriumSpec> equilibrium;
  IntegratorConfig integrator{};
  PerturbSpec perturbation{};
  std::optional<CurveSpec> curve;
};

/// Validation failure; maps to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Strict parse: unknown keys, wrong types and missing mode-specific fields throw ValidationError.
Scenario parse_scenario(const nlohmann::json& j);
Scenario load_scenario(const std::string& path);

/// Compact-or-indented JSON with every number printed as %.17g; NaN and infinities become null.
std::string dump_json(const nlohmann::json& j, int indent = 2);

/// Trajectory CSV: "#schema=v1", header t,x1,y1,x2,y2,px1,py1,px2,py2,energy,Jh,Je,Jp,dist, then rows.
void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& rec);

/// Parses a CSV written by write_trajectory_csv or write_threshold_csv; checks the schema line.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};
CsvTable read_csv(std::istream& is);

void write_threshold_csv(std::ostream& os, const std::vector<MassRatioCurve>& curve);

nlohmann::json equilibrium_json(const RelativeEquilibrium& re);

struct StabilityOutcome {
  nlohmann::json report;
  bool mismatch = false;
};
StabilityOutcome stability_json(const RelativeEquilibrium& re);

nlohmann::json conservation_json(const TrajectoryRecord& rec);
nlohmann::json perturbation_json(const PerturbationExperiment& exp, const PerturbationReport& rep);

/// Entry point used by the executable; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace h2body::cli
