#pragma once

// Numerical integration of Hamilton's equations and perturbation experiments.

#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "h2body/equilibria.hpp"

namespace h2body {

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  double t_end = 1.0;
  double sample_dt = 0.0;  ///< <= 0 records only the endpoints

  void validate() const;
};

struct Sample {
  double t;
  PhaseState z;
  double energy;
  CoalgebraElement momentum;
  double distance;
};

enum class IntegrationStatus { Completed, Collision, StepSizeUnderflow, Stopped };

const char* to_string(IntegrationStatus s);

struct TrajectoryRecord {
  std::vector<Sample> samples;
  IntegrationStatus status = IntegrationStatus::Completed;
  double t_final = 0.0;  ///< time reached (failure time when not Completed)
  std::string message;
  long accepted_steps = 0;
  long rejected_steps = 0;

  bool ok() const { return status == IntegrationStatus::Completed; }
};

/// Called after every accepted step; returning false stops the run with status Stopped.
using StepObserver = std::function<bool(double t, const State& y)>;

Sample make_sample(double t, const PhaseState& z, const Params& prm);

/// Dormand-Prince 5(4) with error norm max_i |e_i| / (abs_tol + rel_tol max(|y_i|, |y_new_i|)).
TrajectoryRecord integrate(const PhaseState& z0, const Params& prm, const IntegratorConfig& cfg,
                           const StepObserver& observer = {});

struct ConservationReport {
  double energy_drift;
  double momentum_drift_e;
  double momentum_drift_h;
  double momentum_drift_p;

  double max_momentum_drift() const;
};

ConservationReport conservation_report(const TrajectoryRecord& rec);

/// Euclidean distance between two phase points in chart coordinates.
double chart_distance(const State& a, const State& b);

/// max over samples of the chart distance to the closed-form trajectory; throws on integrator failure.
double compare_analytic(const RelativeEquilibrium& re, const IntegratorConfig& cfg);

/// 64-bit Mersenne twister (std::mt19937_64) with hand-written output transforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// (x >> 11) * 2^-53, in [0, 1).
  double uniform();
  /// Box-Muller.
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Seed of trial i: seed + 0x9E3779B97F4A7C15 (i + 1).
std::uint64_t trial_seed(std::uint64_t seed, int trial);

struct PerturbationExperiment {
  RelativeEquilibrium base;
  double perturbation_scale = 1e-4;
  int n_trials = 50;
  double horizon = 1.0;
  std::uint64_t seed = 0;
  double stable_band = 1e-2;
  double escape_threshold = 0.5;
  IntegratorConfig integrator{};
  int threads = 0;  ///< 0 picks the hardware concurrency

  void validate() const;
};

struct TrialResult {
  int index = 0;
  double max_distance_deviation = 0;  ///< max |d(t) - r0| over accepted steps
  double max_chart_displacement = 0;  ///< max chart distance to the unperturbed solution
  bool escaped = false;
  double first_escape_time = std::numeric_limits<double>::quiet_NaN();
  int redraws = 0;
  IntegrationStatus status = IntegrationStatus::Completed;
  std::string message;
  State initial{};
};

struct PerturbationReport {
  std::vector<TrialResult> trials;  ///< ordered by trial index
  int n_bounded = 0;                ///< trials with max deviation below stable_band
  int n_escaped = 0;
  int n_failed = 0;                 ///< collision or step underflow
  int total_redraws = 0;
  double max_deviation = 0;
  double min_deviation = 0;
  double median_deviation = 0;
};

/// Random chart perturbation of z0 with Euclidean norm scale; invalid draws are redrawn.
PhaseState perturb_state(const PhaseState& z0, double scale, Rng& rng, int& redraws);

PerturbationReport perturb_and_measure(const PerturbationExperiment& exp);

}  // namespace h2body
