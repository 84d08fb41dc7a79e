#include "h2body/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <optional>
#include <thread>

#include "h2body/error.hpp"

namespace h2body {

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "tolerances must be positive");
  }
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw Error(ErrorCode::InvalidArgument, "t_end must be positive");
  }
  if (!(max_step > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "max_step must be positive");
  }
  if (std::isnan(sample_dt)) {
    throw Error(ErrorCode::InvalidArgument, "sample_dt is NaN");
  }
}

const char* to_string(IntegrationStatus s) {
  switch (s) {
    case IntegrationStatus::Completed:
      return "completed";
    case IntegrationStatus::Collision:
      return "collision";
    case IntegrationStatus::StepSizeUnderflow:
      return "step_size_underflow";
    case IntegrationStatus::Stopped:
      return "stopped";
  }
  return "unknown";
}

Sample make_sample(double t, const PhaseState& z, const Params& prm) {
  return {t, z, hamiltonian(z, prm), momentum_map(z), z.config.distance()};
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

State combine(const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
  State out = y;
  for (const auto& [w, k] : terms) {
    if (w == 0.0) continue;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += h * w * (*k)[i];
  }
  return out;
}

double state_norm(const State& y) {
  double s = 0.0;
  for (const double v : y) s = std::max(s, std::abs(v));
  return s;
}

struct StageFailure {
  ErrorCode code;
  std::string message;
};

}  // namespace

TrajectoryRecord integrate(const PhaseState& z0, const Params& prm, const IntegratorConfig& cfg,
                           const StepObserver& observer) {
  cfg.validate();
  TrajectoryRecord rec;
  rec.samples.push_back(make_sample(0.0, z0, prm));

  const auto field = [&prm](const State& y) { return hamiltonian_vector_field(y, prm); };

  State y = z0.to_array();
  State k1 = field(y);
  double t = 0.0;
  const double t_end = cfg.t_end;
  const double dt = cfg.sample_dt > 0.0 ? cfg.sample_dt : t_end;
  long next_sample = 1;
  const auto sample_time = [&](long i) { return std::min(t_end, static_cast<double>(i) * dt); };

  double h = std::min({cfg.max_step, 0.01 * std::max(1.0, state_norm(y)) / std::max(1e-300, state_norm(k1)),
                       sample_time(1)});
  std::optional<StageFailure> last_failure;

  while (t < t_end) {
    const double target = sample_time(next_sample);
    const double h_free = h;
    bool hits_sample = false;
    if (t + h >= target) {
      h = target - t;
      hits_sample = true;
    }
    if (h < 1e-14 * std::max(1.0, std::abs(t))) {
      const bool collision = last_failure && last_failure->code == ErrorCode::Collision;
      rec.status = collision ? IntegrationStatus::Collision : IntegrationStatus::StepSizeUnderflow;
      rec.message = collision ? last_failure->message : "step size fell below 1e-14 relative to t";
      rec.t_final = t;
      return rec;
    }

    State y_new, k7;
    double err = 0.0;
    try {
      const State k2 = field(combine(y, h, {{a21, &k1}}));
      const State k3 = field(combine(y, h, {{a31, &k1}, {a32, &k2}}));
      const State k4 = field(combine(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
      const State k5 = field(combine(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
      const State k6 = field(combine(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
      y_new = combine(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
      k7 = field(y_new);
      for (std::size_t i = 0; i < y.size(); ++i) {
        const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
        err = std::max(err, std::abs(e) / sc);
      }
      if (!std::isfinite(err)) throw Error(ErrorCode::InvalidArgument, "non-finite stage");
    } catch (const Error& ex) {
      last_failure = StageFailure{ex.code(), ex.what()};
      h *= 0.5;
      ++rec.rejected_steps;
      continue;
    }

    if (err > 1.0) {
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      ++rec.rejected_steps;
      continue;
    }

    last_failure.reset();
    t = hits_sample ? target : t + h;
    y = y_new;
    k1 = k7;
    ++rec.accepted_steps;

    const PhaseState z = PhaseState::from_array(y);
    if (hits_sample) {
      rec.samples.push_back(make_sample(t, z, prm));
      ++next_sample;
    }
    if (observer && !observer(t, y)) {
      if (!hits_sample) rec.samples.push_back(make_sample(t, z, prm));
      rec.status = IntegrationStatus::Stopped;
      rec.t_final = t;
      return rec;
    }

    const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    h = std::min(cfg.max_step, hits_sample ? std::max(h * factor, h_free) : h * factor);
  }
  rec.t_final = t;
  return rec;
}

double ConservationReport::max_momentum_drift() const {
  return std::max({momentum_drift_e, momentum_drift_h, momentum_drift_p});
}

ConservationReport conservation_report(const TrajectoryRecord& rec) {
  if (rec.samples.empty()) {
    throw Error(ErrorCode::InvalidArgument, "empty trajectory record");
  }
  const Sample& s0 = rec.samples.front();
  ConservationReport r{0, 0, 0, 0};
  for (const Sample& s : rec.samples) {
    r.energy_drift = std::max(r.energy_drift, std::abs(s.energy - s0.energy));
    r.momentum_drift_e = std::max(r.momentum_drift_e, std::abs(s.momentum.e - s0.momentum.e));
    r.momentum_drift_h = std::max(r.momentum_drift_h, std::abs(s.momentum.h - s0.momentum.h));
    r.momentum_drift_p = std::max(r.momentum_drift_p, std::abs(s.momentum.p - s0.momentum.p));
  }
  return r;
}

double chart_distance(const State& a, const State& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

double compare_analytic(const RelativeEquilibrium& re, const IntegratorConfig& cfg) {
  const TrajectoryRecord rec = integrate(re.initial_state(), re.params, cfg);
  if (!rec.ok()) {
    throw Error(rec.status == IntegrationStatus::Collision ? ErrorCode::Collision : ErrorCode::StepSizeUnderflow,
                rec.message);
  }
  double worst = 0.0;
  for (const Sample& s : rec.samples) {
    worst = std::max(worst, chart_distance(s.z.to_array(), analytic_trajectory(re, s.t).to_array()));
  }
  return worst;
}

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

std::uint64_t trial_seed(std::uint64_t seed, int trial) {
  return seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(trial + 1);
}

void PerturbationExperiment::validate() const {
  if (!(perturbation_scale > 0.0) || !(horizon > 0.0) || n_trials < 1) {
    throw Error(ErrorCode::InvalidArgument, "perturbation scale, horizon and trial count must be positive");
  }
  if (!(stable_band > 0.0) || !(escape_threshold > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "detection thresholds must be positive");
  }
}

PhaseState perturb_state(const PhaseState& z0, double scale, Rng& rng, int& redraws) {
  const State base = z0.to_array();
  for (;;) {
    State dir{};
    double n2 = 0.0;
    for (double& d : dir) {
      d = rng.normal();
      n2 += d * d;
    }
    const double f = scale / std::sqrt(n2);
    State s = base;
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += f * dir[i];
    try {
      return PhaseState::from_array(s);
    } catch (const Error&) {
      ++redraws;
    }
  }
}

namespace {

TrialResult run_trial(const PerturbationExperiment& exp, int index) {
  TrialResult r;
  r.index = index;
  Rng rng(trial_seed(exp.seed, index));
  const PhaseState z = perturb_state(exp.base.initial_state(), exp.perturbation_scale, rng, r.redraws);
  r.initial = z.to_array();

  const double r0 = exp.base.distance();
  IntegratorConfig cfg = exp.integrator;
  cfg.t_end = exp.horizon;
  cfg.sample_dt = 0.0;

  const auto track = [&](double t, const State& y) {
    const double d = hyperbolic_distance(Point(y[0], y[1]), Point(y[2], y[3]));
    r.max_distance_deviation = std::max(r.max_distance_deviation, std::abs(d - r0));
    r.max_chart_displacement =
        std::max(r.max_chart_displacement, chart_distance(y, analytic_trajectory(exp.base, t).to_array()));
    if (std::abs(d - r0) > exp.escape_threshold) {
      r.escaped = true;
      r.first_escape_time = t;
      return false;
    }
    return true;
  };
  const TrajectoryRecord rec = integrate(z, exp.base.params, cfg, track);
  r.status = rec.status;
  r.message = rec.message;
  return r;
}

}  // namespace

PerturbationReport perturb_and_measure(const PerturbationExperiment& exp) {
  exp.validate();
  PerturbationReport rep;
  rep.trials.resize(static_cast<std::size_t>(exp.n_trials));

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int n_threads = std::min(exp.n_trials, exp.threads > 0 ? exp.threads : static_cast<int>(hw));
  std::atomic<int> next{0};
  const auto worker = [&] {
    for (int i = next++; i < exp.n_trials; i = next++) {
      try {
        rep.trials[static_cast<std::size_t>(i)] = run_trial(exp, i);
      } catch (const std::exception& ex) {
        TrialResult& r = rep.trials[static_cast<std::size_t>(i)];
        r.index = i;
        r.status = IntegrationStatus::StepSizeUnderflow;
        r.message = ex.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::vector<double> devs;
  for (const TrialResult& r : rep.trials) {
    rep.total_redraws += r.redraws;
    if (r.escaped) ++rep.n_escaped;
    if (r.status == IntegrationStatus::Collision || r.status == IntegrationStatus::StepSizeUnderflow) ++rep.n_failed;
    if (!r.escaped && r.status == IntegrationStatus::Completed && r.max_distance_deviation < exp.stable_band) {
      ++rep.n_bounded;
    }
    devs.push_back(r.max_distance_deviation);
  }
  std::sort(devs.begin(), devs.end());
  rep.min_deviation = devs.front();
  rep.max_deviation = devs.back();
  const std::size_t n = devs.size();
  rep.median_deviation = n % 2 ? devs[n / 2] : 0.5 * (devs[n / 2 - 1] + devs[n / 2]);
  return rep;
}

}  // namespace h2body
