#include "h2body/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "h2body/error.hpp"

namespace h2body::cli {

using nlohmann::json;
namespace fs = std::filesystem;

const char* to_string(Mode m) {
  switch (m) {
    case Mode::Simulate:
      return "simulate";
    case Mode::Equilibrium:
      return "equilibrium";
    case Mode::Stability:
      return "stability";
    case Mode::ThresholdCurve:
      return "threshold_curve";
    case Mode::Perturb:
      return "perturb";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Scenario parsing

namespace {

void require_object(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ValidationError(where + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) throw ValidationError(where + ": unknown field '" + key + "'");
  }
}

double get_number(const json& j, const std::string& key, const std::string& where) {
  const json& v = j.at(key);
  if (!v.is_number()) throw ValidationError(where + "." + key + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ValidationError(where + "." + key + ": not finite");
  return x;
}

void read_number(const json& j, const std::string& key, const std::string& where, double& dst) {
  if (j.contains(key)) dst = get_number(j, key, where);
}

void read_int(const json& j, const std::string& key, const std::string& where, int& dst) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw ValidationError(where + "." + key + ": expected an integer");
  dst = v.get<int>();
}

Family parse_family(const std::string& s) {
  if (s == "elliptic") return Family::Elliptic;
  if (s == "hyperbolic") return Family::Hyperbolic;
  throw ValidationError("family must be 'elliptic' or 'hyperbolic', got '" + s + "'");
}

Mode parse_mode(const std::string& s) {
  if (s == "simulate") return Mode::Simulate;
  if (s == "equilibrium") return Mode::Equilibrium;
  if (s == "stability") return Mode::Stability;
  if (s == "threshold_curve") return Mode::ThresholdCurve;
  if (s == "perturb") return Mode::Perturb;
  throw ValidationError("unknown mode '" + s + "'");
}

Params make_params(double m1, double m2, double k) {
  try {
    return Params(m1, m2, k);
  } catch (const Error& e) {
    throw ValidationError(e.what());
  }
}

}  // namespace

Scenario parse_scenario(const json& j) {
  require_object(j, "scenario",
                 {"mode", "params", "initial_state", "equilibrium", "integrator", "perturbation", "curve"});
  Scenario sc;
  if (!j.contains("mode") || !j.at("mode").is_string()) throw ValidationError("scenario.mode: required string");
  sc.mode = parse_mode(j.at("mode").get<std::string>());

  if (j.contains("params")) {
    const json& p = j.at("params");
    require_object(p, "params", {"m1", "m2", "k"});
    for (const char* key : {"m1", "m2", "k"}) {
      if (!p.contains(key)) throw ValidationError(std::string("params.") + key + ": required");
    }
    sc.params = make_params(get_number(p, "m1", "params"), get_number(p, "m2", "params"),
                            get_number(p, "k", "params"));
  }

  if (j.contains("initial_state")) {
    const json& s = j.at("initial_state");
    if (!s.is_array() || s.size() != 8) {
      throw ValidationError("initial_state: expected [x1, y1, x2, y2, px1, py1, px2, py2]");
    }
    State st{};
    for (std::size_t i = 0; i < 8; ++i) {
      if (!s[i].is_number()) throw ValidationError("initial_state: entries must be numbers");
      st[i] = s[i].get<double>();
      if (!std::isfinite(st[i])) throw ValidationError("initial_state: entries must be finite");
    }
    try {
      (void)PhaseState::from_array(st);
    } catch (const Error& e) {
      throw ValidationError(std::string("initial_state: ") + e.what());
    }
    sc.initial_state = st;
  }

  if (j.contains("equilibrium")) {
    const json& e = j.at("equilibrium");
    require_object(e, "equilibrium", {"family", "d1", "sign"});
    if (!e.contains("family") || !e.at("family").is_string()) {
      throw ValidationError("equilibrium.family: required string");
    }
    if (!e.contains("d1")) throw ValidationError("equilibrium.d1: required");
    EquilibriumSpec spec;
    spec.family = parse_family(e.at("family").get<std::string>());
    spec.d1 = get_number(e, "d1", "equilibrium");
    read_int(e, "sign", "equilibrium", spec.sign);
    if (!(spec.d1 > 0.0)) throw ValidationError("equilibrium.d1: must be positive");
    if (spec.sign != 1 && spec.sign != -1) throw ValidationError("equilibrium.sign: must be +1 or -1");
    sc.equilibrium = spec;
  }

  if (j.contains("integrator")) {
    const json& g = j.at("integrator");
    require_object(g, "integrator", {"rel_tol", "abs_tol", "max_step", "t_end", "sample_dt"});
    read_number(g, "rel_tol", "integrator", sc.integrator.rel_tol);
    read_number(g, "abs_tol", "integrator", sc.integrator.abs_tol);
    read_number(g, "max_step", "integrator", sc.integrator.max_step);
    read_number(g, "t_end", "integrator", sc.integrator.t_end);
    read_number(g, "sample_dt", "integrator", sc.integrator.sample_dt);
  }

  if (j.contains("perturbation")) {
    const json& p = j.at("perturbation");
    require_object(p, "perturbation",
                   {"scale", "n_trials", "horizon_periods", "seed", "stable_band", "escape_threshold", "threads"});
    PerturbSpec& ps = sc.perturbation;
    read_number(p, "scale", "perturbation", ps.scale);
    read_int(p, "n_trials", "perturbation", ps.n_trials);
    read_number(p, "horizon_periods", "perturbation", ps.horizon_periods);
    read_number(p, "stable_band", "perturbation", ps.stable_band);
    read_number(p, "escape_threshold", "perturbation", ps.escape_threshold);
    read_int(p, "threads", "perturbation", ps.threads);
    if (p.contains("seed")) {
      const json& s = p.at("seed");
      if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
        throw ValidationError("perturbation.seed: expected a non-negative integer");
      }
      ps.seed = s.get<std::uint64_t>();
    }
  }

  if (j.contains("curve")) {
    const json& c = j.at("curve");
    require_object(c, "curve", {"c_min", "c_max", "n_points"});
    for (const char* key : {"c_min", "c_max", "n_points"}) {
      if (!c.contains(key)) throw ValidationError(std::string("curve.") + key + ": required");
    }
    CurveSpec cs;
    cs.c_min = get_number(c, "c_min", "curve");
    cs.c_max = get_number(c, "c_max", "curve");
    read_int(c, "n_points", "curve", cs.n_points);
    sc.curve = cs;
  }

  // Mode-specific requirements.
  switch (sc.mode) {
    case Mode::Simulate:
      if (!sc.params) throw ValidationError("simulate: params required");
      if (sc.initial_state.has_value() == sc.equilibrium.has_value()) {
        throw ValidationError("simulate: exactly one of initial_state or equilibrium required");
      }
      if (!j.contains("integrator") || !j.at("integrator").contains("t_end")) {
        throw ValidationError("simulate: integrator.t_end required");
      }
      break;
    case Mode::Equilibrium:
    case Mode::Stability:
    case Mode::Perturb:
      if (!sc.params) throw ValidationError(std::string(to_string(sc.mode)) + ": params required");
      if (!sc.equilibrium) throw ValidationError(std::string(to_string(sc.mode)) + ": equilibrium required");
      break;
    case Mode::ThresholdCurve:
      if (!sc.curve) throw ValidationError("threshold_curve: curve required");
      break;
  }
  if (sc.curve && (!(sc.curve->c_min > 0.0) || !(sc.curve->c_max > sc.curve->c_min) || sc.curve->n_points < 2)) {
    throw ValidationError("curve: need 0 < c_min < c_max and n_points >= 2");
  }
  try {
    sc.integrator.validate();
  } catch (const Error& e) {
    throw ValidationError(std::string("integrator: ") + e.what());
  }
  const PerturbSpec& ps = sc.perturbation;
  if (!(ps.scale > 0.0) || ps.n_trials < 1 || !(ps.horizon_periods > 0.0) || !(ps.stable_band > 0.0) ||
      !(ps.escape_threshold > 0.0) || ps.threads < 0) {
    throw ValidationError("perturbation: scale, n_trials, horizon_periods and thresholds must be positive");
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scenario file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
  return parse_scenario(j);
}

// ---------------------------------------------------------------------------
// Output

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void dump_into(std::ostringstream& os, const json& j, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    os << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{';
      bool first = true;
      for (const auto& [key, val] : j.items()) {
        if (!first) os << ',';
        first = false;
        newline(depth + 1);
        os << json(key).dump() << (indent < 0 ? ":" : ": ");
        dump_into(os, val, indent, depth + 1);
      }
      newline(depth);
      os << '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << '[';
      bool first = true;
      for (const auto& val : j) {
        if (!first) os << ',';
        first = false;
        newline(depth + 1);
        dump_into(os, val, indent, depth + 1);
      }
      newline(depth);
      os << ']';
      return;
    }
    case json::value_t::number_float: {
      const double x = j.get<double>();
      if (std::isfinite(x)) {
        os << fmt17(x);
      } else {
        os << "null";
      }
      return;
    }
    default:
      os << j.dump();
  }
}

json state_json(const State& s) { return json::array({s[0], s[1], s[2], s[3], s[4], s[5], s[6], s[7]}); }

json momentum_json(const CoalgebraElement& mu) { return {{"e", mu.e}, {"h", mu.h}, {"p", mu.p}}; }

json matrix_json(const Mat2& m) { return json::array({{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}}); }

json params_json(const Params& p) { return {{"m1", p.m1()}, {"m2", p.m2()}, {"k", p.k()}}; }

}  // namespace

std::string dump_json(const json& j, int indent) {
  std::ostringstream os;
  dump_into(os, j, indent, 0);
  return os.str();
}

void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& rec) {
  os << "#schema=v1\n";
  os << "t,x1,y1,x2,y2,px1,py1,px2,py2,energy,Jh,Je,Jp,dist\n";
  for (const Sample& s : rec.samples) {
    const State y = s.z.to_array();
    os << fmt17(s.t);
    for (const double v : y) os << ',' << fmt17(v);
    os << ',' << fmt17(s.energy) << ',' << fmt17(s.momentum.h) << ',' << fmt17(s.momentum.e) << ','
       << fmt17(s.momentum.p) << ',' << fmt17(s.distance) << '\n';
  }
}

void write_threshold_csv(std::ostream& os, const std::vector<MassRatioCurve>& curve) {
  os << "#schema=v1\n";
  os << "c,u0,d1_threshold\n";
  for (const MassRatioCurve& r : curve) {
    os << fmt17(r.c) << ',' << fmt17(r.u0) << ',' << fmt17(r.d1_threshold) << '\n';
  }
}

CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  if (!std::getline(is, line) || line != "#schema=v1") {
    throw ValidationError("csv: missing '#schema=v1' header");
  }
  if (!std::getline(is, line)) throw ValidationError("csv: missing column header");
  {
    std::istringstream ss(line);
    std::string col;
    while (std::getline(ss, col, ',')) t.columns.push_back(col);
  }
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != t.columns.size()) throw ValidationError("csv: ragged row");
    t.rows.push_back(std::move(row));
  }
  return t;
}

json equilibrium_json(const RelativeEquilibrium& re) {
  const auto [w2a, w2b] = omega_squared_intrinsic(re.d1, re.d2, re.params);
  const auto [w2c, w2d] = omega_squared_trig(re.theta1, re.theta2, re.params);
  const PhaseState z = re.initial_state();
  const CoalgebraElement mu = momentum_map(z);
  const IntrinsicReport ic = intrinsic_checks(re);
  const StabilityReport st = classify_stability(re);
  json j = {
      {"schema", "v1"},
      {"family", to_string(re.family)},
      {"params", params_json(re.params)},
      {"d1", re.d1},
      {"d2", re.d2},
      {"distance", re.distance()},
      {"theta1", re.theta1},
      {"theta2", re.theta2},
      {"omega", re.omega},
      {"omega_squared", re.omega * re.omega},
      {"omega_squared_intrinsic", json::array({w2a, w2b})},
      {"omega_squared_trig", json::array({w2c, w2d})},
      {"xi", {{"E", re.xi.E}, {"H", re.xi.H}, {"P", re.xi.P}}},
      {"configuration", {{"q1", {re.config.q1().x(), re.config.q1().y()}}, {"q2", {re.config.q2().x(), re.config.q2().y()}}}},
      {"initial_state", state_json(z.to_array())},
      {"momentum", momentum_json(mu)},
      {"momentum_matrix", matrix_json(mu.matrix())},
      {"energy", hamiltonian(z, re.params)},
      {"intrinsic_checks",
       {{"max_perpendicular", ic.max_perpendicular},
        {"orientation_ok", ic.orientation_ok},
        {"max_speed_error", ic.max_speed_error},
        {"max_distance_drift", ic.max_distance_drift},
        {"max_com_error", ic.max_com_error},
        {"passed", ic.passed}}},
      {"verdict", to_string(st.verdict)},
  };
  if (re.family == Family::Elliptic) j["period"] = re.period();
  return j;
}

StabilityOutcome stability_json(const RelativeEquilibrium& re) {
  const StabilityReport st = classify_stability(re);
  const Mat2 ar_def = rig_block_definitional(re.family, re.theta1, re.theta2, re.omega, re.params);
  const InternalOracle oracle = internal_block_numeric(re.family, re.theta1, re.theta2, re.omega, re.params);
  const VIntMembership memb = v_int_membership(re.family, re.theta1, re.theta2, re.omega, re.params);

  const double ar_err = (st.ar - ar_def).cwiseAbs().maxCoeff();
  const bool ar_ok = ar_err <= 1e-9 * std::max(1.0, st.ar.cwiseAbs().maxCoeff());
  const double gap = std::abs(st.internal_value - oracle.value);
  const double scale = std::max(std::abs(st.internal_value), std::abs(oracle.value));
  const bool internal_ok =
      gap <= 1e-5 * scale + 1e-8 * (std::abs(oracle.hessian) + std::abs(oracle.correction));

  const double c = re.params.ratio();
  const double limit = intrinsic_stability_limit(re.d1);
  json signature = json::array();
  for (const int s : st.signature) signature.push_back(s > 0 ? "+" : (s < 0 ? "-" : "0"));

  StabilityOutcome out;
  out.mismatch = !ar_ok || !internal_ok;
  out.report = {
      {"schema", "v1"},
      {"family", to_string(re.family)},
      {"params", params_json(re.params)},
      {"d1", re.d1},
      {"d2", re.d2},
      {"u", std::cos(re.theta1)},
      {"v", std::cos(re.theta2)},
      {"theta1", re.theta1},
      {"theta2", re.theta2},
      {"omega", re.omega},
      {"ar", {{"closed_form", matrix_json(st.ar)}, {"oracle", matrix_json(ar_def)}, {"max_abs_error", ar_err},
              {"definite", st.ar_definite}, {"agrees", ar_ok}}},
      {"internal",
       {{"closed_form", st.internal_value},
        {"oracle", oracle.value},
        {"oracle_hessian", oracle.hessian},
        {"oracle_correction", oracle.correction},
        {"relative_error", scale > 0.0 ? gap / scale : 0.0},
        {"agrees", internal_ok}}},
      {"v_int", {{"orthogonality", memb.orthogonality}, {"membership", memb.membership}}},
      {"factor_F", stability_factor(std::cos(re.theta1), std::cos(re.theta2))},
      {"intrinsic_bound", {{"limit", limit}, {"mass_ratio", c}, {"stable", c < limit}}},
      {"signature", signature},
      {"verdict", to_string(st.verdict)},
      {"oracle_mismatch", out.mismatch},
  };
  return out;
}

json conservation_json(const TrajectoryRecord& rec) {
  const ConservationReport cr = conservation_report(rec);
  return {
      {"schema", "v1"},
      {"status", to_string(rec.status)},
      {"message", rec.message},
      {"t_final", rec.t_final},
      {"samples", rec.samples.size()},
      {"accepted_steps", rec.accepted_steps},
      {"rejected_steps", rec.rejected_steps},
      {"energy_drift", cr.energy_drift},
      {"momentum_drift", {{"e", cr.momentum_drift_e}, {"h", cr.momentum_drift_h}, {"p", cr.momentum_drift_p}}},
  };
}

json perturbation_json(const PerturbationExperiment& exp, const PerturbationReport& rep) {
  json trials = json::array();
  for (const TrialResult& t : rep.trials) {
    trials.push_back({
        {"index", t.index},
        {"max_distance_deviation", t.max_distance_deviation},
        {"max_chart_displacement", t.max_chart_displacement},
        {"escaped", t.escaped},
        {"first_escape_time", t.first_escape_time},
        {"redraws", t.redraws},
        {"status", to_string(t.status)},
        {"message", t.message},
    });
  }
  return {
      {"schema", "v1"},
      {"base", {{"family", to_string(exp.base.family)},
                {"params", params_json(exp.base.params)},
                {"d1", exp.base.d1},
                {"d2", exp.base.d2},
                {"distance", exp.base.distance()},
                {"omega", exp.base.omega}}},
      {"protocol", {{"scale", exp.perturbation_scale},
                    {"n_trials", exp.n_trials},
                    {"horizon", exp.horizon},
                    {"seed", exp.seed},
                    {"stable_band", exp.stable_band},
                    {"escape_threshold", exp.escape_threshold},
                    {"rel_tol", exp.integrator.rel_tol},
                    {"abs_tol", exp.integrator.abs_tol}}},
      {"summary", {{"n_bounded", rep.n_bounded},
                   {"n_escaped", rep.n_escaped},
                   {"n_failed", rep.n_failed},
                   {"total_redraws", rep.total_redraws},
                   {"all_bounded", rep.n_bounded == exp.n_trials},
                   {"escape_detected", rep.n_escaped > 0},
                   {"max_deviation", rep.max_deviation},
                   {"median_deviation", rep.median_deviation},
                   {"min_deviation", rep.min_deviation}}},
      {"trials", trials},
  };
}

// ---------------------------------------------------------------------------
// Commands

namespace {

struct CommonFlags {
  std::string scenario;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> rel_tol;
  std::optional<double> abs_tol;
};

void apply_overrides(Scenario& sc, const CommonFlags& f) {
  if (f.rel_tol) sc.integrator.rel_tol = *f.rel_tol;
  if (f.abs_tol) sc.integrator.abs_tol = *f.abs_tol;
  if (f.seed) sc.perturbation.seed = *f.seed;
  try {
    sc.integrator.validate();
  } catch (const Error& e) {
    throw ValidationError(std::string("integrator: ") + e.what());
  }
}

Scenario scenario_for(Mode mode, const CommonFlags& f) {
  Scenario sc = load_scenario(f.scenario);
  if (sc.mode != mode) {
    throw ValidationError(std::string("scenario mode '") + to_string(sc.mode) + "' does not match command '" +
                          to_string(mode) + "'");
  }
  return sc;
}

RelativeEquilibrium make_equilibrium(const Scenario& sc) {
  try {
    return build_relative_equilibrium(sc.equilibrium->family, sc.equilibrium->d1, *sc.params, sc.equilibrium->sign);
  } catch (const Error& e) {
    throw ValidationError(e.what());
  }
}

fs::path prepare_out(const std::string& dir) {
  fs::path p(dir);
  fs::create_directories(p);
  return p;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path);
  os << text;
  if (!os) throw std::runtime_error("cannot write '" + path.string() + "'");
}

void emit(const std::string& out_dir, const std::string& file, const std::string& text, std::ostream& out) {
  if (out_dir.empty()) {
    out << text;
  } else {
    write_text(prepare_out(out_dir) / file, text);
  }
}

int cmd_simulate(const Scenario& sc, const CommonFlags& f, std::ostream& out) {
  if (f.out.empty()) throw ValidationError("simulate: --out is required");
  const Params& prm = *sc.params;
  const PhaseState z0 =
      sc.initial_state ? PhaseState::from_array(*sc.initial_state) : make_equilibrium(sc).initial_state();
  const TrajectoryRecord rec = integrate(z0, prm, sc.integrator);

  const fs::path dir = prepare_out(f.out);
  std::ostringstream csv;
  write_trajectory_csv(csv, rec);
  write_text(dir / "trajectory.csv", csv.str());
  const json report = conservation_json(rec);
  write_text(dir / "conservation.json", dump_json(report) + "\n");
  out << dump_json(report) << "\n";

  switch (rec.status) {
    case IntegrationStatus::Completed:
    case IntegrationStatus::Stopped:
      return kOk;
    case IntegrationStatus::Collision:
      return kCollision;
    case IntegrationStatus::StepSizeUnderflow:
      return kIntegratorFailure;
  }
  return kIntegratorFailure;
}

int cmd_equilibrium(const Scenario& sc, const CommonFlags& f, std::ostream& out) {
  const RelativeEquilibrium re = make_equilibrium(sc);
  emit(f.out, "equilibrium.json", dump_json(equilibrium_json(re)) + "\n", out);
  return kOk;
}

int cmd_stability(const Scenario& sc, const CommonFlags& f, std::ostream& out) {
  const RelativeEquilibrium re = make_equilibrium(sc);
  const StabilityOutcome so = stability_json(re);
  emit(f.out, "stability.json", dump_json(so.report) + "\n", out);
  return so.mismatch ? kOracleMismatch : kOk;
}

int cmd_threshold(const Scenario& sc, const CommonFlags& f, std::ostream& out) {
  const auto curve = threshold_curve(sc.curve->c_min, sc.curve->c_max, sc.curve->n_points);
  std::ostringstream csv;
  write_threshold_csv(csv, curve);
  emit(f.out, "threshold.csv", csv.str(), out);
  return kOk;
}

int cmd_perturb(const Scenario& sc, const CommonFlags& f, std::ostream& out) {
  const RelativeEquilibrium re = make_equilibrium(sc);
  PerturbationExperiment exp{re};
  exp.perturbation_scale = sc.perturbation.scale;
  exp.n_trials = sc.perturbation.n_trials;
  exp.horizon = sc.perturbation.horizon_periods * re.period();
  exp.seed = sc.perturbation.seed;
  exp.stable_band = sc.perturbation.stable_band;
  exp.escape_threshold = sc.perturbation.escape_threshold;
  exp.integrator = sc.integrator;
  exp.threads = sc.perturbation.threads;
  const PerturbationReport rep = perturb_and_measure(exp);
  emit(f.out, "perturb.json", dump_json(perturbation_json(exp, rep)) + "\n", out);
  return kOk;
}

void add_common(CLI::App* app, CommonFlags& f, bool seed) {
  app->add_option("--scenario", f.scenario, "JSON scenario file");
  app->add_option("--out", f.out, "Output directory");
  if (seed) app->add_option("--seed", f.seed, "PRNG seed (overrides the scenario)");
  app->add_option("--rel-tol", f.rel_tol, "Integrator relative tolerance");
  app->add_option("--abs-tol", f.abs_tol, "Integrator absolute tolerance");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-body problem on the hyperbolic plane", "h2body"};
  app.require_subcommand(1);

  CommonFlags flags;

  auto* sim = app.add_subcommand("simulate", "Integrate a scenario and write trajectory.csv and conservation.json");
  add_common(sim, flags, false);

  std::string family;
  std::vector<double> eq_args;
  auto* eq = app.add_subcommand("equilibrium", "Relative equilibrium data as JSON: <family> <d1> <m1> <m2> <k>");
  eq->add_option("family", family, "elliptic | hyperbolic");
  eq->add_option("values", eq_args, "d1 m1 m2 k")->expected(0, 4);
  add_common(eq, flags, false);

  std::vector<double> st_args;
  auto* st = app.add_subcommand("stability", "Stability report for the elliptic equilibrium: <d1> <m1> <m2> <k>");
  st->add_option("values", st_args, "d1 m1 m2 k")->expected(0, 4);
  add_common(st, flags, false);

  std::vector<double> th_args;
  auto* th = app.add_subcommand("threshold-curve", "Stability threshold CSV: <c_min> <c_max> <n_points>");
  th->add_option("values", th_args, "c_min c_max n_points")->expected(0, 3);
  add_common(th, flags, false);

  auto* pt = app.add_subcommand("perturb", "Seeded perturbation experiment around an equilibrium");
  add_common(pt, flags, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  try {
    const bool has_scenario = !flags.scenario.empty();
    const auto positional = [&](const std::vector<double>& v, std::size_t n, const char* usage) {
      if (has_scenario && !v.empty()) throw ValidationError("give either --scenario or positional values, not both");
      if (!has_scenario && v.size() != n) throw ValidationError(std::string("usage: ") + usage);
    };

    Scenario sc;
    int (*command)(const Scenario&, const CommonFlags&, std::ostream&) = nullptr;
    if (sim->parsed()) {
      if (!has_scenario) throw ValidationError("simulate: --scenario is required");
      sc = scenario_for(Mode::Simulate, flags);
      command = cmd_simulate;
    } else if (eq->parsed()) {
      if (has_scenario && !family.empty()) throw ValidationError("give either --scenario or positional values");
      positional(eq_args, 4, "equilibrium <family> <d1> <m1> <m2> <k>");
      if (has_scenario) {
        sc = scenario_for(Mode::Equilibrium, flags);
      } else {
        if (family.empty()) throw ValidationError("usage: equilibrium <family> <d1> <m1> <m2> <k>");
        sc.mode = Mode::Equilibrium;
        sc.params = make_params(eq_args[1], eq_args[2], eq_args[3]);
        sc.equilibrium = EquilibriumSpec{parse_family(family), eq_args[0], 1};
        if (!(eq_args[0] > 0.0)) throw ValidationError("d1 must be positive");
      }
      command = cmd_equilibrium;
    } else if (st->parsed()) {
      positional(st_args, 4, "stability <d1> <m1> <m2> <k>");
      if (has_scenario) {
        sc = scenario_for(Mode::Stability, flags);
      } else {
        sc.mode = Mode::Stability;
        sc.params = make_params(st_args[1], st_args[2], st_args[3]);
        sc.equilibrium = EquilibriumSpec{Family::Elliptic, st_args[0], 1};
        if (!(st_args[0] > 0.0)) throw ValidationError("d1 must be positive");
      }
      command = cmd_stability;
    } else if (th->parsed()) {
      positional(th_args, 3, "threshold-curve <c_min> <c_max> <n_points>");
      if (has_scenario) {
        sc = scenario_for(Mode::ThresholdCurve, flags);
      } else {
        sc.mode = Mode::ThresholdCurve;
        if (th_args[2] != std::floor(th_args[2])) throw ValidationError("n_points must be an integer");
        sc.curve = CurveSpec{th_args[0], th_args[1], static_cast<int>(th_args[2])};
        if (!(sc.curve->c_min > 0.0) || !(sc.curve->c_max > sc.curve->c_min) || sc.curve->n_points < 2) {
          throw ValidationError("need 0 < c_min < c_max and n_points >= 2");
        }
      }
      command = cmd_threshold;
    } else if (pt->parsed()) {
      if (!has_scenario) throw ValidationError("perturb: --scenario is required");
      sc = scenario_for(Mode::Perturb, flags);
      command = cmd_perturb;
    }
    apply_overrides(sc, flags);
    return command(sc, flags, out);
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::Collision ? kCollision : kIntegratorFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kIntegratorFailure;
  }
}

}  // namespace h2body::cli
