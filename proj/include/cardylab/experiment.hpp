#pragma once

// Experiment harness: configuration, named experiments, and serialization.
//
// Experiments
//   verify-cardy      equilateral lattice at criticality; PASS iff every
//                     estimate matches the predicted limit X = x within
//                     3 CI half-widths plus a finite-mesh allowance
//   coupling          stretched-vs-equilateral (or SquareNE-vs-rotated) pair
//                     on shared randomness; PASS iff indicators agree n of n
//   violation         stretched or SquareNE family against its conformal
//                     prediction, with an equilateral control; CONFIRMS iff
//                     some estimate rejects the prediction while the control
//                     passes
//   sweep             grid of estimates over (p, delta)
//   predict           pure-math tabulation (x, w, X, residual); no sampling
//   validate-lattice  graph requirement checks on an index window
//
// Scale convention: for SquareNE experiments the configured delta is the
// mesh of the coupled triangular lattice; the SquareNE lattice itself gets
// mesh delta/sqrt(2), exactly the pairing used by the rotation argument.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cardylab/cardy.hpp"
#include "cardylab/domain.hpp"
#include "cardylab/errors.hpp"
#include "cardylab/lattice.hpp"
#include "cardylab/percolation.hpp"
#include "cardylab/rng.hpp"

namespace cardylab {

inline constexpr const char* kVersion = "1.0.0";

enum class ExperimentKind {
  VerifyCardy,
  Coupling,
  Violation,
  Sweep,
  Predict,
  ValidateLattice,
};

inline const char* experiment_name(ExperimentKind e) {
  switch (e) {
    case ExperimentKind::VerifyCardy: return "verify-cardy";
    case ExperimentKind::Coupling: return "coupling";
    case ExperimentKind::Violation: return "violation";
    case ExperimentKind::Sweep: return "sweep";
    case ExperimentKind::Predict: return "predict";
    case ExperimentKind::ValidateLattice: return "validate-lattice";
  }
  return "?";
}

inline std::optional<ExperimentKind> experiment_from_name(std::string_view name) {
  for (const ExperimentKind e :
       {ExperimentKind::VerifyCardy, ExperimentKind::Coupling, ExperimentKind::Violation,
        ExperimentKind::Sweep, ExperimentKind::Predict, ExperimentKind::ValidateLattice}) {
    if (name == experiment_name(e)) return e;
  }
  return std::nullopt;
}

enum class OutFormat { csv, json };

enum class Verdict { none, pass, fail, confirms_violation, no_violation };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::none: return "NONE";
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    case Verdict::confirms_violation: return "CONFIRMS-VIOLATION";
    case Verdict::no_violation: return "NO-VIOLATION";
  }
  return "?";
}

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::VerifyCardy;
  Family family = Family::TriangularK;
  double k = 1.0;
  double delta = 0.01;
  std::vector<double> x_params;         // empty -> experiment default
  std::optional<double> p;              // empty -> p_c where known
  std::uint64_t n_samples = 100000;
  std::uint64_t seed = 42;
  std::string out;                      // empty -> stdout
  OutFormat format = OutFormat::csv;
  int threads = 1;                      // <= 0 -> hardware concurrency
  std::vector<double> p_values;         // sweep grid
  std::vector<double> delta_values;     // sweep grid
  std::vector<double> kappa_values;     // predict grid
  int window_radius = 16;               // validate-lattice
  std::vector<Vec2> period_vectors;     // validate-lattice; empty -> (1,0),(0,1)
};

// Families whose critical site probability is exactly 1/2 (the full
// triangulations under any stretch, and SquareNE which rotates onto one).
inline bool has_known_critical_p(Family f) {
  return f == Family::TriangularK || f == Family::SquareNE;
}

// Base angle of the family's standard triangle, when a conformal prediction
// applies: the stretched triangulations and SquareNE (pi/4 via rotation).
// The sparse sub-lattices reuse the equilateral angle of their embedding;
// their runs are exploratory.
inline std::optional<double> prediction_angle(Family f, double k) {
  switch (f) {
    case Family::TriangularK: return apex_angle(k);
    case Family::SquareNE: return std::numbers::pi / 4.0;
    case Family::TriNE:
    case Family::TriNW:
    case Family::TriH: return std::numbers::pi / 3.0;
    case Family::Square: return std::nullopt;
  }
  return std::nullopt;
}

// Tolerance term acknowledging the finite mesh: 0.5 * delta^(1/3).
inline double finite_mesh_allowance(double delta) { return 0.5 * std::cbrt(delta); }

struct ResultRow {
  std::string family;
  double k = 1.0;
  double delta = 0.0;
  double p = 0.0;
  double x_requested = 0.0;
  double x_snapped = 0.0;
  std::uint64_t n = 0;
  std::uint64_t successes = 0;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double cardy_X = 0.0;    // NaN when no prediction applies
  double deviation = 0.0;  // p_hat - cardy_X
  double z_score = 0.0;    // deviation / ((ci_high - ci_low) / 3.92)
};

struct PredictRow {
  double kappa = 0.0;
  double x = 0.0;
  double w = 0.0;
  double X = 0.0;
  double residual = 0.0;
};

struct ExperimentResult {
  ExperimentConfig config;  // effective config (defaults resolved)
  std::vector<ResultRow> rows;
  std::vector<PredictRow> predict_rows;
  std::optional<GraphRequirementsReport> lattice_report;
  Verdict verdict = Verdict::none;
  std::vector<std::string> notes;  // deterministic; echoed as '#' comments

  int exit_code() const {
    switch (verdict) {
      case Verdict::none:
      case Verdict::pass:
      case Verdict::confirms_violation: return 0;
      case Verdict::fail:
      case Verdict::no_violation: return 4;
    }
    return 0;
  }
};

// -------------------------------------------------------------------------
// Formatting helpers.

inline std::string fmt_g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string fmt_u64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%llu", static_cast<unsigned long long>(v));
  return buf;
}

inline std::string fmt_list(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ",";
    s += fmt_g12(xs[i]);
  }
  return s;
}

// -------------------------------------------------------------------------
// Config validation and JSON parsing.

namespace detail {

inline void require_x_in_range(const std::vector<double>& xs) {
  for (const double x : xs) {
    if (!(x > 0.0 && x < 1.0)) {
      throw config_error("config: every x must lie strictly in (0, 1), got " + fmt_g12(x));
    }
  }
}

}  // namespace detail

// Resolves defaults and rejects inconsistent settings. Returns the effective
// config echoed into outputs.
inline ExperimentConfig normalize(ExperimentConfig cfg) {
  if (!(cfg.delta > 0.0)) throw config_error("config: delta must be positive");
  if (cfg.family == Family::TriangularK && !(cfg.k > 0.5)) {
    throw config_error("config: TriangularK requires k > 1/2");
  }
  if (cfg.family != Family::TriangularK) cfg.k = 1.0;
  if (cfg.n_samples == 0) throw config_error("config: n must be positive");
  if (cfg.p && !(*cfg.p >= 0.0 && *cfg.p <= 1.0)) {
    throw config_error("config: p must lie in [0, 1]");
  }
  detail::require_x_in_range(cfg.x_params);
  for (const double p : cfg.p_values) {
    if (!(p >= 0.0 && p <= 1.0)) throw config_error("config: sweep p values must lie in [0, 1]");
  }
  for (const double d : cfg.delta_values) {
    if (!(d > 0.0)) throw config_error("config: sweep delta values must be positive");
  }
  for (const double kp : cfg.kappa_values) {
    if (!(kp > 0.0 && kp <= std::numbers::pi / 2.0)) {
      throw config_error("config: kappa values must lie in (0, pi/2]");
    }
  }
  if (cfg.window_radius < 2) throw config_error("config: window radius must be >= 2");

  const bool simulates = cfg.experiment == ExperimentKind::VerifyCardy ||
                         cfg.experiment == ExperimentKind::Coupling ||
                         cfg.experiment == ExperimentKind::Violation ||
                         cfg.experiment == ExperimentKind::Sweep;
  if (simulates) {
    if (!cfg.p && !has_known_critical_p(cfg.family) && cfg.p_values.empty()) {
      throw config_error(std::string("config: family ") + family_name(cfg.family) +
                         " has no known critical p; supply p explicitly");
    }
    if (!cfg.p && has_known_critical_p(cfg.family)) cfg.p = 0.5;
  }

  switch (cfg.experiment) {
    case ExperimentKind::VerifyCardy:
      if (cfg.family != Family::TriangularK || cfg.k != 1.0) {
        throw config_error("config: verify-cardy runs on TriangularK with k = 1");
      }
      if (*cfg.p != 0.5) {
        throw config_error("config: verify-cardy estimates at criticality, p = 1/2");
      }
      if (cfg.x_params.empty()) cfg.x_params = {0.25, 0.5, 0.75};
      break;
    case ExperimentKind::Coupling:
    case ExperimentKind::Violation:
      if (!(cfg.family == Family::SquareNE ||
            (cfg.family == Family::TriangularK && cfg.k != 1.0))) {
        throw config_error(std::string("config: ") + experiment_name(cfg.experiment) +
                           " requires TriangularK with k != 1, or SquareNE");
      }
      if (cfg.x_params.empty()) {
        cfg.x_params = cfg.experiment == ExperimentKind::Coupling
                           ? std::vector<double>{0.25}
                           : std::vector<double>{0.25, 0.5, 0.75};
      }
      break;
    case ExperimentKind::Sweep:
      if (cfg.family == Family::Square) {
        throw config_error("config: the Square family has no standard triangle to sweep");
      }
      if (cfg.x_params.empty()) cfg.x_params = {0.5};
      if (cfg.p_values.empty()) cfg.p_values = {*cfg.p};
      if (cfg.delta_values.empty()) cfg.delta_values = {cfg.delta};
      break;
    case ExperimentKind::Predict:
      if (cfg.kappa_values.empty()) {
        const auto angle = prediction_angle(cfg.family, cfg.k);
        if (!angle) {
          throw config_error("config: predict needs kappa values or a family with a prediction");
        }
        cfg.kappa_values = {*angle};
      }
      if (cfg.x_params.empty()) {
        cfg.x_params.reserve(99);
        for (int i = 1; i <= 99; ++i) cfg.x_params.push_back(i / 100.0);
      }
      break;
    case ExperimentKind::ValidateLattice:
      if (cfg.period_vectors.empty()) cfg.period_vectors = {{1.0, 0.0}, {0.0, 1.0}};
      break;
  }
  return cfg;
}

// Strict JSON config: unknown keys are rejected.
inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  static const char* known[] = {"experiment", "family", "k", "delta", "x_params",
                                "p", "n_samples", "seed", "out", "format",
                                "threads", "p_values", "delta_values",
                                "kappa_values", "window_radius", "period_vectors"};
  if (!j.is_object()) throw config_error("config: top level must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* name : known) {
      if (key == name) { ok = true; break; }
    }
    if (!ok) throw config_error("config: unknown key \"" + key + "\"");
  }

  ExperimentConfig cfg;
  try {
    if (j.contains("experiment")) {
      const auto name = j.at("experiment").get<std::string>();
      const auto kind = experiment_from_name(name);
      if (!kind) throw config_error("config: unknown experiment \"" + name + "\"");
      cfg.experiment = *kind;
    }
    if (j.contains("family")) {
      const auto name = j.at("family").get<std::string>();
      const auto fam = family_from_name(name);
      if (!fam) throw config_error("config: unknown family \"" + name + "\"");
      cfg.family = *fam;
    }
    if (j.contains("k")) cfg.k = j.at("k").get<double>();
    if (j.contains("delta")) cfg.delta = j.at("delta").get<double>();
    if (j.contains("x_params")) cfg.x_params = j.at("x_params").get<std::vector<double>>();
    if (j.contains("p")) cfg.p = j.at("p").get<double>();
    if (j.contains("n_samples")) cfg.n_samples = j.at("n_samples").get<std::uint64_t>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
    if (j.contains("format")) {
      const auto f = j.at("format").get<std::string>();
      if (f == "csv") cfg.format = OutFormat::csv;
      else if (f == "json") cfg.format = OutFormat::json;
      else throw config_error("config: format must be csv or json");
    }
    if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
    if (j.contains("p_values")) cfg.p_values = j.at("p_values").get<std::vector<double>>();
    if (j.contains("delta_values")) {
      cfg.delta_values = j.at("delta_values").get<std::vector<double>>();
    }
    if (j.contains("kappa_values")) {
      cfg.kappa_values = j.at("kappa_values").get<std::vector<double>>();
    }
    if (j.contains("window_radius")) cfg.window_radius = j.at("window_radius").get<int>();
    if (j.contains("period_vectors")) {
      for (const auto& v : j.at("period_vectors")) {
        if (!v.is_array() || v.size() != 2) {
          throw config_error("config: period_vectors entries must be [vx, vy] pairs");
        }
        cfg.period_vectors.push_back({v[0].get<double>(), v[1].get<double>()});
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("config: ") + e.what());
  }
  return cfg;
}

// -------------------------------------------------------------------------
// Runners.

namespace detail {

// Lattice spec for simulation experiments. SquareNE's configured delta is
// the coupled triangular mesh; its own mesh is delta/sqrt(2).
inline LatticeSpec experiment_spec(Family family, double k, double delta) {
  if (family == Family::SquareNE) {
    return make_spec(Family::SquareNE, delta / std::numbers::sqrt2);
  }
  return make_spec(family, delta, family == Family::TriangularK ? k : 1.0);
}

inline ResultRow make_row(const LatticeSpec& spec, double delta_reported,
                          const MarkedTriangle& dom, const SamplingPlan& plan,
                          const CrossingEstimate& est, double cardy_X) {
  ResultRow row;
  row.family = family_name(spec.family.tag);
  row.k = spec.family.k;
  row.delta = delta_reported;
  row.p = plan.p;
  row.x_requested = dom.x_param_requested;
  row.x_snapped = dom.x_param;
  row.n = est.n;
  row.successes = est.successes;
  row.p_hat = est.p_hat;
  row.ci_low = est.ci_low;
  row.ci_high = est.ci_high;
  row.cardy_X = cardy_X;
  row.deviation = est.p_hat - cardy_X;
  row.z_score = row.deviation / ((est.ci_high - est.ci_low) / 3.92);
  return row;
}

inline double half_width(const CrossingEstimate& est) {
  return 0.5 * (est.ci_high - est.ci_low);
}

}  // namespace detail

inline ExperimentResult run_verify_cardy(const ExperimentConfig& raw) {
  const ExperimentConfig cfg = normalize(raw);
  if (cfg.experiment != ExperimentKind::VerifyCardy) {
    throw config_error("run_verify_cardy: wrong experiment kind");
  }
  ExperimentResult result;
  result.config = cfg;
  const LatticeSpec spec = make_spec(Family::TriangularK, cfg.delta, 1.0);
  const SamplingPlan base_plan{*cfg.p, cfg.seed, cfg.n_samples};
  const double allowance = finite_mesh_allowance(cfg.delta);
  bool all_pass = true;
  for (const double x : cfg.x_params) {
    const MarkedTriangle dom = standard_triangle(spec, x);
    const SiteClassification cls = classify(spec, dom);
    const CrossingEstimate est = estimate(cls, base_plan, cfg.threads);
    const double X = cardy_prediction(dom.x_param, std::numbers::pi / 3.0).X;
    result.rows.push_back(detail::make_row(spec, cfg.delta, dom, base_plan, est, X));
    const double tolerance = 3.0 * detail::half_width(est) + allowance;
    const bool pass = std::abs(est.p_hat - X) <= tolerance;
    all_pass = all_pass && pass;
    result.notes.push_back("verify x=" + fmt_g12(dom.x_param) + " |p_hat-X|=" +
                           fmt_g12(std::abs(est.p_hat - X)) + " tolerance=" +
                           fmt_g12(tolerance) + (pass ? " ok" : " exceeded"));
  }
  result.verdict = all_pass ? Verdict::pass : Verdict::fail;
  return result;
}

inline ExperimentResult run_coupling(const ExperimentConfig& raw) {
  const ExperimentConfig cfg = normalize(raw);
  if (cfg.experiment != ExperimentKind::Coupling) {
    throw config_error("run_coupling: wrong experiment kind");
  }
  ExperimentResult result;
  result.config = cfg;
  const SamplingPlan plan{*cfg.p, cfg.seed, cfg.n_samples};
  const bool sne = cfg.family == Family::SquareNE;
  const LatticeSpec spec_a = detail::experiment_spec(cfg.family, cfg.k, cfg.delta);
  const LatticeSpec spec_b =
      make_spec(Family::TriangularK, cfg.delta, sne ? 1.0 / std::numbers::sqrt2 : 1.0);
  if (sne) {
    result.notes.push_back("SquareNE mesh is delta/sqrt(2); partner lattice is the "
                           "rotated k=1/sqrt(2) triangulation");
  }

  bool all_exact = true;
  for (const double x : cfg.x_params) {
    const MarkedTriangle dom_b = standard_triangle(spec_b, x);
    const SiteClassification cls_b = classify(spec_b, dom_b);
    SiteClassification cls_a = [&] {
      const MarkedTriangle dom_a = standard_triangle(spec_a, x);
      SiteClassification native = classify(spec_a, dom_a);
      if (!sne) return native;
      return reindex_sites(native, sne_to_tri_index, spec_b, dom_b);
    }();
    const CoupledResult coupled = coupled_estimate(cls_a, cls_b, plan, cfg.threads);

    const double kappa_a = *prediction_angle(cfg.family, cfg.k);
    const double kappa_b = sne ? std::numbers::pi / 4.0 : std::numbers::pi / 3.0;
    const MarkedTriangle& dom_for_a = cls_a.domain;
    result.rows.push_back(detail::make_row(spec_a, cfg.delta, dom_for_a, plan, coupled.a,
                                           cardy_prediction(dom_for_a.x_param, kappa_a).X));
    result.rows.push_back(detail::make_row(spec_b, cfg.delta, dom_b, plan, coupled.b,
                                           cardy_prediction(dom_b.x_param, kappa_b).X));

    const bool exact = coupled.agreement == plan.n_samples;
    all_exact = all_exact && exact;
    result.notes.push_back("coupling x=" + fmt_g12(dom_b.x_param) + " agreement " +
                           fmt_u64(coupled.agreement) + "/" + fmt_u64(plan.n_samples));
  }
  result.verdict = all_exact ? Verdict::pass : Verdict::fail;
  return result;
}

inline ExperimentResult run_violation(const ExperimentConfig& raw) {
  const ExperimentConfig cfg = normalize(raw);
  if (cfg.experiment != ExperimentKind::Violation) {
    throw config_error("run_violation: wrong experiment kind");
  }
  ExperimentResult result;
  result.config = cfg;
  const SamplingPlan plan{*cfg.p, cfg.seed, cfg.n_samples};
  const LatticeSpec spec_v = detail::experiment_spec(cfg.family, cfg.k, cfg.delta);
  const LatticeSpec spec_c = make_spec(Family::TriangularK, cfg.delta, 1.0);
  const double kappa = *prediction_angle(cfg.family, cfg.k);
  const double allowance = finite_mesh_allowance(cfg.delta);
  if (cfg.family == Family::SquareNE) {
    result.notes.push_back("SquareNE mesh is delta/sqrt(2) (rotation pairing)");
  }

  bool violated = false;
  bool control_ok = true;
  for (const double x : cfg.x_params) {
    const MarkedTriangle dom_v = standard_triangle(spec_v, x);
    const SiteClassification cls_v = classify(spec_v, dom_v);
    const CrossingEstimate est_v = estimate(cls_v, plan, cfg.threads);
    const double X_v = cardy_prediction(dom_v.x_param, kappa).X;
    result.rows.push_back(detail::make_row(spec_v, cfg.delta, dom_v, plan, est_v, X_v));

    const MarkedTriangle dom_c = standard_triangle(spec_c, x);
    const SiteClassification cls_c = classify(spec_c, dom_c);
    const CrossingEstimate est_c = estimate(cls_c, plan, cfg.threads);
    const double X_c = cardy_prediction(dom_c.x_param, std::numbers::pi / 3.0).X;
    result.rows.push_back(detail::make_row(spec_c, cfg.delta, dom_c, plan, est_c, X_c));

    const double dev_v = std::abs(est_v.p_hat - X_v);
    const bool reject = dev_v > 3.0 * detail::half_width(est_v);
    violated = violated || reject;
    const double dev_c = std::abs(est_c.p_hat - X_c);
    const bool c_ok = dev_c <= 3.0 * detail::half_width(est_c) + allowance;
    control_ok = control_ok && c_ok;
    result.notes.push_back(
        "violation x=" + fmt_g12(dom_v.x_param) + " |p_hat-X|=" + fmt_g12(dev_v) +
        " threshold=" + fmt_g12(3.0 * detail::half_width(est_v)) +
        (reject ? " rejected" : " not rejected") + "; control " + (c_ok ? "ok" : "failed"));
  }
  result.verdict =
      violated && control_ok ? Verdict::confirms_violation : Verdict::no_violation;
  return result;
}

inline ExperimentResult run_sweep(const ExperimentConfig& raw) {
  const ExperimentConfig cfg = normalize(raw);
  if (cfg.experiment != ExperimentKind::Sweep) {
    throw config_error("run_sweep: wrong experiment kind");
  }
  ExperimentResult result;
  result.config = cfg;
  result.notes.push_back("off-critical rows drift to 0 or 1 as delta shrinks; "
                         "stabilization of critical rows is a heuristic check only");
  const auto angle = prediction_angle(cfg.family, cfg.k);
  for (const double p : cfg.p_values) {
    for (const double delta : cfg.delta_values) {
      const LatticeSpec spec = detail::experiment_spec(cfg.family, cfg.k, delta);
      const SamplingPlan plan{p, cfg.seed, cfg.n_samples};
      for (const double x : cfg.x_params) {
        const MarkedTriangle dom = standard_triangle(spec, x);
        const SiteClassification cls = classify(spec, dom);
        const CrossingEstimate est = estimate(cls, plan, cfg.threads);
        const double X = angle ? cardy_prediction(dom.x_param, *angle).X
                               : std::numeric_limits<double>::quiet_NaN();
        result.rows.push_back(detail::make_row(spec, delta, dom, plan, est, X));
      }
    }
  }
  return result;
}

inline ExperimentResult run_predict(const ExperimentConfig& raw) {
  const ExperimentConfig cfg = normalize(raw);
  if (cfg.experiment != ExperimentKind::Predict) {
    throw config_error("run_predict: wrong experiment kind");
  }
  ExperimentResult result;
  result.config = cfg;
  for (const double kappa : cfg.kappa_values) {
    for (const double x : cfg.x_params) {
      const CardyPrediction pred = cardy_prediction(x, kappa);
      result.predict_rows.push_back(
          {kappa, x, pred.w, pred.X, cardy_residual(pred.w, kappa)});
    }
  }
  return result;
}

inline ExperimentResult run_validate_lattice(const ExperimentConfig& raw) {
  const ExperimentConfig cfg = normalize(raw);
  if (cfg.experiment != ExperimentKind::ValidateLattice) {
    throw config_error("run_validate_lattice: wrong experiment kind");
  }
  ExperimentResult result;
  result.config = cfg;
  const LatticeSpec spec = make_spec(cfg.family, cfg.delta, cfg.k);
  result.lattice_report =
      validate_graph_requirements(spec, cfg.window_radius, cfg.period_vectors);
  const auto& rep = *result.lattice_report;
  result.notes.push_back(std::string("graph requirements ") +
                         (rep.requirements_met() ? "met" : "NOT met") + " on window radius " +
                         std::to_string(rep.window_radius));
  for (const auto& pc : rep.period_checks) {
    result.notes.push_back("translation (" + fmt_g12(pc.vector.x) + ", " +
                           fmt_g12(pc.vector.y) + ") is " +
                           (pc.is_period ? "a period" : "not a period"));
  }
  result.verdict = rep.requirements_met() ? Verdict::pass : Verdict::fail;
  return result;
}

inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case ExperimentKind::VerifyCardy: return run_verify_cardy(cfg);
    case ExperimentKind::Coupling: return run_coupling(cfg);
    case ExperimentKind::Violation: return run_violation(cfg);
    case ExperimentKind::Sweep: return run_sweep(cfg);
    case ExperimentKind::Predict: return run_predict(cfg);
    case ExperimentKind::ValidateLattice: return run_validate_lattice(cfg);
  }
  throw config_error("run_experiment: unknown experiment kind");
}

// -------------------------------------------------------------------------
// Serialization. Provenance comments echo the effective config (worker count
// and output path excluded so that re-runs are byte-identical).

namespace detail {

inline std::string provenance_lines(const ExperimentResult& result) {
  const ExperimentConfig& cfg = result.config;
  std::string s;
  s += std::string("# cardylab ") + kVersion + " mixer=" + std::to_string(kMixerVersion) +
       " interval=wilson95\n";
  s += std::string("# experiment=") + experiment_name(cfg.experiment) + "\n";
  s += std::string("# family=") + family_name(cfg.family) + " k=" + fmt_g12(cfg.k) +
       " delta=" + fmt_g12(cfg.delta);
  if (cfg.p) s += " p=" + fmt_g12(*cfg.p);
  s += " n_samples=" + fmt_u64(cfg.n_samples) + " seed=" + fmt_u64(cfg.seed) + "\n";
  if (!cfg.x_params.empty()) s += "# x_params=" + fmt_list(cfg.x_params) + "\n";
  if (!cfg.p_values.empty() && cfg.experiment == ExperimentKind::Sweep) {
    s += "# p_values=" + fmt_list(cfg.p_values) + "\n";
  }
  if (!cfg.delta_values.empty() && cfg.experiment == ExperimentKind::Sweep) {
    s += "# delta_values=" + fmt_list(cfg.delta_values) + "\n";
  }
  if (!cfg.kappa_values.empty() && cfg.experiment == ExperimentKind::Predict) {
    s += "# kappa_values=" + fmt_list(cfg.kappa_values) + "\n";
  }
  if (cfg.experiment == ExperimentKind::ValidateLattice) {
    s += "# window_radius=" + std::to_string(cfg.window_radius) + "\n";
  }
  for (const std::string& note : result.notes) s += "# note: " + note + "\n";
  if (result.verdict != Verdict::none) {
    s += std::string("# verdict=") + verdict_name(result.verdict) + "\n";
  }
  return s;
}

}  // namespace detail

inline std::string serialize_csv(const ExperimentResult& result) {
  std::string s = detail::provenance_lines(result);
  switch (result.config.experiment) {
    case ExperimentKind::Predict:
      s += "kappa,x,w,X,residual\n";
      for (const PredictRow& r : result.predict_rows) {
        s += fmt_g12(r.kappa) + "," + fmt_g12(r.x) + "," + fmt_g12(r.w) + "," +
             fmt_g12(r.X) + "," + fmt_g12(r.residual) + "\n";
      }
      return s;
    case ExperimentKind::ValidateLattice: {
      const auto& rep = *result.lattice_report;
      s += "check,value,pass\n";
      const auto row = [&s](const std::string& name, const std::string& value, bool pass) {
        s += name + "," + value + "," + (pass ? "true" : "false") + "\n";
      };
      row("degree_bounded", std::to_string(rep.degree), rep.degree_bounded);
      row("offsets_symmetric", std::to_string(rep.degree), rep.offsets_symmetric);
      row("locally_finite", fmt_g12(rep.max_edge_length), rep.locally_finite);
      row("sites_per_unit_area", fmt_g12(rep.sites_per_unit_area), true);
      row("window_connected", std::to_string(rep.window_sites), rep.window_connected);
      for (const auto& pc : rep.period_checks) {
        row("period_(" + fmt_g12(pc.vector.x) + ";" + fmt_g12(pc.vector.y) + ")",
            pc.is_period ? "period" : "not_period", true);
      }
      return s;
    }
    default: break;
  }
  s += "family,k,delta,p,x_requested,x_snapped,n,successes,p_hat,ci_low,ci_high,"
       "cardy_X,deviation,z_score\n";
  for (const ResultRow& r : result.rows) {
    s += r.family + "," + fmt_g12(r.k) + "," + fmt_g12(r.delta) + "," + fmt_g12(r.p) +
         "," + fmt_g12(r.x_requested) + "," + fmt_g12(r.x_snapped) + "," + fmt_u64(r.n) +
         "," + fmt_u64(r.successes) + "," + fmt_g12(r.p_hat) + "," + fmt_g12(r.ci_low) +
         "," + fmt_g12(r.ci_high) + "," + fmt_g12(r.cardy_X) + "," +
         fmt_g12(r.deviation) + "," + fmt_g12(r.z_score) + "\n";
  }
  return s;
}

inline std::string serialize_json(const ExperimentResult& result) {
  nlohmann::ordered_json out;
  out["tool"] = "cardylab";
  out["version"] = kVersion;
  out["mixer_version"] = kMixerVersion;
  const ExperimentConfig& cfg = result.config;
  nlohmann::ordered_json jc;
  jc["experiment"] = experiment_name(cfg.experiment);
  jc["family"] = family_name(cfg.family);
  jc["k"] = cfg.k;
  jc["delta"] = cfg.delta;
  if (cfg.p) jc["p"] = *cfg.p;
  jc["x_params"] = cfg.x_params;
  jc["n_samples"] = cfg.n_samples;
  jc["seed"] = cfg.seed;
  if (cfg.experiment == ExperimentKind::Sweep) {
    jc["p_values"] = cfg.p_values;
    jc["delta_values"] = cfg.delta_values;
  }
  if (cfg.experiment == ExperimentKind::Predict) jc["kappa_values"] = cfg.kappa_values;
  if (cfg.experiment == ExperimentKind::ValidateLattice) {
    jc["window_radius"] = cfg.window_radius;
  }
  out["config"] = jc;

  if (cfg.experiment == ExperimentKind::Predict) {
    auto rows = nlohmann::ordered_json::array();
    for (const PredictRow& r : result.predict_rows) {
      rows.push_back({{"kappa", r.kappa},
                      {"x", r.x},
                      {"w", r.w},
                      {"X", r.X},
                      {"residual", r.residual}});
    }
    out["rows"] = rows;
  } else if (cfg.experiment == ExperimentKind::ValidateLattice) {
    const auto& rep = *result.lattice_report;
    nlohmann::ordered_json jr;
    jr["window_radius"] = rep.window_radius;
    jr["window_sites"] = rep.window_sites;
    jr["degree"] = rep.degree;
    jr["degree_bounded"] = rep.degree_bounded;
    jr["offsets_symmetric"] = rep.offsets_symmetric;
    jr["max_edge_length"] = rep.max_edge_length;
    jr["edge_length_bound"] = rep.edge_length_bound;
    jr["locally_finite"] = rep.locally_finite;
    jr["sites_per_unit_area"] = rep.sites_per_unit_area;
    jr["window_connected"] = rep.window_connected;
    auto periods = nlohmann::ordered_json::array();
    for (const auto& pc : rep.period_checks) {
      periods.push_back(
          {{"vector", {pc.vector.x, pc.vector.y}}, {"is_period", pc.is_period}});
    }
    jr["period_checks"] = periods;
    out["report"] = jr;
  } else {
    auto rows = nlohmann::ordered_json::array();
    for (const ResultRow& r : result.rows) {
      rows.push_back({{"family", r.family},
                      {"k", r.k},
                      {"delta", r.delta},
                      {"p", r.p},
                      {"x_requested", r.x_requested},
                      {"x_snapped", r.x_snapped},
                      {"n", r.n},
                      {"successes", r.successes},
                      {"p_hat", r.p_hat},
                      {"ci_low", r.ci_low},
                      {"ci_high", r.ci_high},
                      {"cardy_X", r.cardy_X},
                      {"deviation", r.deviation},
                      {"z_score", r.z_score}});
    }
    out["rows"] = rows;
  }
  out["notes"] = result.notes;
  out["verdict"] = verdict_name(result.verdict);
  return out.dump(2) + "\n";
}

inline std::string serialize(const ExperimentResult& result) {
  return result.config.format == OutFormat::csv ? serialize_csv(result)
                                                : serialize_json(result);
}

// Writes to result.config.out, or returns the payload for stdout when the
// path is empty.
inline void write_output(const ExperimentResult& result, std::ostream& fallback) {
  const std::string payload = serialize(result);
  if (result.config.out.empty()) {
    fallback << payload;
    return;
  }
  std::ofstream file(result.config.out, std::ios::binary);
  if (!file) {
    throw config_error("config: cannot open output path " + result.config.out);
  }
  file << payload;
}

}  // namespace cardylab
