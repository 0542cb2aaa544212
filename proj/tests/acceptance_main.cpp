// Acceptance gate: one line per criterion, nonzero exit if any fails.
//
// Golden constants below were frozen from the independent quadrature +
// bisection oracle (tests/oracles.hpp) and from exhaustive configuration
// enumeration; the Monte Carlo engine never feeds its own expectations.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "cardylab/cardylab.hpp"
#include "oracles.hpp"

using namespace cardylab;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, what.c_str());
  if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

// 1. Exact coupling: stretched-vs-flat and diagonal-vs-rotated pairs agree
//    on every one of 1000 samples at delta = 1/64, x = 0.25, within a minute.
void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::Coupling;
  cfg.family = Family::TriangularK;
  cfg.k = 2.0;
  cfg.delta = 1.0 / 64.0;
  cfg.x_params = {0.25};
  cfg.n_samples = 1000;
  const ExperimentResult tall = run_coupling(cfg);

  cfg.family = Family::SquareNE;
  cfg.k = 1.0;
  const ExperimentResult diag = run_coupling(cfg);
  const double elapsed = seconds_since(t0);

  const bool pass = tall.verdict == Verdict::pass && diag.verdict == Verdict::pass &&
                    elapsed < 60.0;
  report(1, pass,
         fmt("coupled pairs agree 1000/1000 (stretched %s, diagonal %s) in %.2f s",
             verdict_name(tall.verdict), verdict_name(diag.verdict), elapsed));
}

// 2. On the flat triangulation at criticality the estimates track the
//    conformal prediction: |p_hat - X| <= 3 half-widths + 0.5 delta^(1/3)
//    at x in {0.25, 0.5, 0.75}, delta = 1/100, n = 1e5; the midpoint
//    estimate additionally lands within 0.02 of 1/2; all inside 10 minutes.
void criterion_2() {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::VerifyCardy;
  cfg.delta = 0.01;
  cfg.n_samples = 100000;
  const ExperimentResult res = run_verify_cardy(cfg);
  const double elapsed = seconds_since(t0);

  bool mid_ok = false;
  double mid_dev = 1.0;
  for (const ResultRow& row : res.rows) {
    if (row.x_requested == 0.5) {
      mid_dev = std::abs(row.p_hat - 0.5);
      mid_ok = mid_dev <= 0.02;
    }
  }
  const bool pass = res.verdict == Verdict::pass && mid_ok && elapsed < 600.0;
  report(2, pass,
         fmt("critical flat-lattice estimates match the prediction (%s, midpoint "
             "|p_hat-1/2| = %.4f) in %.1f s",
             verdict_name(res.verdict), mid_dev, elapsed));
}

// 3. The prediction fails where it should: at x = 0.25 both the k = 2
//    stretch and the diagonal square lattice reject it by more than 3
//    half-widths, with the sign fixed by the apex angle, while the flat
//    control stays consistent. Predicted values are pinned against the
//    oracle first.
void criterion_3() {
  const double golden_tall_X = 0.283526566416215;  // oracle, kappa = atan(sqrt(15))
  const double golden_diag_X = 0.202741802091552;  // oracle, kappa = pi/4

  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::Violation;
  cfg.family = Family::TriangularK;
  cfg.k = 2.0;
  cfg.delta = 0.01;
  cfg.x_params = {0.25};
  cfg.n_samples = 100000;
  const ExperimentResult tall = run_violation(cfg);

  cfg.family = Family::SquareNE;
  cfg.k = 1.0;
  const ExperimentResult diag = run_violation(cfg);

  const ResultRow& row_tall = tall.rows[0];
  const ResultRow& row_diag = diag.rows[0];
  const bool pins_ok = std::abs(row_tall.cardy_X - golden_tall_X) < 1e-12 &&
                       std::abs(row_diag.cardy_X - golden_diag_X) < 1e-12;
  const bool signs_ok = row_tall.deviation < 0.0 && row_diag.deviation > 0.0;
  const bool pass = pins_ok && signs_ok && tall.verdict == Verdict::confirms_violation &&
                    diag.verdict == Verdict::confirms_violation;
  report(3, pass,
         fmt("prediction rejected off the flat lattice (stretched dev %+.4f z %.1f, "
             "diagonal dev %+.4f z %.1f, oracle pins %s)",
             row_tall.deviation, row_tall.z_score, row_diag.deviation, row_diag.z_score,
             pins_ok ? "ok" : "MISMATCH"));
}

// 4. Special functions: midpoint value, arcsine closed form, inverse
//    round-trips, and the density against a numerical derivative.
void criterion_4() {
  bool pass = true;
  std::string detail;

  for (const double a : {0.25, 1.0 / 3.0, 0.4196}) {
    if (std::abs(reg_inc_beta(0.5, a) - 0.5) > 1e-12) {
      pass = false;
      detail += fmt(" midpoint(a=%.4g)", a);
    }
  }
  if (std::abs(reg_inc_beta(0.25, 0.5) - 1.0 / 3.0) > 1e-10) {
    pass = false;
    detail += " arcsine";
  }
  for (const double a : {0.25, 1.0 / 3.0, 0.5}) {
    for (const double x : {0.01, 0.25, 0.9}) {
      const double w = inv_reg_inc_beta(x, a);
      if (std::abs(reg_inc_beta(w, a) - x) > 1e-10) {
        pass = false;
        detail += fmt(" roundtrip(a=%.4g,x=%.4g)", a, x);
      }
    }
  }
  for (const double a : {1.0 / 3.0, 0.4196}) {
    for (const double w : {0.2, 0.5, 0.8}) {
      const double numeric =
          oracles::numeric_derivative([a](double t) { return reg_inc_beta(t, a); }, w);
      const double analytic = beta_density(w, a);
      if (std::abs(numeric - analytic) > 1e-6 * std::abs(analytic)) {
        pass = false;
        detail += fmt(" derivative(a=%.4g,w=%.2g)", a, w);
      }
    }
  }
  report(4, pass,
         "special functions: midpoint, arcsine, inverse round-trips, density" +
             (detail.empty() ? std::string() : "; failures:" + detail));
}

// 5. The correction factor is identically 1 at the equilateral angle and
//    spreads by more than 10% at the diagonal-lattice angle.
void criterion_5() {
  double max_dev = 0.0;
  for (int i = 1; i <= 99; ++i) {
    const double x = i / 100.0;
    const CardyPrediction pred = cardy_prediction(x, std::numbers::pi / 3.0);
    max_dev = std::max(max_dev,
                       std::abs(cardy_residual(pred.w, std::numbers::pi / 3.0) - 1.0));
  }
  double lo = 1e300, hi = 0.0;
  for (int i = 1; i <= 99; ++i) {
    const double r = cardy_residual(
        cardy_prediction(i / 100.0, std::numbers::pi / 4.0).w, std::numbers::pi / 4.0);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  const bool pass = max_dev <= 1e-12 && hi / lo > 1.1;
  report(5, pass,
         fmt("residual grid: |r-1| <= %.2e at the equilateral angle, spread %.3f at "
             "the diagonal angle",
             max_dev, hi / lo));
}

// 6. Monte Carlo on the six-site domain agrees with exhaustive enumeration
//    to within 4 standard errors at n = 1e5.
void criterion_6() {
  const LatticeSpec spec = make_spec(Family::TriangularK, 0.5, 1.0);
  const SiteClassification cls = classify(spec, standard_triangle(spec, 0.5));
  const auto count = oracles::count_crossing_configs(cls);
  const double exact = oracles::exact_crossing_probability(cls, 0.5);
  const CrossingEstimate est = estimate(cls, SamplingPlan{0.5, 42, 100000});
  const double se = std::sqrt(exact * (1.0 - exact) / 100000.0);
  const bool pass = count.crossing_configs == 32 && count.total_configs == 64 &&
                    std::abs(est.p_hat - exact) <= 4.0 * se;
  report(6, pass,
         fmt("six-site domain: enumeration %llu/%llu, exact %.6g, p_hat %.6g (%.2f se)",
             static_cast<unsigned long long>(count.crossing_configs),
             static_cast<unsigned long long>(count.total_configs), exact, est.p_hat,
             std::abs(est.p_hat - exact) / se));
}

// 7. Away from criticality the crossing probability drifts monotonically to
//    the trivial limit as the mesh refines: delta in {1/10, 1/20, 1/40},
//    below 0.1 at p = 0.4 and above 0.9 at p = 0.6 on the finest mesh.
void criterion_7() {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::Sweep;
  cfg.family = Family::TriangularK;
  cfg.x_params = {0.5};
  cfg.n_samples = 100000;
  cfg.p_values = {0.4, 0.6};
  cfg.delta_values = {0.1, 0.05, 0.025};
  const ExperimentResult res = run_sweep(cfg);

  std::vector<double> low(3, -1.0), high(3, -1.0);
  std::size_t n_low = 0, n_high = 0;
  for (const ResultRow& row : res.rows) {
    if (row.p == 0.4 && n_low < 3) low[n_low++] = row.p_hat;
    if (row.p == 0.6 && n_high < 3) high[n_high++] = row.p_hat;
  }
  const bool pass = n_low == 3 && n_high == 3 &&
                    low[0] > low[1] && low[1] > low[2] && low[2] < 0.1 &&
                    high[0] < high[1] && high[1] < high[2] && high[2] > 0.9;
  report(7, pass,
         fmt("off-critical ladders: p=0.4 -> %.4f, %.4f, %.4f; p=0.6 -> %.4f, %.4f, %.4f",
             low[0], low[1], low[2], high[0], high[1], high[2]));
}

// 8. Serialized output is byte-identical regardless of the worker count.
void criterion_8() {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::Violation;
  cfg.family = Family::TriangularK;
  cfg.k = 2.0;
  cfg.delta = 1.0 / 32.0;
  cfg.x_params = {0.25};
  cfg.n_samples = 5000;
  cfg.threads = 1;
  const std::string one = serialize(run_violation(cfg));
  cfg.threads = 3;
  const std::string three = serialize(run_violation(cfg));
  cfg.threads = 8;
  const std::string eight = serialize(run_violation(cfg));
  const bool pass = one == three && one == eight;
  report(8, pass, fmt("payloads for 1/3/8 workers %s", pass ? "identical" : "DIFFER"));
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  if (g_failures == 0) {
    std::printf("ACCEPTANCE: ALL PASS\n");
    return 0;
  }
  std::printf("ACCEPTANCE: %d FAILED\n", g_failures);
  return 1;
}
