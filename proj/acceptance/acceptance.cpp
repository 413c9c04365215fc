// Acceptance checks. Each criterion prints one PASS/FAIL line; with a
// criterion number as argument only that one runs.

#include "../tests/dare_support.hpp"
#include "../tests/support.hpp"

#include "ssgc/cli.hpp"
#include "ssgc/downsample.hpp"
#include "ssgc/filtering.hpp"
#include "ssgc/submodel.hpp"
#include "ssgc/var1_design.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <string>

namespace {

using namespace ssgc;
using namespace ssgc::testing;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Reference rows for m = 1, 2, 3, 4, 5, 6, 10, 20, 30, 40.
const std::vector<int> kMultiples = {1, 2, 3, 4, 5, 6, 10, 20, 30, 40};
const double kTable1Fyx[] = {1.3761, 1.657, 1.408, 1.169, 0.994, 0.864, 0.551, 0.151, 0.001, 0.014};
const double kTable1Fxy[] = {0.19834, 0.253, 0.287, 0.308, 0.319, 0.322, 0.293, 0.109, 0.001, 0.011};
const double kTable2Fyx[] = {0.92983, 0.879, 0.766, 0.683, 0.62, 0.57, 0.418, 0.131, 0.001, 0.013};
const double kTable2Fxy[] = {1.0476, 1.824, 2.006, 1.795, 1.527, 1.3, 0.751, 0.18, 0.002, 0.016};

Outcome table_reproduction() {
  Outcome o;
  std::string notes;
  double worst = 0.0;
  auto compare = [&](int table, const cli::SweepResult& s, const double* fyx, const double* fxy) {
    for (std::size_t i = 0; i < kMultiples.size(); ++i) {
      const double e = std::max(std::abs(s.rows[i].gem.fyx - fyx[i]),
                                std::abs(s.rows[i].gem.fxy - fxy[i]));
      worst = std::max(worst, e);
      if (e > 0.05) {
        o.pass = false;
        notes += fmt::format(" scenario {} m={} off by {:.4f};", table, kMultiples[i], e);
      }
    }
  };
  const cli::SweepResult t1 = cli::run_scenario_sweep(scenario_model(1), kMultiples);
  const cli::SweepResult t2 = cli::run_scenario_sweep(scenario_model(2), kMultiples);
  const cli::SweepResult t4 = cli::run_scenario_sweep(scenario_model(4), kMultiples);
  compare(1, t1, kTable1Fyx, kTable1Fxy);
  compare(2, t2, kTable2Fyx, kTable2Fxy);

  bool t1_pattern = true;
  for (const cli::SweepRow& r : t1.rows) {
    if (r.m <= 20 && !(r.gem.fyx > r.gem.fxy)) t1_pattern = false;
  }
  bool t2_pattern = true;
  for (const cli::SweepRow& r : t2.rows) {
    if (r.m >= 2 && r.m <= 10 && !(r.gem.fxy > r.gem.fyx)) t2_pattern = false;
  }
  const double ratio_1 = t4.rows[0].gem.fxy / t4.rows[0].gem.fyx;
  const double ratio_10 = t4.rows[6].gem.fxy / t4.rows[6].gem.fyx;
  const bool t4_pattern = ratio_1 > 50.0 && ratio_10 < 2.0;
  o.pass = o.pass && t1_pattern && t2_pattern && t4_pattern;
  o.detail = fmt::format(
      "scenarios 1-2 worst abs error {:.4f} (tol 0.05);{} scenario 1 pattern {}, scenario 2 pattern {}, "
      "scenario 4 fxy/fyx {:.2f} at m=1 (need > 50), {:.2f} at m=10 (need < 2)",
      worst, notes, t1_pattern ? "ok" : "violated", t2_pattern ? "ok" : "violated", ratio_1,
      ratio_10);
  return o;
}

Outcome closed_form_oracle() {
  Rng rng(101);
  int checked = 0;
  double worst = 0.0;
  while (checked < 100) {
    const DesignCase c = design_case(uniform_int(0, 7, rng));
    const Var1Design d = Var1Design::from_polar(
        uniform(0.3, 0.95, rng), uniform(0.05, 3.0, rng), uniform(0.05, 2.0, rng),
        uniform(0.05, 2.0, rng), uniform(-0.85, 0.85, rng), c.sign_gx, c.sign_gy, c.root_case);
    Var1Model m;
    try {
      m = design_var1(d);
    } catch (const ModelError&) {
      continue;
    }
    ++checked;
    const GemSummary g = gem_time_domain(m.to_iss());
    worst = std::max(worst, std::abs(var1_gem_closed_form(m, Direction::YtoX).value - g.fyx));
    worst = std::max(worst, std::abs(var1_gem_closed_form(m, Direction::XtoY).value - g.fxy));
  }
  return {worst <= 1e-8, fmt::format("100 designs, worst |closed form - pipeline| {:.3g}", worst)};
}

Outcome decomposition_identity() {
  Rng rng(102);
  std::vector<ISSModel> battery;
  for (int t = 0; t < 200; ++t) battery.push_back(random_iss(rng));
  for (int t = 0; t < 20; ++t) {
    battery.push_back(random_y_not_causing_x(uniform_int(1, 3, rng), uniform_int(1, 3, rng),
                                             uniform_int(1, 2, rng), uniform_int(1, 2, rng), rng));
  }
  for (int table = 1; table <= 4; ++table) {
    for (int m : {1, 2, 5}) battery.push_back(downsample_iss(scenario_model(table), m));
  }
  double worst = 0.0;
  for (const ISSModel& m : battery) {
    const GemSummary g = gem_time_domain(m);
    worst = std::max(worst, std::abs(g.fxoy - (g.fyx + g.fxy + g.fydx)));
  }
  return {worst <= 1e-10,
          fmt::format("{} models, worst residual {:.3g}", battery.size(), worst)};
}

Outcome frequency_time_consistency() {
  Rng rng(103);
  std::vector<ISSModel> models;
  for (int t = 0; t < 50; ++t) models.push_back(random_iss(rng));
  models.push_back(scenario_model(1));
  const std::vector<double> grid = uniform_grid(4096);
  int within = 0;
  int within_stable_filter = 0;
  int stable_filter = 0;
  double worst = 0.0;
  for (const ISSModel& m : models) {
    const FrequencyGem f = gem_frequency(m, grid, Direction::YtoX);
    const double e = std::abs(f.integral - gem_time_domain(m).fyx);
    worst = std::max(worst, e);
    if (e <= 1e-6) ++within;
    if (f.innovation_filter_radius < 1.0) {
      ++stable_filter;
      if (e <= 1e-6) ++within_stable_filter;
    }
  }
  const FrequencyGem t1 = gem_frequency(scenario_model(1), grid, Direction::YtoX);
  return {within == static_cast<int>(models.size()),
          fmt::format("{}/{} within 1e-6 (worst {:.3g}); {}/{} of those with a stable innovation "
                      "filter; table-1 integral {:.4f} vs fyx {:.4f}, filter radius {:.3f}",
                      within, models.size(), worst, within_stable_filter, stable_filter,
                      t1.integral, gem_time_domain(scenario_model(1)).fyx,
                      t1.innovation_filter_radius)};
}

Outcome submodel_spectral_consistency() {
  Rng rng(104);
  const std::vector<double> grid512 = uniform_grid(512);
  const std::vector<double> grid4096 = uniform_grid(4096);
  double worst_rel = 0.0;
  double worst_kolmogorov = 0.0;
  for (int t = 0; t < 100; ++t) {
    const ISSModel joint = random_iss(rng);
    const JointPartition& part = joint.require_partition();
    const SpectralCurve fz = spectrum_of_iss(joint, grid512);
    for (Block b : {Block::X, Block::Y}) {
      const int first = b == Block::X ? 0 : part.px();
      const int count = b == Block::X ? part.px() : part.py();
      const ISSModel sub = extract_submodel(joint, b);
      const SpectralCurve fs = submodel_spectrum(sub, grid512);
      for (std::size_t i = 0; i < grid512.size(); ++i) {
        const CMatrix block = fz.values[i].block(first, first, count, count);
        worst_rel = std::max(worst_rel, (fs.values[i] - block).norm() / block.norm());
      }
      worst_kolmogorov = std::max(
          worst_kolmogorov, std::abs(log_det_spectrum_integral(submodel_spectrum(sub, grid4096)) -
                                     linalg::log_det_pd(sub.V(), "Omega")));
    }
  }
  return {worst_rel <= 1e-7 && worst_kolmogorov <= 1e-8,
          fmt::format("100 models, worst relative spectrum error {:.3g}, worst log-det integral "
                      "error {:.3g}",
                      worst_rel, worst_kolmogorov)};
}

Outcome downsampling_autocovariance() {
  Rng rng(105);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const ISSModel m = random_iss(rng);
    const AutocovarianceSequence full = autocovariance_of_iss(m, 50);
    for (int mult : {2, 3, 5}) {
      const AutocovarianceSequence sub = autocovariance_of_iss(downsample_iss(m, mult), 10);
      for (int k = 0; k <= 10; ++k) {
        worst = std::max(worst, max_abs(sub.at(k) - full.at(mult * k)));
      }
    }
  }
  return {worst <= 1e-8, fmt::format("50 models x m in {{2,3,5}}, worst error {:.3g}", worst)};
}

Outcome strong_noncausality_preserved() {
  Rng rng(106);
  double worst = 0.0;
  double worst_fyx = 0.0;
  double worst_fydx = 0.0;
  int violations = 0;
  int cases = 0;
  for (int t = 0; t < 50; ++t) {
    const ISSModel m = random_y_not_causing_x(uniform_int(1, 3, rng), uniform_int(1, 3, rng),
                                              uniform_int(1, 2, rng), uniform_int(1, 2, rng), rng);
    for (int mult : {2, 3, 5}) {
      const GemSummary g = gem_time_domain(downsample_iss(m, mult));
      const double v = g.fyx + g.fydx;
      ++cases;
      if (v > 1e-8) ++violations;
      worst = std::max(worst, v);
      worst_fyx = std::max(worst_fyx, g.fyx);
      worst_fydx = std::max(worst_fydx, g.fydx);
    }
  }
  return {violations == 0,
          fmt::format("{}/{} cases exceed 1e-8, worst F(Y->X) + F(Y.X) = {:.3g} (largest "
                      "F(Y->X) {:.3g}, largest F(Y.X) {:.3g})",
                      violations, cases, worst, worst_fyx, worst_fydx)};
}

std::vector<double> random_min_phase_taps(int order, Rng& rng) {
  std::vector<double> c = {uniform(0.5, 2.0, rng)};
  for (int i = 0; i < order; ++i) {
    const double z = uniform(-0.8, 0.8, rng);
    std::vector<double> next(c.size() + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k] += c[k];
      next[k + 1] -= z * c[k];
    }
    c = std::move(next);
  }
  return c;
}

Outcome filtering_invariance() {
  Rng rng(107);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const ISSModel m = random_iss(rng);
    const FirFilter phi = FirFilter::block_scalar(
        m.require_partition(), random_min_phase_taps(uniform_int(0, 4, rng), rng),
        random_min_phase_taps(uniform_int(0, 4, rng), rng));
    const GemSummary a = gem_time_domain(m);
    const GemSummary b = gem_time_domain(apply_fir_filter(m, phi));
    worst = std::max({worst, std::abs(a.fyx - b.fyx), std::abs(a.fxy - b.fxy),
                      std::abs(a.fydx - b.fydx), std::abs(a.fxoy - b.fxoy)});
  }
  // x_t = a_t + rho b_t, y_t = b_t; delaying x by one step.
  const double rho = 0.5;
  Matrix v(2, 2);
  v << 1 + rho * rho, rho, rho, 1;
  const ISSModel white(Matrix::Zero(1, 1), Matrix::Zero(2, 1), Matrix::Zero(1, 2), v,
                       JointPartition(1, 1));
  const GemSummary d = gem_time_domain(
      apply_fir_filter(white, FirFilter::block_scalar(JointPartition(1, 1), {0, 1}, {1})));
  const double delay_err = std::abs(d.fyx - std::log1p(rho * rho));
  return {worst <= 1e-6 && delay_err <= 1e-6 && std::abs(d.fydx) <= 1e-6,
          fmt::format("50 filters, worst GEM change {:.3g}; delayed x: fyx {:.8f} vs "
                      "ln(1+rho^2) {:.8f}, fydx {:.3g}",
                      worst, d.fyx, std::log1p(rho * rho), d.fydx)};
}

Outcome hrf_non_minimum_phase() {
  std::vector<double> taps;
  const FirFilter h = hrf_glover();
  for (const Matrix& t : h.taps()) taps.push_back(t(0, 0));
  const MinPhaseResult r = min_phase_check(taps);
  int outside = 0;
  double largest = 0.0;
  for (Complex z : r.zeros) {
    if (std::abs(z) > 1.0) ++outside;
    largest = std::max(largest, std::abs(z));
  }
  return {outside >= 1, fmt::format("{} of {} zeros outside the unit circle, largest |z| {:.4f}",
                                    outside, r.zeros.size(), largest)};
}

Outcome dare_solver() {
  Rng rng(108);
  double worst_residual = 0.0;
  double worst_radius = 0.0;
  double worst_monotone = 0.0;
  for (int t = 0; t < 200; ++t) {
    const SSModel ss = random_admissible_ss(rng);
    const DareSolution s = solve_dare(ss);
    worst_residual = std::max(worst_residual, s.residual);
    worst_radius = std::max(worst_radius, linalg::spectral_radius(ss.A() - s.K * ss.C()));
    Matrix p = Matrix::Zero(ss.state_dim(), ss.state_dim());
    for (int k = 0; k < 100; ++k) {
      const Matrix next = riccati_step(ss, p);
      worst_monotone = std::max(worst_monotone, -linalg::min_eigenvalue_sym(next - p));
      p = next;
    }
  }
  auto scalar = [](double x) { return Matrix::Constant(1, 1, x); };
  const DareSolution z = solve_dare(SSModel(scalar(0.5), scalar(1), scalar(0), scalar(1), scalar(0)));
  const DareSolution w = solve_dare(SSModel(scalar(0), scalar(1), scalar(0.7), scalar(1.3), scalar(0)));
  const double trivial = std::max({std::abs(z.P(0, 0)), std::abs(z.K(0, 0)),
                                   std::abs(z.V(0, 0) - 1.0), std::abs(w.P(0, 0) - 0.7),
                                   std::abs(w.K(0, 0)), std::abs(w.V(0, 0) - 2.0)});
  return {worst_residual <= 1e-10 && worst_radius < 1.0 && worst_monotone <= 1e-10 &&
              trivial <= 1e-14,
          fmt::format("200 models: worst residual {:.3g}, worst rho(A-KC) {:.4f}, worst "
                      "monotonicity violation {:.3g}; scalar cases error {:.3g}",
                      worst_residual, worst_radius, std::max(0.0, worst_monotone), trivial)};
}

Outcome chi2_plumbing() {
  const Chi2Result weak = chi2_test(0.0, 100, 2, 1, 1, Chi2Kind::Weak);
  const Chi2Result inst = chi2_test(0.0, 100, 2, 1, 1, Chi2Kind::Instantaneous);
  const Chi2Result strong = chi2_test(0.0, 100, 2, 1, 1, Chi2Kind::Strong);
  const bool ok = weak.df == 4 && inst.df == 1 && strong.df == 5 && weak.pvalue == 1.0 &&
                  inst.pvalue == 1.0 && strong.pvalue == 1.0;
  return {ok, fmt::format("df (weak, instantaneous, strong) = ({}, {}, {}); p-values at 0: "
                          "{}, {}, {}",
                          weak.df, inst.df, strong.df, weak.pvalue, inst.pvalue, strong.pvalue)};
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

const std::vector<Criterion> kCriteria = {
    {"table reproduction", table_reproduction},
    {"closed-form oracle equivalence", closed_form_oracle},
    {"decomposition identity", decomposition_identity},
    {"frequency/time consistency", frequency_time_consistency},
    {"submodel spectral consistency", submodel_spectral_consistency},
    {"downsampling autocovariance identity", downsampling_autocovariance},
    {"strong non-causality preserved under sampling", strong_noncausality_preserved},
    {"minimum-phase filtering invariance", filtering_invariance},
    {"HRF non-minimum phase", hrf_non_minimum_phase},
    {"DARE solver", dare_solver},
    {"chi-squared plumbing", chi2_plumbing},
};

bool run_one(std::size_t i) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = kCriteria[i].run();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << fmt::format("{} criterion {:>2} {}: {} [{:.2f} s]\n", o.pass ? "PASS" : "FAIL",
                           i + 1, kCriteria[i].name, o.detail, secs);
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 2) {
    std::cerr << "usage: acceptance [criterion 1.." << kCriteria.size() << "]\n";
    return 1;
  }
  if (argc == 2) {
    const int k = std::atoi(argv[1]);
    if (k < 1 || k > static_cast<int>(kCriteria.size())) {
      std::cerr << "unknown criterion " << argv[1] << '\n';
      return 1;
    }
    return run_one(static_cast<std::size_t>(k - 1)) ? 0 : 1;
  }
  bool all = true;
  for (std::size_t i = 0; i < kCriteria.size(); ++i) all = run_one(i) && all;
  return all ? 0 : 1;
}
