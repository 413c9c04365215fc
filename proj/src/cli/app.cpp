#include "ssgc/cli.hpp"

#include "ssgc/filtering.hpp"
#include "ssgc/linalg.hpp"
#include "ssgc/submodel.hpp"
#include "ssgc/var1_design.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

namespace ssgc::cli {

namespace {

class Table {
 public:
  explicit Table(std::vector<std::string> header = {}) : header_(std::move(header)) {}
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  void print(std::ostream& out) const {
    std::vector<std::size_t> width;
    auto grow = [&](const std::vector<std::string>& r) {
      if (width.size() < r.size()) width.resize(r.size(), 0);
      for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    };
    grow(header_);
    for (const auto& r : rows_) grow(r);
    auto line = [&](const std::vector<std::string>& r) {
      std::string s;
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i > 0) s += "  ";
        s += i == 0 ? fmt::format("{:<{}}", r[i], width[i]) : fmt::format("{:>{}}", r[i], width[i]);
      }
      while (!s.empty() && s.back() == ' ') s.pop_back();
      out << s << '\n';
    };
    if (!header_.empty()) line(header_);
    for (const auto& r : rows_) line(r);
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) throw InputError("cannot write " + path);
    row_strings(header);
  }
  void row(const std::vector<double>& values) {
    std::vector<std::string> s;
    for (double v : values) s.push_back(fmt::format("{:.17g}", v == 0.0 ? 0.0 : v));
    row_strings(s);
  }
  void row_strings(const std::vector<std::string>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << values[i];
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}


struct Context {
  std::ostream& out;
  int digits = 6;
  std::string num(double v) const { return format_number(v, digits); }

  void print_matrix(const std::string& title, const Matrix& m) const {
    out << title << '\n';
    Table t;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      std::vector<std::string> r = {" "};
      for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(num(m(i, j)));
      t.add(std::move(r));
    }
    t.print(out);
  }

  void print_gems(const GemSummary& g) const {
    Table t({"measure", "value"});
    t.add({"F(Y->X)", num(g.fyx)});
    t.add({"F(X->Y)", num(g.fxy)});
    t.add({"F(Y.X)", num(g.fydx)});
    t.add({"F(X,Y)", num(g.fxoy)});
    t.print(out);
  }

  void print_chi2(const GemSummary& g, long samples, int state_dim, const JointPartition& part) const {
    struct Row {
      const char* name;
      double fhat;
      Chi2Kind kind;
      bool swap;
    };
    const Row rows[] = {{"weak Y->X", g.fyx, Chi2Kind::Weak, false},
                        {"weak X->Y", g.fxy, Chi2Kind::Weak, true},
                        {"instantaneous", g.fydx, Chi2Kind::Instantaneous, false},
                        {"strong Y->X", g.fyx + g.fydx, Chi2Kind::Strong, false},
                        {"strong X->Y", g.fxy + g.fydx, Chi2Kind::Strong, true}};
    Table t({"test", "statistic", "df", "p-value"});
    for (const Row& r : rows) {
      const int a = r.swap ? part.py() : part.px();
      const int b = r.swap ? part.px() : part.py();
      const Chi2Result c = chi2_test(std::max(0.0, r.fhat), samples, state_dim, a, b, r.kind);
      t.add({r.name, num(c.statistic), std::to_string(c.df), num(c.pvalue)});
    }
    t.print(out);
  }

  void print_sweep(const SweepResult& s) const {
    Table t({"m", "F(Y->X)", "F(X->Y)", "F(Y.X)", "F(X,Y)"});
    for (const SweepRow& r : s.rows) {
      t.add({std::to_string(r.m), num(r.gem.fyx), num(r.gem.fxy), num(r.gem.fydx), num(r.gem.fxoy)});
    }
    t.print(out);
  }
};

void write_sweep_csv(const std::string& path, const SweepResult& s) {
  CsvWriter w(path, {"m", "fyx", "fxy", "fydx", "fxoy"});
  for (const SweepRow& r : s.rows) {
    w.row({static_cast<double>(r.m), r.gem.fyx, r.gem.fxy, r.gem.fydx, r.gem.fxoy});
  }
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

int cmd_validate(const Context& ctx, const std::string& path, bool nonstationary) {
  const ISSModel model = load_model(path);
  const ValidationReport r = validate_iss(model, !nonstationary);
  Table t({"check", "required", "passed", "witness"});
  auto add = [&](const char* name, const ValidationCheck& c) {
    t.add({name, yes_no(c.required), yes_no(c.passed), ctx.num(c.witness)});
  };
  add("V positive definite", r.v_positive_definite);
  add("(A, C) detectable", r.detectable);
  add("(A, K) stabilizable", r.stabilizable);
  add("(A, K) controllable", r.controllable);
  add("A stable", r.a_stable);
  add("A - K C stable", r.min_phase);
  t.print(ctx.out);
  ctx.out << "valid: " << yes_no(r.passed()) << '\n';
  return r.passed() ? 0 : 2;
}

int cmd_gem(const Context& ctx, const std::string& path, int grid_n, const std::string& curve_path,
            long samples, const std::string& csv_path) {
  const ISSModel model = load_model(path);
  const JointPartition& part = model.require_partition();
  require_valid(model, true, "gem");
  const GemSummary g = gem_time_domain(model);
  ctx.print_gems(g);
  if (!csv_path.empty()) {
    CsvWriter w(csv_path, {"fyx", "fxy", "fydx", "fxoy"});
    w.row({g.fyx, g.fxy, g.fydx, g.fxoy});
  }
  if (!curve_path.empty()) {
    const std::vector<double> grid = uniform_grid(grid_n);
    const FrequencyGem yx = gem_frequency(model, grid, Direction::YtoX);
    const FrequencyGem xy = gem_frequency(model, grid, Direction::XtoY);
    CsvWriter w(curve_path, {"lambda", "f_yx", "f_xy"});
    for (std::size_t i = 0; i < grid.size(); ++i) {
      w.row({grid[i], yx.curve.values[i], xy.curve.values[i]});
    }
    ctx.out << '\n';
    Table t({"frequency curve", "integral", "filter radius", "clipped"});
    t.add({"f(Y->X)", ctx.num(yx.integral), ctx.num(yx.innovation_filter_radius),
           std::to_string(yx.clipped)});
    t.add({"f(X->Y)", ctx.num(xy.integral), ctx.num(xy.innovation_filter_radius),
           std::to_string(xy.clipped)});
    t.print(ctx.out);
  }
  if (samples > 0) {
    ctx.out << '\n';
    ctx.print_chi2(g, samples, model.state_dim(), part);
  }
  return 0;
}

int cmd_sweep(const Context& ctx, const std::string& path, const std::vector<int>& m_list,
              const std::string& csv_path) {
  const ISSModel model = load_model(path);
  const SweepResult s = run_scenario_sweep(model, m_list);
  ctx.print_sweep(s);
  if (!csv_path.empty()) write_sweep_csv(csv_path, s);
  return 0;
}

struct DesignArgs {
  double modulus = 0.0;
  double angle = 0.0;
  std::vector<double> real_pair;
  double xi_x = 0.0;
  double xi_y = 0.0;
  double rho = 0.0;
  int case_index = 0;
  std::string out_path;
  bool sweep = false;
  std::vector<int> m_list;
  std::string csv_path;
};

int cmd_design(const Context& ctx, const DesignArgs& a) {
  const DesignCase c = design_case(a.case_index);
  Var1Design d;
  if (!a.real_pair.empty()) {
    if (a.real_pair.size() != 2) throw InputError("--real needs exactly two eigenvalues");
    d.lambda1 = a.real_pair[0];
    d.lambda2 = a.real_pair[1];
    d.xi_x = a.xi_x;
    d.xi_y = a.xi_y;
    d.rho = a.rho;
    d.sign_gx = c.sign_gx;
    d.sign_gy = c.sign_gy;
    d.root_case = c.root_case;
  } else {
    d = Var1Design::from_polar(a.modulus, a.angle, a.xi_x, a.xi_y, a.rho, c.sign_gx, c.sign_gy,
                               c.root_case);
  }
  const Var1Model m = design_var1(d);
  ctx.out << fmt::format("case {}: root_case {}, sign(gamma_x) {:+d}, sign(gamma_y) {:+d}\n",
                         a.case_index, c.root_case, c.sign_gx, c.sign_gy);
  ctx.print_matrix("A", m.A);
  ctx.print_matrix("Sigma", m.sigma);
  const GemSummary g = gem_time_domain(m.to_iss());
  const ClosedFormGem yx = var1_gem_closed_form(m, Direction::YtoX);
  const ClosedFormGem xy = var1_gem_closed_form(m, Direction::XtoY);
  Table t({"direction", "pipeline", "closed form", "lower bound"});
  t.add({"F(Y->X)", ctx.num(g.fyx), ctx.num(yx.value), ctx.num(std::log1p(d.xi_x))});
  t.add({"F(X->Y)", ctx.num(g.fxy), ctx.num(xy.value), ctx.num(std::log1p(d.xi_y))});
  t.print(ctx.out);
  if (!a.out_path.empty()) {
    write_text(a.out_path, var_model_to_json({m.A}, m.sigma, JointPartition(1, 1)));
  }
  if (a.sweep) {
    ctx.out << '\n';
    const SweepResult s = run_scenario_sweep(m.to_iss(), a.m_list);
    ctx.print_sweep(s);
    if (!a.csv_path.empty()) write_sweep_csv(a.csv_path, s);
  }
  return 0;
}

int cmd_spectrum(const Context& ctx, const std::string& path, int grid_n, const std::string& block,
                 const std::string& csv_path) {
  ISSModel model = load_model(path);
  require_valid(model, true, "spectrum");
  if (block == "x") model = extract_submodel(model, Block::X);
  if (block == "y") model = extract_submodel(model, Block::Y);
  const std::vector<double> grid = uniform_grid(grid_n);
  const SpectralCurve s = spectrum_of_iss(model, grid);
  const int p = model.output_dim();
  std::vector<std::string> header = {"lambda"};
  for (int i = 0; i < p; ++i) {
    for (int j = i; j < p; ++j) {
      header.push_back(fmt::format("re f{}{}", i + 1, j + 1));
      if (j > i) header.push_back(fmt::format("im f{}{}", i + 1, j + 1));
    }
  }
  Table t(header);
  std::unique_ptr<CsvWriter> w;
  if (!csv_path.empty()) {
    std::vector<std::string> h = {"lambda"};
    for (std::size_t k = 1; k < header.size(); ++k) {
      std::string name = header[k];
      std::replace(name.begin(), name.end(), ' ', '_');
      h.push_back(name);
    }
    w = std::make_unique<CsvWriter>(csv_path, h);
  }
  for (std::size_t k = 0; k < grid.size(); ++k) {
    std::vector<double> vals = {grid[k]};
    for (int i = 0; i < p; ++i) {
      for (int j = i; j < p; ++j) {
        vals.push_back(s.values[k](i, j).real());
        if (j > i) vals.push_back(s.values[k](i, j).imag());
      }
    }
    std::vector<std::string> r;
    for (double v : vals) r.push_back(ctx.num(v));
    t.add(std::move(r));
    if (w) w->row(vals);
  }
  t.print(ctx.out);
  return 0;
}

int cmd_filter(const Context& ctx, const std::string& path, const std::vector<double>& x_taps,
               const std::vector<double>& y_taps, const std::string& out_path) {
  const ISSModel model = load_model(path);
  const JointPartition& part = model.require_partition();
  require_valid(model, true, "filter");
  const FirFilter phi = FirFilter::block_scalar(part, x_taps, y_taps);
  Table mp({"block", "taps", "minimum phase"});
  mp.add({"X", std::to_string(x_taps.size()), yes_no(min_phase_check(x_taps).is_min_phase)});
  mp.add({"Y", std::to_string(y_taps.size()), yes_no(min_phase_check(y_taps).is_min_phase)});
  mp.print(ctx.out);
  ctx.out << '\n';
  const ISSModel filtered = apply_fir_filter(model, phi);
  const GemSummary before = gem_time_domain(model);
  const GemSummary after = gem_time_domain(filtered);
  Table t({"measure", "before", "after"});
  t.add({"F(Y->X)", ctx.num(before.fyx), ctx.num(after.fyx)});
  t.add({"F(X->Y)", ctx.num(before.fxy), ctx.num(after.fxy)});
  t.add({"F(Y.X)", ctx.num(before.fydx), ctx.num(after.fydx)});
  t.add({"F(X,Y)", ctx.num(before.fxoy), ctx.num(after.fxoy)});
  t.print(ctx.out);
  if (!out_path.empty()) write_text(out_path, model_to_json(filtered));
  return 0;
}

int cmd_hrf(const Context& ctx, double fa, double fb, double tr, double duration,
            const std::string& csv_path) {
  const FirFilter h = hrf_glover(fa, fb, tr, duration);
  std::vector<double> taps;
  for (const Matrix& m : h.taps()) taps.push_back(m(0, 0));
  Table t({"k", "t", "h"});
  for (std::size_t k = 0; k < taps.size(); ++k) {
    t.add({std::to_string(k + 1), ctx.num(static_cast<double>(k + 1) * tr), ctx.num(taps[k])});
  }
  t.print(ctx.out);
  if (!csv_path.empty()) {
    CsvWriter w(csv_path, {"t", "h"});
    for (std::size_t k = 0; k < taps.size(); ++k) w.row({static_cast<double>(k + 1) * tr, taps[k]});
  }
  MinPhaseResult mp = min_phase_check(taps);
  std::sort(mp.zeros.begin(), mp.zeros.end(), [](Complex a, Complex b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) > std::abs(b);
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  ctx.out << '\n';
  Table z({"zero", "re", "im", "|z|"});
  for (std::size_t i = 0; i < mp.zeros.size(); ++i) {
    const Complex w = mp.zeros[i];
    z.add({std::to_string(i + 1), ctx.num(w.real()), ctx.num(w.imag()), ctx.num(std::abs(w))});
  }
  z.print(ctx.out);
  const auto outside = std::count_if(mp.zeros.begin(), mp.zeros.end(),
                                     [](Complex w) { return std::abs(w) > 1.0; });
  ctx.out << "zeros outside the unit circle: " << outside << '\n';
  ctx.out << "minimum phase: " << yes_no(mp.is_min_phase) << '\n';
  return 0;
}

int cmd_fit(const Context& ctx, const std::string& path, int px, int order,
            const std::string& out_path) {
  const TimeSeries ts = load_csv(path, px);
  const VarFit fit = fit_var_ols(ts, order);
  ctx.out << "observations: " << ts.observations.rows() << ", residuals: " << fit.sample_size
          << '\n';
  for (std::size_t i = 0; i < fit.coefficients.size(); ++i) {
    ctx.print_matrix(fmt::format("A_{}", i + 1), fit.coefficients[i]);
  }
  ctx.print_matrix("intercept", fit.intercept.transpose());
  ctx.print_matrix("Sigma", fit.sigma);
  if (!out_path.empty()) write_text(out_path, var_model_to_json(fit.coefficients, fit.sigma, ts.partition));
  const ISSModel model = var_to_iss(fit.coefficients, fit.sigma, ts.partition);
  ctx.out << '\n';
  const GemSummary g = gem_time_domain(model);
  ctx.print_gems(g);
  ctx.out << '\n';
  ctx.print_chi2(g, fit.sample_size, model.state_dim(), ts.partition);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"State-space Granger causality measures", "ssgc"};
  app.require_subcommand(1);
  app.fallthrough();
  int digits = 6;
  app.add_option("--digits", digits, "Significant digits in printed tables")
      ->check(CLI::Range(1, 17));

  std::string model_path;
  std::string csv_path;
  int grid_n = 4096;

  auto* validate = app.add_subcommand("validate", "Run the structural checks on a model file");
  bool nonstationary = false;
  validate->add_option("model", model_path, "Model JSON file")->required();
  validate->add_flag("--nonstationary", nonstationary, "Do not require a stable A");

  auto* gem = app.add_subcommand("gem", "Time-domain causality measures of a model");
  std::string curve_path;
  long samples = 0;
  gem->add_option("model", model_path, "Model JSON file")->required();
  gem->add_option("--freq-curve", curve_path, "Write (lambda, f_yx, f_xy) rows to this CSV");
  gem->add_option("--grid", grid_n, "Frequency grid size")->check(CLI::Range(8, 1 << 20));
  gem->add_option("--samples", samples, "Sample size for chi-squared tests")
      ->check(CLI::PositiveNumber);
  gem->add_option("--csv", csv_path, "Write the measures to this CSV");

  auto* sweep = app.add_subcommand("sweep", "Measures of the model sampled every m steps");
  std::vector<int> m_list = default_sampling_multiples();
  sweep->add_option("model", model_path, "Model JSON file")->required();
  sweep->add_option("--m", m_list, "Comma-separated sampling multiples")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  sweep->add_option("--csv", csv_path, "Write the sweep rows to this CSV");

  auto* design = app.add_subcommand("design", "Bivariate VAR(1) with prescribed eigenvalues");
  DesignArgs da;
  da.m_list = default_sampling_multiples();
  auto* mod = design->add_option("--modulus", da.modulus, "Modulus of the eigenvalue pair");
  design->add_option("--angle", da.angle, "Angle (radians) of the eigenvalue pair")->needs(mod);
  auto* real = design->add_option("--real", da.real_pair, "Two real eigenvalues, comma-separated")
                   ->delimiter(',')
                   ->excludes(mod);
  design->add_option("--xi-x", da.xi_x, "Lower-bound driver for F(Y->X)")->required();
  design->add_option("--xi-y", da.xi_y, "Lower-bound driver for F(X->Y)")->required();
  design->add_option("--rho", da.rho, "Innovations correlation")->required();
  design->add_option("--case", da.case_index, "Root/sign case 0..7")->check(CLI::Range(0, 7));
  design->add_option("--out", da.out_path, "Write the designed model as JSON");
  design->add_flag("--sweep", da.sweep, "Also print a sampling sweep");
  design->add_option("--m", da.m_list, "Sampling multiples for --sweep")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  design->add_option("--csv", da.csv_path, "Write the sweep rows to this CSV");
  (void)real;

  auto* spectrum = app.add_subcommand("spectrum", "Spectral density matrix on a uniform grid");
  std::string block = "joint";
  int spectrum_grid = 16;
  spectrum->add_option("model", model_path, "Model JSON file")->required();
  spectrum->add_option("--grid", spectrum_grid, "Frequency grid size")->check(CLI::Range(1, 1 << 20));
  spectrum->add_option("--block", block, "joint, x or y")
      ->check(CLI::IsMember({"joint", "x", "y"}));
  spectrum->add_option("--csv", csv_path, "Write the spectrum rows to this CSV");

  auto* filter = app.add_subcommand("filter", "Measures before and after block FIR filtering");
  std::vector<double> x_taps = {1.0};
  std::vector<double> y_taps = {1.0};
  std::string out_path;
  filter->add_option("model", model_path, "Model JSON file")->required();
  filter->add_option("--x-taps", x_taps, "Taps applied to every X component")->delimiter(',');
  filter->add_option("--y-taps", y_taps, "Taps applied to every Y component")->delimiter(',');
  filter->add_option("--out", out_path, "Write the filtered ISS model as JSON");

  auto* hrf = app.add_subcommand("hrf", "Sampled double-gamma response and its zeros");
  double fa = 1.0, fb = 1.0, tr = 1.0, duration = 32.0;
  hrf->add_option("--fa", fa, "Scale of the positive lobe");
  hrf->add_option("--fb", fb, "Scale of the undershoot");
  hrf->add_option("--tr", tr, "Sampling interval in seconds")->check(CLI::PositiveNumber);
  hrf->add_option("--duration", duration, "Support in seconds")->check(CLI::PositiveNumber);
  hrf->add_option("--csv", csv_path, "Write (t, h) rows to this CSV");

  auto* fit = app.add_subcommand("fit", "Least-squares VAR fit of a CSV time series");
  std::string data_path;
  int px = 1;
  int order = 1;
  fit->add_option("data", data_path, "CSV file with a header row")->required();
  fit->add_option("--px", px, "Number of leading columns in the X block")->required();
  fit->add_option("--order", order, "VAR order");
  fit->add_option("--out", out_path, "Write the fitted model as JSON");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  const Context ctx{out, digits};
  try {
    if (*validate) return cmd_validate(ctx, model_path, nonstationary);
    if (*gem) return cmd_gem(ctx, model_path, grid_n, curve_path, samples, csv_path);
    if (*sweep) return cmd_sweep(ctx, model_path, m_list, csv_path);
    if (*design) {
      if (da.real_pair.empty() && design->count("--modulus") == 0) {
        throw InputError("design needs --modulus/--angle or --real");
      }
      return cmd_design(ctx, da);
    }
    if (*spectrum) return cmd_spectrum(ctx, model_path, spectrum_grid, block, csv_path);
    if (*filter) return cmd_filter(ctx, model_path, x_taps, y_taps, out_path);
    if (*hrf) return cmd_hrf(ctx, fa, fb, tr, duration, csv_path);
    if (*fit) return cmd_fit(ctx, data_path, px, order, out_path);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const ModelError& e) {
    err << "model error: " << e.what() << '\n';
    return 2;
  } catch (const ConvergenceError& e) {
    err << "model error: " << e.what() << '\n';
    return 2;
  }
  err << "error: no command given\n";
  return 1;
}

}  // namespace ssgc::cli
