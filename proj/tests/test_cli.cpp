#include "ssgc/cli.hpp"

#include "ssgc/gem.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

namespace ssgc::cli {
namespace {

namespace fs = std::filesystem;

const char* kTable1Var =
    R"({"type": "var", "coeffs": [[[-0.204, -1.24], [0.452, -1.69]]],
        "sigma": [[1, 0.2], [0.2, 1]], "px": 1})";

Matrix table1_a() {
  Matrix a(2, 2);
  a << -0.204, -1.24, 0.452, -1.69;
  return a;
}

Matrix table1_sigma() {
  Matrix s(2, 2);
  s << 1, 0.2, 0.2, 1;
  return s;
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / fmt_name();
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name, const std::string& contents = {}) const {
    const fs::path p = path_ / name;
    if (!contents.empty()) std::ofstream(p) << contents;
    return p.string();
  }

 private:
  static std::string fmt_name() {
    static int counter = 0;
    return "ssgc_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++);
  }
  fs::path path_;
};

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(ModelJson, VarModelBecomesCompanionIss) {
  const ISSModel m = model_from_json(kTable1Var);
  EXPECT_EQ(m.state_dim(), 2);
  EXPECT_EQ(m.require_partition(), JointPartition(1, 1));
  const Matrix coeffs[] = {table1_a()};
  const ISSModel direct = var_to_iss(coeffs, table1_sigma(), JointPartition(1, 1));
  EXPECT_EQ(gem_time_domain(m).fyx, gem_time_domain(direct).fyx);
}

TEST(ModelJson, IssRoundTrip) {
  const ISSModel m = model_from_json(kTable1Var);
  const ISSModel back = model_from_json(model_to_json(m));
  EXPECT_EQ(back.A(), m.A());
  EXPECT_EQ(back.C(), m.C());
  EXPECT_EQ(back.K(), m.K());
  EXPECT_EQ(back.V(), m.V());
  EXPECT_EQ(back.require_partition(), m.require_partition());
}

TEST(ModelJson, VarRoundTrip) {
  const std::string text = var_model_to_json({table1_a()}, table1_sigma(), JointPartition(1, 1));
  EXPECT_EQ(gem_time_domain(model_from_json(text)).fxy,
            gem_time_domain(model_from_json(kTable1Var)).fxy);
}

TEST(ModelJson, RejectsMalformedDocuments) {
  EXPECT_THROW(model_from_json("not json"), InputError);
  EXPECT_THROW(model_from_json(R"({"type": "arma"})"), InputError);
  EXPECT_THROW(model_from_json(R"({"type": "var", "coeffs": [[[1, 2], [3]]], "sigma": [[1]]})"),
               InputError);
  EXPECT_THROW(model_from_json(R"({"type": "var", "coeffs": [[["a"]]], "sigma": [[1]]})"),
               InputError);
  EXPECT_THROW(model_from_json(R"({"type": "var", "coeffs": [], "sigma": [[1]]})"), InputError);
  EXPECT_THROW(model_from_json(R"({"type": "iss", "A": [[0.5]], "C": [[1], [1]],
                                   "K": [[0, 0]], "V": [[1, 0], [0, 1]], "px": 2})"),
               InputError);
  EXPECT_THROW(model_from_json(R"({"type": "iss", "A": [[0.5]], "C": [[1]]})"), InputError);
}

TEST(Csv, ParsesHeaderAndRows) {
  std::istringstream in("x,y1,y2\n1,2,3\n\n4,5,6e-1\n");
  const TimeSeries ts = read_csv(in, 1);
  ASSERT_EQ(ts.observations.rows(), 2);
  EXPECT_EQ(ts.names, (std::vector<std::string>{"x", "y1", "y2"}));
  EXPECT_EQ(ts.partition, JointPartition(1, 2));
  EXPECT_DOUBLE_EQ(ts.observations(1, 2), 0.6);
}

TEST(Csv, RejectsBadInput) {
  std::istringstream no_header("1,2\n3,4\n");
  EXPECT_THROW(read_csv(no_header, 1), InputError);
  std::istringstream ragged("x,y\n1,2\n3\n");
  EXPECT_THROW(read_csv(ragged, 1), InputError);
  std::istringstream junk("x,y\n1,abc\n");
  EXPECT_THROW(read_csv(junk, 1), InputError);
  std::istringstream bad_px("x,y\n1,2\n");
  EXPECT_THROW(read_csv(bad_px, 2), InputError);
}

TEST(FitVar, RecoversGeneratingCoefficients) {
  const Matrix data = simulate_var({table1_a()}, table1_sigma(), 100000, 12345);
  TimeSeries ts;
  ts.observations = data;
  ts.partition = JointPartition(1, 1);
  const VarFit fit = fit_var_ols(ts, 1);
  ASSERT_EQ(fit.coefficients.size(), 1u);
  EXPECT_LT((fit.coefficients[0] - table1_a()).cwiseAbs().maxCoeff(), 0.02);
  EXPECT_LT((fit.sigma - table1_sigma()).cwiseAbs().maxCoeff(), 0.02);
  EXPECT_EQ(fit.sample_size, 99999);
}

TEST(FitVar, WhiteNoiseGivesZeroCoefficients) {
  TimeSeries ts;
  ts.observations = simulate_var({Matrix::Zero(2, 2)}, Matrix::Identity(2, 2), 20000, 7);
  ts.partition = JointPartition(1, 1);
  const VarFit fit = fit_var_ols(ts, 2);
  for (const Matrix& a : fit.coefficients) EXPECT_LT(a.cwiseAbs().maxCoeff(), 0.02);
}

TEST(FitVar, RejectsCollinearAndShortData) {
  TimeSeries ts;
  Matrix data = simulate_var({Matrix::Zero(2, 2)}, Matrix::Identity(2, 2), 500, 8);
  ts.observations.resize(data.rows(), 3);
  ts.observations << data, Matrix::Constant(data.rows(), 1, 3.0);
  ts.partition = JointPartition(1, 2);
  EXPECT_THROW(fit_var_ols(ts, 1), ModelError);

  ts.observations = data;
  ts.partition = JointPartition(1, 1);
  EXPECT_THROW(fit_var_ols(ts, 0), DimensionError);
  ts.observations = data.topRows(3);
  EXPECT_THROW(fit_var_ols(ts, 1), DimensionError);
}

TEST(Sweep, FirstRowEqualsTimeDomainAndRowsDecompose) {
  const ISSModel m = model_from_json(kTable1Var);
  const SweepResult s = run_scenario_sweep(m, default_sampling_multiples());
  ASSERT_EQ(s.rows.size(), default_sampling_multiples().size());
  const GemSummary g = gem_time_domain(m);
  EXPECT_EQ(s.rows[0].m, 1);
  EXPECT_NEAR(s.rows[0].gem.fyx, g.fyx, 1e-12);
  EXPECT_NEAR(s.rows[0].gem.fxy, g.fxy, 1e-12);
  for (const SweepRow& r : s.rows) {
    EXPECT_NEAR(r.gem.fxoy, r.gem.fyx + r.gem.fxy + r.gem.fydx, 1e-10) << r.m;
  }
}

TEST(Sweep, DecoupledModelIsZeroEverywhere) {
  Matrix a(2, 2);
  a << 0.6, 0, 0, -0.3;
  const ISSModel m = model_from_json(var_model_to_json({a}, Matrix::Identity(2, 2), JointPartition(1, 1)));
  for (const SweepRow& r : run_scenario_sweep(m, {1, 2, 3, 7}).rows) {
    EXPECT_NEAR(r.gem.fyx, 0.0, 1e-12);
    EXPECT_NEAR(r.gem.fxy, 0.0, 1e-12);
    EXPECT_NEAR(r.gem.fydx, 0.0, 1e-12);
  }
}

TEST(FormatNumber, FixedSignificantDigits) {
  EXPECT_EQ(format_number(1.39646123, 6), "1.39646");
  EXPECT_EQ(format_number(-0.0, 6), "0");
  EXPECT_EQ(format_number(1234567.0, 3), "1.23e+06");
}

TEST(Commands, ExitCodes) {
  TempDir dir;
  const std::string model = dir.file("m.json", kTable1Var);
  EXPECT_EQ(run_cli({"validate", model}).code, 0);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
  EXPECT_EQ(run_cli({}).code, 1);
  EXPECT_EQ(run_cli({"gem"}).code, 1);
  EXPECT_EQ(run_cli({"gem", dir.file("missing.json")}).code, 1);
  EXPECT_EQ(run_cli({"sweep", model, "--m", "0"}).code, 1);

  const std::string unstable = dir.file(
      "u.json", R"({"type": "iss", "A": [[1.2]], "C": [[1], [0]], "K": [[0.1, 0]],
                    "V": [[1, 0], [0, 1]], "px": 1})");
  const CliResult v = run_cli({"validate", unstable});
  EXPECT_EQ(v.code, 2);
  EXPECT_NE(v.out.find("valid: no"), std::string::npos);
  EXPECT_EQ(run_cli({"validate", unstable, "--nonstationary"}).code, 2);
  EXPECT_EQ(run_cli({"gem", unstable}).code, 2);
  EXPECT_EQ(run_cli({"design", "--modulus", "0.95", "--angle", "0.1", "--xi-x", "1.5",
                     "--xi-y", "0.2", "--rho", "0.2", "--case", "0"})
                .code,
            2);
}

TEST(Commands, GemOutputsAndFiles) {
  TempDir dir;
  const std::string model = dir.file("m.json", kTable1Var);
  const std::string curve = dir.file("curve.csv");
  const std::string csv = dir.file("gem.csv");
  const CliResult r = run_cli({"gem", model, "--freq-curve", curve, "--grid", "64", "--samples", "500",
                         "--csv", csv, "--digits", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("F(Y->X)"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("1.396\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("weak Y->X"), std::string::npos);
  const std::string c = slurp(curve);
  EXPECT_EQ(c.substr(0, c.find('\n')), "lambda,f_yx,f_xy");
  EXPECT_EQ(std::count(c.begin(), c.end(), '\n'), 65);
  EXPECT_EQ(slurp(csv).substr(0, 19), "fyx,fxy,fydx,fxoy\n1");
}

TEST(Commands, OutputIsDeterministic) {
  TempDir dir;
  const std::string model = dir.file("m.json", kTable1Var);
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"sweep", model},
        std::vector<std::string>{"spectrum", model, "--grid", "8", "--block", "x"},
        std::vector<std::string>{"filter", model, "--x-taps", "1,0.5", "--y-taps", "0,1"},
        std::vector<std::string>{"hrf", "--tr", "2"}}) {
    const CliResult a = run_cli(args);
    const CliResult b = run_cli(args);
    ASSERT_EQ(a.code, 0) << args[0] << ": " << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_FALSE(a.out.empty());
  }
}

TEST(Commands, DesignWritesModelThatReproducesMeasures) {
  TempDir dir;
  const std::string out = dir.file("design.json");
  const CliResult r = run_cli({"design", "--modulus", "0.95", "--angle", "3.04159265358979",
                         "--xi-x", "1.5", "--xi-y", "0.2", "--rho", "0.2", "--case", "2",
                         "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  const ISSModel m = model_from_json(slurp(out));
  EXPECT_GE(gem_time_domain(m).fyx, std::log1p(1.5) - 1e-9);
  EXPECT_EQ(run_cli({"design", "--real", "0.5,-0.3", "--xi-x", "0.1", "--xi-y", "0.1",
                     "--rho", "0", "--case", "0"})
                .code,
            0);
  EXPECT_EQ(run_cli({"design", "--xi-x", "1", "--xi-y", "1", "--rho", "0"}).code, 1);
}

TEST(Commands, FitFromCsv) {
  TempDir dir;
  const Matrix data = simulate_var({table1_a()}, table1_sigma(), 3000, 99);
  std::ostringstream csv;
  csv << "x,y\n";
  for (Eigen::Index t = 0; t < data.rows(); ++t) {
    csv << fmt_double(data(t, 0)) << ',' << fmt_double(data(t, 1)) << '\n';
  }
  const std::string path = dir.file("data.csv", csv.str());
  const std::string out = dir.file("fit.json");
  const CliResult r = run_cli({"fit", path, "--px", "1", "--order", "1", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("strong X->Y"), std::string::npos);
  EXPECT_NO_THROW(model_from_json(slurp(out)));
  EXPECT_EQ(run_cli({"fit", path, "--px", "2"}).code, 1);
}

}  // namespace
}  // namespace ssgc::cli
