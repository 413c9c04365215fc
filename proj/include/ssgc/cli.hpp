#pragma once

#include "ssgc/downsample.hpp"
#include "ssgc/gem.hpp"
#include "ssgc/model.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace ssgc::cli {

// Raised for malformed input files; reported with exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// JSON model document:
//   {"type": "iss", "A": ..., "C": ..., "K": ..., "V": ..., "px": n}
//   {"type": "var", "coeffs": [A_1, ...], "sigma": ..., "px": n}
// Matrices are row-major nested arrays. py = p - px.
ISSModel model_from_json(const std::string& text);
ISSModel load_model(const std::string& path);
std::string model_to_json(const ISSModel& model);
std::string var_model_to_json(const std::vector<Matrix>& coefficients, const Matrix& sigma,
                              std::optional<JointPartition> partition);

struct TimeSeries {
  Matrix observations;  // T x p
  std::vector<std::string> names;
  JointPartition partition{1, 1};
};

// Comma-separated values with a header row; every field must be a finite
// number. The first px columns form the X block.
TimeSeries read_csv(std::istream& in, int px);
TimeSeries load_csv(const std::string& path, int px);

struct VarFit {
  std::vector<Matrix> coefficients;  // A_1..A_order
  Vector intercept;
  Matrix sigma;  // residual covariance, divisor T - order
  long sample_size = 0;
};

// Least squares with an intercept. Throws ModelError when the regressor
// matrix [1, z_{t-1}, ..., z_{t-order}] is rank deficient.
VarFit fit_var_ols(const TimeSeries& data, int order);

// T x p draws of z_t = sum_i A_i z_{t-i} + eps_t, eps_t ~ N(0, sigma),
// after `burn_in` discarded steps.
Matrix simulate_var(const std::vector<Matrix>& coefficients, const Matrix& sigma, long length,
                    unsigned long long seed, long burn_in = 1000);

struct SweepRow {
  int m = 1;
  GemSummary gem;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

std::vector<int> default_sampling_multiples();

SweepResult run_scenario_sweep(const ISSModel& model, const std::vector<int>& m_list,
                               const DareOptions& options = {});

// Fixed-format number with `digits` significant digits.
std::string format_number(double value, int digits);

// Entry point of the command-line tool. Exit codes: 0 success, 1 usage or
// input error, 2 model validation failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ssgc::cli
