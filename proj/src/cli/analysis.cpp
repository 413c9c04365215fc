#include "ssgc/cli.hpp"

#include "ssgc/linalg.hpp"

#include <fmt/format.h>

#include <random>

namespace ssgc::cli {

VarFit fit_var_ols(const TimeSeries& data, int order) {
  if (order < 1) throw DimensionError("VAR order must be >= 1");
  const Matrix& z = data.observations;
  const long t_total = z.rows();
  const int p = static_cast<int>(z.cols());
  if (t_total <= static_cast<long>(p) * order + 1) {
    throw DimensionError("time series too short: need T > p * order + 1");
  }
  const Eigen::Index rows = t_total - order;
  const Eigen::Index cols = 1 + static_cast<Eigen::Index>(p) * order;
  Matrix x(rows, cols);
  x.col(0).setOnes();
  for (int lag = 1; lag <= order; ++lag) {
    x.middleCols(1 + (lag - 1) * p, p) = z.middleRows(order - lag, rows);
  }
  const Matrix y = z.bottomRows(rows);
  const Eigen::ColPivHouseholderQR<Matrix> qr(x);
  if (qr.rank() < cols) {
    throw ModelError("rank-deficient VAR regression (regressors are collinear)");
  }
  const Matrix beta = qr.solve(y);  // cols x p
  const Matrix resid = y - x * beta;

  VarFit fit;
  fit.intercept = beta.row(0).transpose();
  for (int lag = 1; lag <= order; ++lag) {
    fit.coefficients.push_back(beta.middleRows(1 + (lag - 1) * p, p).transpose());
  }
  const Matrix centered = resid.rowwise() - resid.colwise().mean();
  fit.sigma = linalg::symmetrize(centered.transpose() * centered / static_cast<double>(rows));
  fit.sample_size = static_cast<long>(rows);
  return fit;
}

Matrix simulate_var(const std::vector<Matrix>& coefficients, const Matrix& sigma, long length,
                    unsigned long long seed, long burn_in) {
  if (coefficients.empty()) throw DimensionError("VAR needs at least one coefficient matrix");
  if (length < 1 || burn_in < 0) throw DimensionError("invalid simulation length");
  const Eigen::Index p = sigma.rows();
  const Matrix l = linalg::cholesky_lower(sigma, "sigma");
  const auto order = static_cast<long>(coefficients.size());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const long total = length + burn_in + order;
  Matrix z = Matrix::Zero(total, p);
  Vector e(p);
  for (long t = order; t < total; ++t) {
    for (Eigen::Index i = 0; i < p; ++i) e(i) = normal(rng);
    Vector zt = l * e;
    for (long k = 1; k <= order; ++k) zt += coefficients[static_cast<std::size_t>(k - 1)] * z.row(t - k).transpose();
    z.row(t) = zt.transpose();
  }
  return z.bottomRows(length);
}

std::vector<int> default_sampling_multiples() { return {1, 2, 3, 4, 5, 6, 10, 20, 30, 40}; }

SweepResult run_scenario_sweep(const ISSModel& model, const std::vector<int>& m_list,
                               const DareOptions& options) {
  model.require_partition();
  require_valid(model, true, "sweep");
  SweepResult out;
  out.rows.reserve(m_list.size());
  for (int m : m_list) out.rows.push_back({m, gem_time_domain(downsample_iss(model, m, options), options)});
  return out;
}

std::string format_number(double value, int digits) {
  if (value == 0.0) value = 0.0;  // drop the sign of negative zero
  return fmt::format("{:.{}g}", value, digits);
}

}  // namespace ssgc::cli
