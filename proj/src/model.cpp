#include "ssgc/model.hpp"

#include "ssgc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ssgc {

namespace {

constexpr double kUnstableBoundary = 1.0 - 1e-12;
constexpr double kPbhTolerance = 1e-9;
constexpr double kSymmetryTolerance = 1e-9;

void require_shape(const Matrix& m, Eigen::Index rows, Eigen::Index cols, const std::string& what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw DimensionError(what + " has shape " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
}

void require_symmetric(const Matrix& m, const std::string& what) {
  if (!m.allFinite()) throw ModelError(what + " has non-finite entries");
  const double scale = std::max(1.0, m.norm());
  if ((m - m.transpose()).norm() > kSymmetryTolerance * scale) {
    throw ModelError(what + " is not symmetric");
  }
}

void require_finite(const Matrix& m, const std::string& what) {
  if (!m.allFinite()) throw ModelError(what + " has non-finite entries");
}

void check_partition(const std::optional<JointPartition>& partition, int p) {
  if (partition && partition->p() != p) {
    throw DimensionError("partition px + py = " + std::to_string(partition->p()) +
                         " does not match output dimension " + std::to_string(p));
  }
}

// Groups numerically coincident eigenvalues so that repeated eigenvalues are
// tested against their whole left eigenspace.
std::vector<std::pair<Complex, int>> cluster_eigenvalues(const CVector& eig, double tol) {
  std::vector<std::pair<Complex, int>> clusters;  // (sum, count)
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    bool placed = false;
    for (auto& [sum, count] : clusters) {
      if (std::abs(sum / static_cast<double>(count) - eig(i)) <= tol) {
        sum += eig(i);
        ++count;
        placed = true;
        break;
      }
    }
    if (!placed) clusters.emplace_back(eig(i), 1);
  }
  for (auto& [sum, count] : clusters) sum /= static_cast<double>(count);
  return clusters;
}

PbhResult left_eigenvector_test(const Matrix& a, const Matrix& b, bool unstable_only) {
  linalg::require_square(a, "PBH matrix A");
  if (b.rows() != a.rows()) {
    throw DimensionError("PBH matrix B must have as many rows as A");
  }
  PbhResult result;
  result.margin = std::numeric_limits<double>::infinity();
  const Eigen::Index n = a.rows();
  if (n == 0) return result;

  const double a_scale = std::max(1.0, a.norm());
  const double b_scale = std::max(1.0, b.norm());
  Eigen::EigenSolver<Matrix> es(a, false);
  const auto clusters = cluster_eigenvalues(es.eigenvalues(), 1e-6 * a_scale);

  const CMatrix at = a.transpose().cast<Complex>();
  const CMatrix bc = b.cast<Complex>();
  for (const auto& [lambda, multiplicity] : clusters) {
    if (unstable_only && std::abs(lambda) < kUnstableBoundary) continue;
    // Left eigenvectors of A: right null space of A^T - lambda I.
    const CMatrix shifted = at - lambda * CMatrix::Identity(n, n);
    Eigen::JacobiSVD<CMatrix> svd(shifted, Eigen::ComputeFullV);
    const Vector& s = svd.singularValues();
    int nullity = 1;
    while (nullity < multiplicity && s(n - 1 - nullity) <= 1e-7 * a_scale) ++nullity;
    const CMatrix basis = svd.matrixV().rightCols(nullity);

    double margin = 0.0;
    const CMatrix projected = basis.transpose() * bc;  // rows: q_i^T B
    if (projected.rows() <= projected.cols()) {
      Eigen::JacobiSVD<CMatrix> psvd(projected);
      margin = psvd.singularValues()(projected.rows() - 1) / b_scale;
    }
    if (margin < result.margin) result.margin = margin;
    if (margin <= kPbhTolerance && result.passed) {
      result.passed = false;
      result.witness = lambda;
    }
  }
  if (!std::isfinite(result.margin)) result.margin = 0.0;
  return result;
}

}  // namespace

JointPartition::JointPartition(int px, int py) : px_(px), py_(py) {
  if (px < 1 || py < 1) {
    throw DimensionError("partition blocks must have px >= 1 and py >= 1");
  }
}

SSModel::SSModel(Matrix a, Matrix c, Matrix q, Matrix r, Matrix s,
                 std::optional<JointPartition> partition)
    : a_(std::move(a)), c_(std::move(c)), q_(std::move(q)), r_(std::move(r)), s_(std::move(s)),
      partition_(partition) {
  linalg::require_square(a_, "A");
  const Eigen::Index n = a_.rows();
  const Eigen::Index p = c_.rows();
  require_shape(c_, p, n, "C");
  require_shape(q_, n, n, "Q");
  require_shape(r_, p, p, "R");
  require_shape(s_, n, p, "S");
  require_finite(a_, "A");
  require_finite(c_, "C");
  require_finite(s_, "S");
  require_symmetric(q_, "Q");
  require_symmetric(r_, "R");
  q_ = linalg::symmetrize(q_);
  r_ = linalg::symmetrize(r_);
  check_partition(partition_, static_cast<int>(p));
}

Matrix SSModel::Qs() const {
  Eigen::LLT<Matrix> llt(r_);
  if (llt.info() != Eigen::Success) throw ModelError("R is not positive definite");
  return linalg::symmetrize(q_ - s_ * llt.solve(s_.transpose()));
}

Matrix SSModel::As() const {
  Eigen::LLT<Matrix> llt(r_);
  if (llt.info() != Eigen::Success) throw ModelError("R is not positive definite");
  return a_ - s_ * llt.solve(c_);
}

ISSModel::ISSModel(Matrix a, Matrix c, Matrix k, Matrix v,
                   std::optional<JointPartition> partition)
    : a_(std::move(a)), c_(std::move(c)), k_(std::move(k)), v_(std::move(v)),
      partition_(partition) {
  linalg::require_square(a_, "A");
  const Eigen::Index n = a_.rows();
  const Eigen::Index p = c_.rows();
  if (p == 0) throw DimensionError("model must have at least one output");
  require_shape(c_, p, n, "C");
  require_shape(k_, n, p, "K");
  require_shape(v_, p, p, "V");
  require_finite(a_, "A");
  require_finite(c_, "C");
  require_finite(k_, "K");
  require_symmetric(v_, "V");
  v_ = linalg::symmetrize(v_);
  check_partition(partition_, static_cast<int>(p));
}

const JointPartition& ISSModel::require_partition() const {
  if (!partition_) throw DimensionError("operation requires a model with an X/Y partition");
  return *partition_;
}

ISSModel ISSModel::with_partition(std::optional<JointPartition> partition) const {
  return ISSModel(a_, c_, k_, v_, partition);
}

SSModel ISSModel::as_ss_model() const {
  return SSModel(a_, c_, linalg::symmetrize(k_ * v_ * k_.transpose()), v_, k_ * v_, partition_);
}

PbhResult pbh_test(const Matrix& a, const Matrix& b, PbhMode mode) {
  switch (mode) {
    case PbhMode::Controllable:
      return left_eigenvector_test(a, b, false);
    case PbhMode::Stabilizable:
      return left_eigenvector_test(a, b, true);
    case PbhMode::Detectable:
      linalg::require_square(a, "PBH matrix A");
      return left_eigenvector_test(a.transpose(), b, true);
  }
  throw DimensionError("unknown PBH mode");
}

bool ValidationReport::passed() const {
  for (const ValidationCheck* c :
       {&v_positive_definite, &detectable, &stabilizable, &controllable, &a_stable, &min_phase}) {
    if (c->required && !c->passed) return false;
  }
  return true;
}

ValidationReport validate_iss(const ISSModel& model, bool require_stationary) {
  ValidationReport report;

  report.v_positive_definite.witness = linalg::min_eigenvalue_sym(model.V());
  report.v_positive_definite.passed = report.v_positive_definite.witness > 0.0;

  const PbhResult det = pbh_test(model.A(), model.C().transpose(), PbhMode::Detectable);
  report.detectable.passed = det.passed;
  report.detectable.witness = det.margin;

  const PbhResult stab = pbh_test(model.A(), model.K(), PbhMode::Stabilizable);
  report.stabilizable.passed = stab.passed;
  report.stabilizable.witness = stab.margin;

  const PbhResult ctrl = pbh_test(model.A(), model.K(), PbhMode::Controllable);
  report.controllable.passed = ctrl.passed;
  report.controllable.witness = ctrl.margin;
  report.controllable.required = false;

  report.a_stable.witness = linalg::spectral_radius(model.A());
  report.a_stable.passed = report.a_stable.witness < kUnstableBoundary;
  report.a_stable.required = require_stationary;

  report.min_phase.witness = linalg::spectral_radius(model.A() - model.K() * model.C());
  report.min_phase.passed = report.min_phase.witness < kUnstableBoundary;
  return report;
}

void require_valid(const ISSModel& model, bool require_stationary, const std::string& context) {
  const ValidationReport r = validate_iss(model, require_stationary);
  auto fail = [&](const std::string& what) { throw ModelError(context + ": " + what); };
  if (!r.v_positive_definite.passed) fail("innovations covariance V is not positive definite");
  if (require_stationary && !r.a_stable.passed) {
    fail("A is not stable (spectral radius " + std::to_string(r.a_stable.witness) + ")");
  }
  if (!r.min_phase.passed) {
    fail("A - K C is not stable (spectral radius " + std::to_string(r.min_phase.witness) + ")");
  }
  if (!r.detectable.passed) fail("(A, C) is not detectable");
  if (!r.stabilizable.passed) fail("(A, K) is not stabilizable");
}

ISSModel var_to_iss(std::span<const Matrix> coefficients, const Matrix& sigma,
                    std::optional<JointPartition> partition) {
  if (coefficients.empty()) throw DimensionError("VAR needs at least one coefficient matrix");
  const Eigen::Index p = sigma.rows();
  require_shape(sigma, p, p, "sigma");
  for (const Matrix& ai : coefficients) require_shape(ai, p, p, "VAR coefficient");
  const auto order = static_cast<Eigen::Index>(coefficients.size());
  const Eigen::Index n = p * order;

  Matrix c(p, n);
  for (Eigen::Index i = 0; i < order; ++i) c.middleCols(i * p, p) = coefficients[i];
  Matrix a = Matrix::Zero(n, n);
  a.topRows(p) = c;
  if (order > 1) a.bottomLeftCorner(n - p, n - p).setIdentity();
  Matrix k = Matrix::Zero(n, p);
  k.topRows(p).setIdentity();

  if (linalg::min_eigenvalue_sym(sigma) <= 0.0) {
    throw ModelError("VAR innovations covariance is not positive definite");
  }
  if (linalg::spectral_radius(a) >= kUnstableBoundary) {
    throw ModelError("VAR companion matrix is not stable");
  }
  return ISSModel(std::move(a), std::move(c), std::move(k), sigma, partition);
}

std::vector<double> uniform_grid(int n) {
  if (n < 1) throw DimensionError("frequency grid needs at least one point");
  std::vector<double> grid(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    grid[static_cast<std::size_t>(i)] = -std::numbers::pi + 2.0 * std::numbers::pi * i / n;
  }
  return grid;
}

std::vector<double> periodic_trapezoid_weights(std::span<const double> grid) {
  const std::size_t n = grid.size();
  if (n == 0) throw DimensionError("empty frequency grid");
  for (std::size_t i = 0; i < n; ++i) {
    if (grid[i] < -std::numbers::pi || grid[i] >= std::numbers::pi) {
      throw DimensionError("frequency grid points must lie in [-pi, pi)");
    }
    if (i > 0 && grid[i] <= grid[i - 1]) {
      throw DimensionError("frequency grid must be strictly increasing");
    }
  }
  std::vector<double> w(n, 1.0);
  if (n == 1) return w;
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t i = 0; i < n; ++i) {
    const double prev = i == 0 ? grid[n - 1] - two_pi : grid[i - 1];
    const double next = i == n - 1 ? grid[0] + two_pi : grid[i + 1];
    w[i] = 0.5 * (next - prev) / two_pi;
  }
  return w;
}

CMatrix transfer_function(const ISSModel& model, double lambda) {
  const Eigen::Index n = model.state_dim();
  const Eigen::Index p = model.output_dim();
  if (n == 0) return CMatrix::Identity(p, p);
  const Complex z = std::polar(1.0, lambda);  // L^{-1}
  const CMatrix resolvent = z * CMatrix::Identity(n, n) - model.A().cast<Complex>();
  Eigen::PartialPivLU<CMatrix> lu(resolvent);
  const CMatrix x = lu.solve(model.K().cast<Complex>());
  if (!x.allFinite()) {
    throw std::logic_error("transfer function: (e^{j lambda} I - A) is singular");
  }
  return CMatrix::Identity(p, p) + model.C().cast<Complex>() * x;
}

SpectralCurve spectrum_of_iss(const ISSModel& model, std::span<const double> grid) {
  require_valid(model, true, "spectrum_of_iss");
  SpectralCurve curve;
  curve.grid.assign(grid.begin(), grid.end());
  curve.values.reserve(grid.size());
  const CMatrix v = model.V().cast<Complex>();
  for (double lambda : grid) {
    const CMatrix h = transfer_function(model, lambda);
    curve.values.push_back(linalg::hermitian_part(h * v * h.adjoint()));
  }
  return curve;
}

Matrix state_covariance(const ISSModel& model) {
  return linalg::solve_stein(model.A(), model.K() * model.V() * model.K().transpose());
}

AutocovarianceSequence autocovariance_of_iss(const ISSModel& model, int h_max) {
  if (h_max < 0) throw DimensionError("h_max must be >= 0");
  const Matrix pi = state_covariance(model);
  const Matrix& a = model.A();
  const Matrix& c = model.C();
  AutocovarianceSequence seq;
  seq.lags.reserve(static_cast<std::size_t>(h_max) + 1);
  seq.lags.push_back(linalg::symmetrize(c * pi * c.transpose() + model.V()));
  Matrix g = a * pi * c.transpose() + model.K() * model.V();  // A^{h-1} (A Pi C^T + K V)
  for (int h = 1; h <= h_max; ++h) {
    seq.lags.push_back(c * g);
    g = a * g;
  }
  return seq;
}

}  // namespace ssgc
