#include "ssgc/dare.hpp"

#include "ssgc/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace ssgc {

namespace {

struct GainAndCovariance {
  Matrix k;
  Matrix v;
};

// V = R + C P C^T, K = (A P C^T + S) V^{-1}; Cholesky failure is fatal.
GainAndCovariance gain(const SSModel& m, const Matrix& p, long iteration) {
  Matrix v = linalg::symmetrize(m.R() + m.C() * p * m.C().transpose());
  Eigen::LLT<Matrix> llt(v);
  if (llt.info() != Eigen::Success) {
    throw ModelError("Riccati iteration " + std::to_string(iteration) +
                     ": innovations covariance is not positive definite");
  }
  const Matrix cross = m.A() * p * m.C().transpose() + m.S();
  Matrix k = llt.solve(cross.transpose()).transpose();
  return {std::move(k), std::move(v)};
}

Matrix step(const SSModel& m, const Matrix& p, long iteration) {
  const auto [k, v] = gain(m, p, iteration);
  return linalg::symmetrize(m.A() * p * m.A().transpose() + m.Q() - k * v * k.transpose());
}

}  // namespace

Matrix riccati_step(const SSModel& model, const Matrix& p) { return step(model, p, 0); }

double dare_residual(const SSModel& model, const Matrix& p) {
  return (p - step(model, p, 0)).norm();
}

void check_dare_preconditions(const SSModel& model) {
  if (linalg::min_eigenvalue_sym(model.R()) <= 0.0) {
    throw DarePreconditionError(DareCondition::Noise,
                                "DARE condition N fails: R is not positive definite");
  }
  const PbhResult st =
      pbh_test(model.As(), linalg::psd_sqrt(model.Qs()), PbhMode::Stabilizable);
  if (!st.passed) {
    throw DarePreconditionError(DareCondition::Stabilizability,
                                "DARE condition St fails: (A_s, Q_s^{1/2}) is not stabilizable");
  }
  const PbhResult de = pbh_test(model.A(), model.C().transpose(), PbhMode::Detectable);
  if (!de.passed) {
    throw DarePreconditionError(DareCondition::Detectability,
                                "DARE condition De fails: (A, C) is not detectable");
  }
}

DareSolution solve_dare(const SSModel& model, const DareOptions& options) {
  if (!(options.tol > 0.0)) throw DimensionError("DARE tolerance must be positive");
  if (options.max_iter < 1) throw DimensionError("DARE max_iter must be >= 1");

  Matrix p;
  if (options.start == DareStart::Zero) {
    if (options.check_preconditions) check_dare_preconditions(model);
    p = Matrix::Zero(model.state_dim(), model.state_dim());
  } else {
    if (linalg::spectral_radius(model.A()) >= 1.0) {
      throw ModelError("stationary-prior Riccati start requires a stable A");
    }
    p = linalg::solve_stein(model.A(), model.Q());
  }

  long it = 0;
  bool converged = false;
  double last = 0.0;
  while (it < options.max_iter) {
    Matrix next = step(model, p, it);
    ++it;
    const double change = (next - p).norm();
    const double scale = std::max(1.0, p.norm());
    p = std::move(next);
    last = change;
    if (!p.allFinite()) break;
    if (change <= options.tol * scale) {
      converged = true;
      break;
    }
  }
  // Relative convergence leaves an absolute residual proportional to ||P||;
  // keep stepping while the contraction still pays off.
  if (converged) {
    for (int extra = 0; extra < 200 && last > 0.0; ++extra) {
      Matrix next = step(model, p, it);
      ++it;
      const double change = (next - p).norm();
      if (!next.allFinite() || change >= last) break;
      p = std::move(next);
      last = change;
    }
  }
  if (!converged) {
    throw ConvergenceError("Riccati iteration did not converge within " +
                           std::to_string(options.max_iter) + " steps");
  }

  auto [k, v] = gain(model, p, it);
  const double radius = linalg::spectral_radius(model.A() - k * model.C());
  if (radius >= 1.0) {
    throw ModelError("DARE solution is not stabilizing (spectral radius of A - K C = " +
                     std::to_string(radius) + ")");
  }
  DareSolution sol;
  sol.residual = dare_residual(model, p);
  sol.P = std::move(p);
  sol.K = std::move(k);
  sol.V = std::move(v);
  sol.iterations = it;
  return sol;
}

ISSModel to_iss(const SSModel& model, const DareSolution& solution) {
  return ISSModel(model.A(), model.C(), solution.K, solution.V, model.partition());
}

}  // namespace ssgc
