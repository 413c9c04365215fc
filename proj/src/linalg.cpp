#include "ssgc/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace ssgc::linalg {

void require_square(const Matrix& m, const std::string& what) {
  if (m.rows() != m.cols()) {
    throw DimensionError(what + " must be square, got " + std::to_string(m.rows()) +
                         "x" + std::to_string(m.cols()));
  }
}

double spectral_radius(const Matrix& a) {
  require_square(a, "spectral_radius argument");
  if (a.size() == 0) return 0.0;
  Eigen::EigenSolver<Matrix> es(a, /*computeEigenvectors=*/false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

double min_eigenvalue_sym(const Matrix& m) {
  require_square(m, "min_eigenvalue_sym argument");
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Matrix cholesky_lower(const Matrix& m, const std::string& what) {
  require_square(m, what);
  Eigen::LLT<Matrix> llt(symmetrize(m));
  if (llt.info() != Eigen::Success) {
    throw ModelError(what + " is not positive definite");
  }
  return llt.matrixL();
}

double log_det_pd(const Matrix& m, const std::string& what) {
  const Matrix l = cholesky_lower(m, what);
  return 2.0 * l.diagonal().array().log().sum();
}

Matrix psd_sqrt(const Matrix& m) {
  require_square(m, "psd_sqrt argument");
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m));
  const Vector d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

Matrix inverse_sqrt_pd(const Matrix& m, const std::string& what) {
  require_square(m, what);
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m));
  if (es.eigenvalues().minCoeff() <= 0.0) {
    throw ModelError(what + " is not positive definite");
  }
  const Vector d = es.eigenvalues().cwiseSqrt().cwiseInverse();
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

Matrix matrix_power(const Matrix& a, int m) {
  require_square(a, "matrix_power base");
  if (m < 0) throw DimensionError("matrix_power exponent must be >= 0");
  Matrix result = Matrix::Identity(a.rows(), a.cols());
  Matrix base = a;
  while (m > 0) {
    if (m & 1) result = result * base;
    m >>= 1;
    if (m > 0) base = base * base;
  }
  return result;
}

Matrix solve_stein(const Matrix& a, const Matrix& q, double tol, int max_doublings) {
  require_square(a, "Stein equation A");
  if (q.rows() != a.rows() || q.cols() != a.cols()) {
    throw DimensionError("Stein equation Q must match A");
  }
  Matrix x = symmetrize(q);
  Matrix ak = a;
  for (int k = 0; k < max_doublings; ++k) {
    const Matrix increment = ak * x * ak.transpose();
    x = symmetrize(x + increment);
    if (!x.allFinite()) break;
    if (increment.norm() <= tol * std::max(1.0, x.norm())) return x;
    ak = ak * ak;
  }
  throw ConvergenceError("Lyapunov doubling did not converge (is A stable?)");
}

int numerical_rank(const Matrix& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  return static_cast<int>((s.array() > rel_tol * s(0)).count());
}

}  // namespace ssgc::linalg
