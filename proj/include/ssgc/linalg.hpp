#pragma once

#include "ssgc/types.hpp"

namespace ssgc::linalg {

double spectral_radius(const Matrix& a);

// (M + M^T) / 2
Matrix symmetrize(const Matrix& m);
CMatrix hermitian_part(const CMatrix& m);

double min_eigenvalue_sym(const Matrix& m);

// Cholesky factor L with M = L L^T; throws ModelError if M is not positive
// definite. `what` names the matrix in the error message.
Matrix cholesky_lower(const Matrix& m, const std::string& what);

// ln det M for symmetric positive definite M, via Cholesky.
double log_det_pd(const Matrix& m, const std::string& what);

// Symmetric square root with negative eigenvalues clipped to zero.
Matrix psd_sqrt(const Matrix& m);

// Symmetric inverse square root of a positive definite matrix.
Matrix inverse_sqrt_pd(const Matrix& m, const std::string& what);

// A^m by repeated squaring; m >= 0.
Matrix matrix_power(const Matrix& a, int m);

// Solves X = A X A^T + Q by the doubling iteration
//   X_{k+1} = A_k X_k A_k^T + X_k,  A_{k+1} = A_k^2,
// starting at X_0 = Q, A_0 = A. Requires A stable.
Matrix solve_stein(const Matrix& a, const Matrix& q, double tol = 1e-13,
                   int max_doublings = 200);

// Numerical rank via SVD with threshold rel_tol * sigma_max.
int numerical_rank(const Matrix& m, double rel_tol = 1e-10);

void require_square(const Matrix& m, const std::string& what);

}  // namespace ssgc::linalg
