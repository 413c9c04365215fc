#pragma once

#include "ssgc/types.hpp"

#include <optional>
#include <span>
#include <vector>

namespace ssgc {

// Split of the output vector z_t = (x_t, y_t) into an X block of size px
// followed by a Y block of size py.
class JointPartition {
 public:
  JointPartition(int px, int py);

  int px() const { return px_; }
  int py() const { return py_; }
  int p() const { return px_ + py_; }

  friend bool operator==(const JointPartition&, const JointPartition&) = default;

 private:
  int px_;
  int py_;
};

enum class Block { X, Y };

// General state-space model
//   xi_{t+1} = A xi_t + w_t,   z_t = C xi_t + v_t,
//   var[w; v] = [[Q, S], [S^T, R]].
class SSModel {
 public:
  SSModel(Matrix a, Matrix c, Matrix q, Matrix r, Matrix s,
          std::optional<JointPartition> partition = std::nullopt);

  const Matrix& A() const { return a_; }
  const Matrix& C() const { return c_; }
  const Matrix& Q() const { return q_; }
  const Matrix& R() const { return r_; }
  const Matrix& S() const { return s_; }
  const std::optional<JointPartition>& partition() const { return partition_; }

  int state_dim() const { return static_cast<int>(a_.rows()); }
  int output_dim() const { return static_cast<int>(c_.rows()); }

  // Q - S R^{-1} S^T and A - S R^{-1} C. Require R positive definite.
  Matrix Qs() const;
  Matrix As() const;

 private:
  Matrix a_, c_, q_, r_, s_;
  std::optional<JointPartition> partition_;
};

// Innovations state-space model
//   xi_{t+1} = A xi_t + K eps_t,   z_t = C xi_t + eps_t,   var(eps_t) = V.
// Construction checks shapes only; use validate_iss for the structural
// requirements.
class ISSModel {
 public:
  ISSModel(Matrix a, Matrix c, Matrix k, Matrix v,
           std::optional<JointPartition> partition = std::nullopt);

  const Matrix& A() const { return a_; }
  const Matrix& C() const { return c_; }
  const Matrix& K() const { return k_; }
  const Matrix& V() const { return v_; }
  const std::optional<JointPartition>& partition() const { return partition_; }

  int state_dim() const { return static_cast<int>(a_.rows()); }
  int output_dim() const { return static_cast<int>(c_.rows()); }

  // Throws DimensionError when no partition is attached.
  const JointPartition& require_partition() const;

  ISSModel with_partition(std::optional<JointPartition> partition) const;

  // The same process written as the SS model (A, C, [K V K^T, V, K V]).
  SSModel as_ss_model() const;

 private:
  Matrix a_, c_, k_, v_;
  std::optional<JointPartition> partition_;
};

struct SpectralCurve {
  std::vector<double> grid;
  std::vector<CMatrix> values;
};

struct ScalarCurve {
  std::vector<double> grid;
  std::vector<double> values;
};

// Autocovariances Gamma(h) = E[z_{t+h} z_t^T] for h = 0..h_max.
struct AutocovarianceSequence {
  std::vector<Matrix> lags;

  const Matrix& at(int h) const { return lags.at(static_cast<std::size_t>(h)); }
  int h_max() const { return static_cast<int>(lags.size()) - 1; }
};

enum class PbhMode { Controllable, Stabilizable, Detectable };

struct PbhResult {
  bool passed = true;
  // Eigenvalue whose left eigenvector is orthogonal to B, if the test failed.
  std::optional<Complex> witness;
  // Smallest scale-normalized ||q^T B|| over the eigenvalues examined.
  double margin = 0.0;
};

// Popov-Belevitch-Hautus test. In Detectable mode the pair is (A, C) and
// `b` holds C^T; the stabilizability test is run on (A^T, C^T).
PbhResult pbh_test(const Matrix& a, const Matrix& b, PbhMode mode);

struct ValidationCheck {
  bool passed = false;
  bool required = true;
  double witness = 0.0;
};

struct ValidationReport {
  ValidationCheck v_positive_definite;  // witness: min eigenvalue of V
  ValidationCheck detectable;           // witness: PBH margin of (A, C)
  ValidationCheck stabilizable;         // witness: PBH margin of (A, K)
  ValidationCheck controllable;         // informational; witness: PBH margin
  ValidationCheck a_stable;             // witness: spectral radius of A
  ValidationCheck min_phase;            // witness: spectral radius of A - K C

  bool passed() const;
};

ValidationReport validate_iss(const ISSModel& model, bool require_stationary);

// Throws ModelError describing the first failed required check.
void require_valid(const ISSModel& model, bool require_stationary, const std::string& context);

// Companion-form ISS realization of z_t = sum_i A_i z_{t-i} + eps_t.
ISSModel var_to_iss(std::span<const Matrix> coefficients, const Matrix& sigma,
                    std::optional<JointPartition> partition = std::nullopt);

// lambda_i = -pi + 2 pi i / n, i = 0..n-1.
std::vector<double> uniform_grid(int n = 4096);

// Periodic trapezoid weights on a strictly increasing grid in [-pi, pi),
// normalized so that they sum to one (i.e. they include the 1/(2 pi)).
std::vector<double> periodic_trapezoid_weights(std::span<const double> grid);

// H(e^{-j lambda}) = I + C (e^{j lambda} I - A)^{-1} K.
CMatrix transfer_function(const ISSModel& model, double lambda);

SpectralCurve spectrum_of_iss(const ISSModel& model, std::span<const double> grid);

AutocovarianceSequence autocovariance_of_iss(const ISSModel& model, int h_max);

// Stationary state covariance: Pi = A Pi A^T + K V K^T.
Matrix state_covariance(const ISSModel& model);

}  // namespace ssgc
