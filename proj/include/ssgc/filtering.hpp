#pragma once

#include "ssgc/dare.hpp"
#include "ssgc/model.hpp"

#include <vector>

namespace ssgc {

// Finite causal matrix filter Phi(L) = sum_k Phi_k L^k.
class FirFilter {
 public:
  // When `partition` is given the filter must be block diagonal with respect
  // to it (off-diagonal blocks of every tap exactly zero).
  explicit FirFilter(std::vector<Matrix> taps,
                     std::optional<JointPartition> partition = std::nullopt);

  // 1x1 filter with the given scalar taps c_0..c_q.
  static FirFilter scalar(const std::vector<double>& taps);

  // diag(phi_x(L) I_px, phi_y(L) I_py) from scalar tap lists.
  static FirFilter block_scalar(const JointPartition& partition, const std::vector<double>& x_taps,
                                const std::vector<double>& y_taps);

  const std::vector<Matrix>& taps() const { return taps_; }
  const std::optional<JointPartition>& partition() const { return partition_; }
  bool block_diagonal() const { return partition_.has_value(); }
  int dim() const { return static_cast<int>(taps_.front().rows()); }
  int order() const { return static_cast<int>(taps_.size()) - 1; }

  // Phi(e^{-j lambda}).
  CMatrix response(double lambda) const;

 private:
  std::vector<Matrix> taps_;
  std::optional<JointPartition> partition_;
};

// Finite zeros of det(Phi_0 z^q + Phi_1 z^{q-1} + ... + Phi_q), i.e. the
// z-plane zeros of det Phi(z^{-1}) plus possibly extra zeros at the origin.
std::vector<Complex> determinant_zeros(const FirFilter& filter);

// ISS model of zbar_t = Phi(L) z_t. The filtered process is realized on the
// state [xi_t; z_{t-1}; ...; z_{t-q}] and reduced to innovations form by the
// DARE, always started from the stationary state covariance so that
// non-minimum-phase and singular-Phi_0 filters are handled alike.
ISSModel apply_fir_filter(const ISSModel& joint, const FirFilter& filter,
                          const DareOptions& options = {});

struct MinPhaseResult {
  std::vector<Complex> zeros;  // z-plane zeros of sum_k c_k z^{-k}
  bool is_min_phase = true;    // every |z| < 1 - 1e-9
};

// Zeros via eigenvalues of the balanced companion matrix of
// c_0 z^q + c_1 z^{q-1} + ... + c_q. Leading zero taps (pure delays) are
// dropped first.
MinPhaseResult min_phase_check(const std::vector<double>& taps);

// Roots of c_0 z^q + ... + c_q (c_0 != 0).
std::vector<Complex> polynomial_roots(const std::vector<double>& coefficients);

// Parlett-Reinsch balancing (similarity transform by powers of two).
Matrix balance_matrix(Matrix a);

// G(L) = D + C (L^{-1} I - A)^{-1} B driven by white noise of covariance
// sigma; A must be stable.
struct FilterRealization {
  Matrix A, B, C, D;
  Matrix sigma;

  static FilterRealization from_fir(const FirFilter& filter, const Matrix& sigma);
  // G(L) = I + C (L^{-1} I - A)^{-1} K with sigma = V; A - K C may be unstable.
  static FilterRealization from_iss(const ISSModel& model);

  CMatrix response(double lambda) const;
};

struct AllPassDecomposition {
  // Minimum-phase factor G_o (G_o(0) = I) with innovations covariance V_o.
  ISSModel minimum_phase_model;
  Matrix J;    // chol(sigma)
  Matrix J_o;  // chol(V_o)
  // max over the grid of ||E E^* - I||_F, E = J_o^{-1} G_o^{-1} G J.
  double allpass_check = 0.0;
  // max over the grid of ||G_o V_o G_o^* - G sigma G^*||_F.
  double reconstruction_check = 0.0;
};

AllPassDecomposition allpass_decompose(const FilterRealization& filter,
                                       std::span<const double> grid,
                                       const DareOptions& options = {});
AllPassDecomposition allpass_decompose(const FirFilter& filter, const Matrix& sigma,
                                       std::span<const double> grid,
                                       const DareOptions& options = {});
AllPassDecomposition allpass_decompose(const ISSModel& filter_model,
                                       std::span<const double> grid,
                                       const DareOptions& options = {});

// E(e^{-j lambda}) for a computed decomposition.
CMatrix allpass_factor(const AllPassDecomposition& d, const FilterRealization& filter,
                       double lambda);

struct GloverHrfParams {
  double fa = 1.0;
  double fb = 1.0;
  double tau_a = 1.1;
  double m = 5.0;
  double tau_b = 0.9;
  double p = 12.0;
  double alpha = 0.4;
};

// h(t) = fa (t/(tau_a m))^m e^{-(t/tau_a - m)} - fb alpha (t/(tau_b p))^p e^{-(t/tau_b - p)}
double glover_hrf(double t, const GloverHrfParams& params = {});

// Taps h(k tr) for k = 1..floor(duration / tr).
FirFilter hrf_glover(double fa = 1.0, double fb = 1.0, double tr = 1.0, double duration = 32.0);

}  // namespace ssgc
