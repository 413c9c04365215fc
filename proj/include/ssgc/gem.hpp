#pragma once

#include "ssgc/dare.hpp"
#include "ssgc/model.hpp"

namespace ssgc {

// Geweke causality measures of a partitioned joint model.
struct GemSummary {
  double fyx = 0.0;   // F_{Y->X}  = ln |Omega_X| / |Sigma_X|
  double fxy = 0.0;   // F_{X->Y}  = ln |Omega_Y| / |Sigma_Y|
  double fydx = 0.0;  // F_{Y.X}   = ln |Sigma_X| |Sigma_Y| / |Sigma|
  double fxoy = 0.0;  // F_{X,Y}   = ln |Omega_X| |Omega_Y| / |Sigma|
};

// GEMs together with the submodel innovations covariances they came from.
struct GemDetail {
  GemSummary gem;
  Matrix omega_x;
  Matrix omega_y;
};

GemDetail gem_time_domain_detail(const ISSModel& joint, const DareOptions& options = {});
GemSummary gem_time_domain(const ISSModel& joint, const DareOptions& options = {});

// Instantaneous measure computed both from determinants and from the
// canonical correlations of the two innovation blocks; the two must agree.
double instantaneous_gem(const Matrix& sigma, const JointPartition& partition);

// Squared canonical correlations between the X and Y innovation blocks
// (eigenvalues of Sigma_Y^{-1/2} Sigma_YX Sigma_X^{-1} Sigma_XY Sigma_Y^{-1/2}).
Vector squared_canonical_correlations(const Matrix& sigma, const JointPartition& partition);

enum class Direction { YtoX, XtoY };

struct FrequencyGem {
  ScalarCurve curve;      // f_{dir}(lambda) = ln |f_target| / |f_e|
  double integral = 0.0;  // (1/2pi) \int f_{dir}(lambda) d lambda
  int clipped = 0;        // grid points where an f_e eigenvalue was clipped
  // Spectral radius of A - B_o C_target. The integral reproduces the
  // time-domain measure only when this is < 1.
  double innovation_filter_radius = 0.0;
};

FrequencyGem gem_frequency(const ISSModel& joint, std::span<const double> grid,
                           Direction direction, const DareOptions& options = {});

// Causal statements for each direction; "wgc" is weak, "sgc" strong causality.
struct GcClassification {
  bool wgc_y_to_x = false;
  bool sgc_y_to_x = false;
  bool wgc_x_to_y = false;
  bool sgc_x_to_y = false;
};

GcClassification gc_classify(const ISSModel& joint, double tol = 1e-8);

enum class Chi2Kind { Weak, Instantaneous, Strong };

struct Chi2Result {
  double statistic = 0.0;
  int df = 0;
  double pvalue = 1.0;
};

// Asymptotic test: T * fhat against chi-squared with 2 n px py (weak),
// px py (instantaneous) or (2n + 1) px py (strong) degrees of freedom.
Chi2Result chi2_test(double fhat, long sample_size, int state_dim, int px, int py, Chi2Kind kind);

// Regularized upper incomplete gamma Q(a, x).
double regularized_gamma_q(double a, double x);

// P(chi2_df > x).
double chi2_survival(double x, int df);

}  // namespace ssgc
