#include "ssgc/gem.hpp"

#include "ssgc/linalg.hpp"
#include "ssgc/submodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ssgc {

namespace {

constexpr double kEigenFloor = 1e-300;

struct BlockRange {
  int first;
  int count;
};

BlockRange target_range(const JointPartition& part, Direction direction) {
  // Y->X measures how Y helps predict X, so X is the target block.
  if (direction == Direction::YtoX) return {0, part.px()};
  return {part.px(), part.py()};
}

double log_det_clipped(const CMatrix& m, int& clipped) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(linalg::hermitian_part(m), Eigen::EigenvaluesOnly);
  const Vector& ev = es.eigenvalues();
  const double top = std::max(1.0, ev.cwiseAbs().maxCoeff());
  if (ev.minCoeff() < -1e-10 * top) {
    throw ModelError("f_e is not positive semi-definite; numerical breakdown");
  }
  double total = 0.0;
  bool any = false;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < kEigenFloor) any = true;
    total += std::log(std::max(ev(i), kEigenFloor));
  }
  if (any) ++clipped;
  return total;
}

}  // namespace

GemDetail gem_time_domain_detail(const ISSModel& joint, const DareOptions& options) {
  const JointPartition& part = joint.require_partition();
  require_valid(joint, true, "gem_time_domain");
  const Matrix& v = joint.V();
  const int px = part.px();
  const int py = part.py();

  GemDetail d;
  d.omega_x = extract_submodel(joint, Block::X, options).V();
  d.omega_y = extract_submodel(joint, Block::Y, options).V();

  const double ld_sx = linalg::log_det_pd(v.topLeftCorner(px, px), "Sigma_X");
  const double ld_sy = linalg::log_det_pd(v.bottomRightCorner(py, py), "Sigma_Y");
  const double ld_s = linalg::log_det_pd(v, "Sigma");
  const double ld_ox = linalg::log_det_pd(d.omega_x, "Omega_X");
  const double ld_oy = linalg::log_det_pd(d.omega_y, "Omega_Y");

  d.gem.fyx = ld_ox - ld_sx;
  d.gem.fxy = ld_oy - ld_sy;
  d.gem.fydx = instantaneous_gem(v, part);
  d.gem.fxoy = ld_ox + ld_oy - ld_s;
  return d;
}

GemSummary gem_time_domain(const ISSModel& joint, const DareOptions& options) {
  return gem_time_domain_detail(joint, options).gem;
}

Vector squared_canonical_correlations(const Matrix& sigma, const JointPartition& part) {
  if (sigma.rows() != part.p() || sigma.cols() != part.p()) {
    throw DimensionError("covariance does not match the partition");
  }
  const int px = part.px();
  const int py = part.py();
  const Matrix sx = sigma.topLeftCorner(px, px);
  const Matrix sy = sigma.bottomRightCorner(py, py);
  const Matrix syx = sigma.bottomLeftCorner(py, px);
  const Matrix sy_isqrt = linalg::inverse_sqrt_pd(sy, "Sigma_Y");
  Eigen::LLT<Matrix> sx_llt(sx);
  if (sx_llt.info() != Eigen::Success) throw ModelError("Sigma_X is not positive definite");
  const Matrix gamma =
      linalg::symmetrize(sy_isqrt * syx * sx_llt.solve(syx.transpose()) * sy_isqrt);
  Eigen::SelfAdjointEigenSolver<Matrix> es(gamma, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double instantaneous_gem(const Matrix& sigma, const JointPartition& part) {
  if (sigma.rows() != part.p() || sigma.cols() != part.p()) {
    throw DimensionError("covariance does not match the partition");
  }
  const int px = part.px();
  const int py = part.py();
  const double det_form = linalg::log_det_pd(sigma.topLeftCorner(px, px), "Sigma_X") +
                          linalg::log_det_pd(sigma.bottomRightCorner(py, py), "Sigma_Y") -
                          linalg::log_det_pd(sigma, "Sigma");

  const Vector rho2 = squared_canonical_correlations(sigma, part);
  double cc_form = 0.0;
  for (Eigen::Index i = 0; i < rho2.size(); ++i) cc_form -= std::log1p(-rho2(i));

  if (std::abs(det_form - cc_form) > 1e-10 * std::max(1.0, std::abs(det_form))) {
    throw std::logic_error("instantaneous GEM: determinant and canonical-correlation forms "
                           "disagree");
  }
  return det_form;
}

FrequencyGem gem_frequency(const ISSModel& joint, std::span<const double> grid,
                           Direction direction, const DareOptions& options) {
  const JointPartition& part = joint.require_partition();
  require_valid(joint, true, "gem_frequency");
  const BlockRange t = target_range(part, direction);

  const ISSModel sub = extract_output_submodel(joint, t.first, t.count, options);
  const Matrix sigma_t = joint.V().block(t.first, t.first, t.count, t.count);
  Eigen::LLT<Matrix> llt(sigma_t);
  if (llt.info() != Eigen::Success) throw ModelError("target innovations block is not PD");
  // B_o = B [Sigma_T; Sigma_{other,T}] Sigma_T^{-1}
  const Matrix b_o =
      llt.solve((joint.K() * joint.V().middleCols(t.first, t.count)).transpose()).transpose();
  const Matrix c_t = joint.C().middleRows(t.first, t.count);
  const ISSModel innovation_filter(joint.A(), c_t, b_o, sigma_t);

  FrequencyGem out;
  out.innovation_filter_radius = linalg::spectral_radius(joint.A() - b_o * c_t);
  out.curve.grid.assign(grid.begin(), grid.end());
  out.curve.values.reserve(grid.size());
  const CMatrix sub_v = sub.V().cast<Complex>();
  const CMatrix sig_t = sigma_t.cast<Complex>();
  for (double lambda : grid) {
    const CMatrix h = transfer_function(sub, lambda);
    const CMatrix he = transfer_function(innovation_filter, lambda);
    const double ld_target = log_det_hermitian(h * sub_v * h.adjoint());
    const double ld_e = log_det_clipped(he * sig_t * he.adjoint(), out.clipped);
    out.curve.values.push_back(ld_target - ld_e);
  }
  const std::vector<double> w = periodic_trapezoid_weights(out.curve.grid);
  for (std::size_t i = 0; i < w.size(); ++i) out.integral += w[i] * out.curve.values[i];
  return out;
}

GcClassification gc_classify(const ISSModel& joint, double tol) {
  const JointPartition& part = joint.require_partition();
  const Matrix& a = joint.A();
  const int n = joint.state_dim();
  const double a_growth = std::pow(std::max(1.0, a.norm()), std::max(0, n - 1));

  // max_{0 <= r < n} ||C_T A^r B_S|| against tol * ||C_T|| ||B_S|| max(1, ||A||)^{n-1}
  auto dynamic_link = [&](const Matrix& c_t, const Matrix& b_s) {
    const double scale = c_t.norm() * b_s.norm() * a_growth;
    Matrix ab = b_s;
    double worst = 0.0;
    for (int r = 0; r < n; ++r) {
      worst = std::max(worst, (c_t * ab).norm());
      ab = a * ab;
    }
    return worst > tol * scale;
  };

  const int px = part.px();
  const int py = part.py();
  const Matrix cx = joint.C().topRows(px);
  const Matrix cy = joint.C().bottomRows(py);
  const Matrix bx = joint.K().leftCols(px);
  const Matrix by = joint.K().rightCols(py);
  const Matrix& v = joint.V();
  const double sigma_scale =
      std::sqrt(v.topLeftCorner(px, px).norm() * v.bottomRightCorner(py, py).norm());
  const bool contemporaneous = v.topRightCorner(px, py).norm() > tol * sigma_scale;

  GcClassification g;
  g.wgc_y_to_x = dynamic_link(cx, by);
  g.wgc_x_to_y = dynamic_link(cy, bx);
  g.sgc_y_to_x = g.wgc_y_to_x || contemporaneous;
  g.sgc_x_to_y = g.wgc_x_to_y || contemporaneous;
  return g;
}

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0 || std::isnan(x)) {
    throw DimensionError("regularized_gamma_q needs a > 0 and x >= 0");
  }
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  constexpr double eps = 1e-15;
  constexpr int max_terms = 10000;
  const double log_prefix = -x + a * std::log(x) - std::lgamma(a);
  if (x < a + 1.0) {
    // P(a, x) by its power series.
    double term = 1.0 / a;
    double sum = term;
    for (int k = 1; k < max_terms; ++k) {
      term *= x / (a + k);
      sum += term;
      if (std::abs(term) < eps * std::abs(sum)) break;
    }
    return std::clamp(1.0 - sum * std::exp(log_prefix), 0.0, 1.0);
  }
  // Q(a, x) by its continued fraction (modified Lentz).
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < max_terms; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < eps) break;
  }
  return std::clamp(std::exp(log_prefix) * h, 0.0, 1.0);
}

double chi2_survival(double x, int df) {
  if (df < 1) throw DimensionError("chi-squared degrees of freedom must be >= 1");
  if (x <= 0.0) return 1.0;
  return regularized_gamma_q(0.5 * df, 0.5 * x);
}

Chi2Result chi2_test(double fhat, long sample_size, int state_dim, int px, int py, Chi2Kind kind) {
  if (sample_size < 1) throw DimensionError("sample size must be >= 1");
  if (state_dim < 1 || px < 1 || py < 1) throw DimensionError("dimensions must be >= 1");
  if (!(fhat >= -1e-12)) throw DimensionError("GEM estimate must be nonnegative");
  Chi2Result r;
  r.statistic = static_cast<double>(sample_size) * std::max(0.0, fhat);
  switch (kind) {
    case Chi2Kind::Weak:
      r.df = 2 * state_dim * px * py;
      break;
    case Chi2Kind::Instantaneous:
      r.df = px * py;
      break;
    case Chi2Kind::Strong:
      r.df = (2 * state_dim + 1) * px * py;
      break;
    default:
      throw DimensionError("unknown chi-squared test kind");
  }
  r.pvalue = chi2_survival(r.statistic, r.df);
  return r;
}

}  // namespace ssgc
