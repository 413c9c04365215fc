#include "ssgc/filtering.hpp"

#include "ssgc/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace ssgc {

namespace {

bool invertible(const Matrix& m) {
  if (m.size() == 0) return true;
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& s = svd.singularValues();
  return s(s.size() - 1) > 1e-12 * std::max(1.0, s(0));
}

// det Phi(z) at a handful of fixed points off the unit circle; a filter whose
// determinant vanishes at all of them is treated as rank deficient.
bool determinant_identically_zero(const std::vector<Matrix>& taps) {
  const Complex probes[] = {{0.3, 0.1}, {-0.7, 0.45}, {1.9, -0.4}, {0.05, -1.3}};
  const Eigen::Index p = taps.front().rows();
  double scale = 0.0;
  for (const Matrix& t : taps) scale = std::max(scale, t.norm());
  if (scale == 0.0) return true;
  for (const Complex& z : probes) {
    CMatrix phi = CMatrix::Zero(p, p);
    Complex zk = 1.0;
    for (const Matrix& t : taps) {
      phi += zk * t.cast<Complex>();
      zk *= z;
    }
    const double d = std::abs(phi.determinant());
    if (d > 1e-12 * std::pow(scale, static_cast<double>(p))) return false;
  }
  return true;
}

}  // namespace

FirFilter::FirFilter(std::vector<Matrix> taps, std::optional<JointPartition> partition)
    : taps_(std::move(taps)), partition_(partition) {
  if (taps_.empty()) throw DimensionError("FIR filter needs at least one tap");
  const Eigen::Index p = taps_.front().rows();
  for (const Matrix& t : taps_) {
    if (t.rows() != p || t.cols() != p) {
      throw DimensionError("FIR taps must all be square of the same size");
    }
    if (!t.allFinite()) throw ModelError("FIR taps must be finite");
  }
  if (partition_) {
    if (partition_->p() != p) throw DimensionError("FIR partition does not match tap size");
    const int px = partition_->px();
    const int py = partition_->py();
    for (const Matrix& t : taps_) {
      if (t.topRightCorner(px, py).cwiseAbs().maxCoeff() != 0.0 ||
          t.bottomLeftCorner(py, px).cwiseAbs().maxCoeff() != 0.0) {
        throw ModelError("FIR filter is not block diagonal");
      }
    }
  }
  if (determinant_identically_zero(taps_)) {
    throw ModelError("FIR filter is not full rank (det Phi(L) vanishes identically)");
  }
}

FirFilter FirFilter::scalar(const std::vector<double>& taps) {
  std::vector<Matrix> m;
  m.reserve(taps.size());
  for (double c : taps) m.push_back(Matrix::Constant(1, 1, c));
  return FirFilter(std::move(m));
}

FirFilter FirFilter::block_scalar(const JointPartition& partition,
                                  const std::vector<double>& x_taps,
                                  const std::vector<double>& y_taps) {
  const std::size_t len = std::max(x_taps.size(), y_taps.size());
  if (len == 0) throw DimensionError("FIR filter needs at least one tap");
  std::vector<Matrix> taps;
  taps.reserve(len);
  const int px = partition.px();
  const int py = partition.py();
  for (std::size_t k = 0; k < len; ++k) {
    Matrix t = Matrix::Zero(partition.p(), partition.p());
    if (k < x_taps.size()) t.topLeftCorner(px, px).diagonal().setConstant(x_taps[k]);
    if (k < y_taps.size()) t.bottomRightCorner(py, py).diagonal().setConstant(y_taps[k]);
    taps.push_back(std::move(t));
  }
  return FirFilter(std::move(taps), partition);
}

CMatrix FirFilter::response(double lambda) const {
  const Eigen::Index p = dim();
  CMatrix out = CMatrix::Zero(p, p);
  for (std::size_t k = 0; k < taps_.size(); ++k) {
    out += std::polar(1.0, -lambda * static_cast<double>(k)) * taps_[k].cast<Complex>();
  }
  return out;
}

std::vector<Complex> determinant_zeros(const FirFilter& filter) {
  const int p = filter.dim();
  const int q = filter.order();
  std::vector<Complex> zeros;
  if (q == 0) return zeros;
  // Pencil z E - F with E = diag(Phi_0, I, ...), first block row of F equal to
  // -[Phi_1 ... Phi_q] and identity shifts below; its finite eigenvalues are
  // the roots of det(Phi_0 z^q + ... + Phi_q).
  const int n = p * q;
  Matrix e = Matrix::Identity(n, n);
  e.topLeftCorner(p, p) = filter.taps().front();
  Matrix f = Matrix::Zero(n, n);
  for (int k = 1; k <= q; ++k) {
    f.block(0, (k - 1) * p, p, p) = -filter.taps()[static_cast<std::size_t>(k)];
  }
  if (q > 1) f.bottomLeftCorner(n - p, n - p).setIdentity();
  Eigen::GeneralizedEigenSolver<Matrix> ges(f, e, false);
  const Eigen::VectorXcd alpha = ges.alphas();
  const Vector beta = ges.betas();
  const double scale = std::max(1.0, e.norm());
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    if (std::abs(beta(i)) > 1e-12 * scale) zeros.push_back(alpha(i) / beta(i));
  }
  return zeros;
}

ISSModel apply_fir_filter(const ISSModel& joint, const FirFilter& filter,
                          const DareOptions& options) {
  require_valid(joint, true, "apply_fir_filter");
  for (const Complex& z : determinant_zeros(filter)) {
    if (std::abs(std::abs(z) - 1.0) < 1e-8) {
      throw ModelError("filtered process is not full-rank regular: det Phi has a zero on the "
                       "unit circle");
    }
  }
  const int p = joint.output_dim();
  if (filter.dim() != p) throw DimensionError("filter size does not match model outputs");
  if (filter.partition() && joint.partition() && *filter.partition() != *joint.partition()) {
    throw DimensionError("filter partition differs from model partition");
  }
  const int n = joint.state_dim();
  const int q = filter.order();
  const int na = n + q * p;
  const std::vector<Matrix>& phi = filter.taps();

  // State [xi_t; z_{t-1}; ...; z_{t-q}], driven by eps_t through G.
  Matrix a = Matrix::Zero(na, na);
  a.topLeftCorner(n, n) = joint.A();
  if (q > 0) {
    a.block(n, 0, p, n) = joint.C();
    if (q > 1) a.block(n + p, n, (q - 1) * p, (q - 1) * p).setIdentity();
  }
  Matrix g = Matrix::Zero(na, p);
  g.topRows(n) = joint.K();
  if (q > 0) g.block(n, 0, p, p).setIdentity();

  Matrix c(p, na);
  c.leftCols(n) = phi[0] * joint.C();
  for (int k = 1; k <= q; ++k) c.middleCols(n + (k - 1) * p, p) = phi[static_cast<std::size_t>(k)];

  const Matrix& v = joint.V();
  const SSModel ss(a, c, linalg::symmetrize(g * v * g.transpose()),
                   linalg::symmetrize(phi[0] * v * phi[0].transpose()),
                   g * v * phi[0].transpose(), joint.partition());

  // A zero start needs (A_s, Q_s^{1/2}) stabilizable, which fails whenever
  // Phi has zeros outside the unit circle; the stationary prior does not.
  DareOptions opts = options;
  opts.start = DareStart::StationaryPrior;
  try {
    return to_iss(ss, solve_dare(ss, opts));
  } catch (const std::runtime_error& e) {
    throw ModelError(std::string("filtered process is not full-rank regular (det Phi may have "
                                 "unit-circle zeros): ") +
                     e.what());
  }
}

Matrix balance_matrix(Matrix a) {
  linalg::require_square(a, "balance argument");
  constexpr double radix = 2.0;
  constexpr double sqrdx = radix * radix;
  const Eigen::Index n = a.rows();
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double r = 0.0;
      double c = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
  return a;
}

std::vector<Complex> polynomial_roots(const std::vector<double>& coefficients) {
  if (coefficients.empty() || coefficients.front() == 0.0) {
    throw DimensionError("polynomial leading coefficient must be nonzero");
  }
  std::vector<Complex> roots;
  std::size_t last = coefficients.size();
  while (last > 1 && coefficients[last - 1] == 0.0) {
    roots.emplace_back(0.0, 0.0);
    --last;
  }
  const auto degree = static_cast<Eigen::Index>(last - 1);
  if (degree == 0) return roots;
  Matrix companion = Matrix::Zero(degree, degree);
  for (Eigen::Index k = 0; k < degree; ++k) {
    companion(0, k) = -coefficients[static_cast<std::size_t>(k + 1)] / coefficients.front();
  }
  if (degree > 1) companion.bottomLeftCorner(degree - 1, degree - 1).setIdentity();
  Eigen::EigenSolver<Matrix> es(balance_matrix(std::move(companion)), false);
  for (Eigen::Index i = 0; i < degree; ++i) roots.push_back(es.eigenvalues()(i));
  return roots;
}

MinPhaseResult min_phase_check(const std::vector<double>& taps) {
  auto first = std::find_if(taps.begin(), taps.end(), [](double c) { return c != 0.0; });
  if (first == taps.end()) throw DimensionError("tap vector is all zero");
  const std::vector<double> trimmed(first, taps.end());
  MinPhaseResult out;
  out.zeros = polynomial_roots(trimmed);
  out.is_min_phase = std::all_of(out.zeros.begin(), out.zeros.end(),
                                 [](const Complex& z) { return std::abs(z) < 1.0 - 1e-9; });
  return out;
}

FilterRealization FilterRealization::from_fir(const FirFilter& filter, const Matrix& sigma) {
  const int p = filter.dim();
  const int q = filter.order();
  const int n = q * p;
  FilterRealization r;
  r.A = Matrix::Zero(n, n);
  if (q > 1) r.A.bottomLeftCorner(n - p, n - p).setIdentity();
  r.B = Matrix::Zero(n, p);
  if (q > 0) r.B.topRows(p).setIdentity();
  r.C = Matrix(p, n);
  for (int k = 1; k <= q; ++k) r.C.middleCols((k - 1) * p, p) = filter.taps()[static_cast<std::size_t>(k)];
  r.D = filter.taps().front();
  if (sigma.rows() != p || sigma.cols() != p) {
    throw DimensionError("noise covariance does not match filter size");
  }
  r.sigma = sigma;
  return r;
}

FilterRealization FilterRealization::from_iss(const ISSModel& model) {
  FilterRealization r;
  r.A = model.A();
  r.B = model.K();
  r.C = model.C();
  r.D = Matrix::Identity(model.output_dim(), model.output_dim());
  r.sigma = model.V();
  return r;
}

CMatrix FilterRealization::response(double lambda) const {
  const Eigen::Index n = A.rows();
  CMatrix out = D.cast<Complex>();
  if (n == 0) return out;
  const Complex z = std::polar(1.0, lambda);
  const CMatrix resolvent = z * CMatrix::Identity(n, n) - A.cast<Complex>();
  out += C.cast<Complex>() * resolvent.partialPivLu().solve(B.cast<Complex>());
  return out;
}

AllPassDecomposition allpass_decompose(const FilterRealization& filter,
                                       std::span<const double> grid,
                                       const DareOptions& options) {
  const Eigen::Index n = filter.A.rows();
  const Eigen::Index p = filter.D.rows();
  if (filter.B.rows() != n || filter.B.cols() != p || filter.C.rows() != p ||
      filter.C.cols() != n || filter.D.cols() != p) {
    throw DimensionError("filter realization has inconsistent shapes");
  }
  if (linalg::spectral_radius(filter.A) >= 1.0 - 1e-12) {
    throw ModelError("all-pass decomposition requires a stable filter");
  }
  const Matrix j = linalg::cholesky_lower(filter.sigma, "noise covariance");

  const bool d_invertible = invertible(filter.D);
  if (d_invertible && n > 0) {
    const Matrix zero_dynamics = filter.A - filter.B * filter.D.partialPivLu().solve(filter.C);
    Eigen::EigenSolver<Matrix> es(zero_dynamics, false);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      if (std::abs(std::abs(es.eigenvalues()(i)) - 1.0) < 1e-9) {
        throw ModelError("filter has a zero on the unit circle; spectrum loses rank");
      }
    }
  }

  const Matrix& s = filter.sigma;
  const SSModel ss(filter.A, filter.C, linalg::symmetrize(filter.B * s * filter.B.transpose()),
                   linalg::symmetrize(filter.D * s * filter.D.transpose()),
                   filter.B * s * filter.D.transpose());
  DareOptions opts = options;
  opts.start = DareStart::StationaryPrior;
  DareSolution sol;
  try {
    sol = solve_dare(ss, opts);
  } catch (const std::runtime_error& e) {
    throw ModelError(std::string("spectral factorization failed; spectrum may lose rank: ") +
                     e.what());
  }

  AllPassDecomposition d{to_iss(ss, sol), j, linalg::cholesky_lower(sol.V, "V_o"), 0.0, 0.0};
  const CMatrix vo = d.minimum_phase_model.V().cast<Complex>();
  const CMatrix sc = s.cast<Complex>();
  for (double lambda : grid) {
    const CMatrix g = filter.response(lambda);
    const CMatrix go = transfer_function(d.minimum_phase_model, lambda);
    const CMatrix e = allpass_factor(d, filter, lambda);
    d.allpass_check = std::max(
        d.allpass_check, (e * e.adjoint() - CMatrix::Identity(p, p)).norm());
    d.reconstruction_check =
        std::max(d.reconstruction_check, (go * vo * go.adjoint() - g * sc * g.adjoint()).norm());
  }
  return d;
}

AllPassDecomposition allpass_decompose(const FirFilter& filter, const Matrix& sigma,
                                       std::span<const double> grid,
                                       const DareOptions& options) {
  return allpass_decompose(FilterRealization::from_fir(filter, sigma), grid, options);
}

AllPassDecomposition allpass_decompose(const ISSModel& filter_model,
                                       std::span<const double> grid,
                                       const DareOptions& options) {
  return allpass_decompose(FilterRealization::from_iss(filter_model), grid, options);
}

CMatrix allpass_factor(const AllPassDecomposition& d, const FilterRealization& filter,
                       double lambda) {
  const CMatrix go = transfer_function(d.minimum_phase_model, lambda);
  const CMatrix goc = go * d.J_o.cast<Complex>();
  const CMatrix gc = filter.response(lambda) * d.J.cast<Complex>();
  return goc.partialPivLu().solve(gc);
}

double glover_hrf(double t, const GloverHrfParams& h) {
  if (t <= 0.0) return 0.0;
  const double first = h.fa * std::pow(t / (h.tau_a * h.m), h.m) * std::exp(-(t / h.tau_a - h.m));
  const double second =
      h.fb * h.alpha * std::pow(t / (h.tau_b * h.p), h.p) * std::exp(-(t / h.tau_b - h.p));
  return first - second;
}

FirFilter hrf_glover(double fa, double fb, double tr, double duration) {
  if (!(tr > 0.0)) throw DimensionError("HRF sampling interval must be positive");
  if (!(duration >= tr)) throw DimensionError("HRF duration must be at least one interval");
  GloverHrfParams params;
  params.fa = fa;
  params.fb = fb;
  const auto count = static_cast<int>(std::floor(duration / tr + 1e-9));
  std::vector<double> taps;
  taps.reserve(static_cast<std::size_t>(count));
  for (int k = 1; k <= count; ++k) taps.push_back(glover_hrf(k * tr, params));
  return FirFilter::scalar(taps);
}

}  // namespace ssgc
