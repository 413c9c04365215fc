#include "ssgc/submodel.hpp"

#include "ssgc/linalg.hpp"

namespace ssgc {

ISSModel extract_output_submodel(const ISSModel& joint, int first, int count,
                                 const DareOptions& options) {
  const int p = joint.output_dim();
  if (count < 1 || first < 0 || first + count > p) {
    throw DimensionError("submodel output range is out of bounds");
  }
  if (linalg::spectral_radius(joint.A()) >= 1.0 - 1e-12) {
    throw ModelError("submodel extraction requires a stationary joint model");
  }
  const Matrix& k = joint.K();
  const Matrix& v = joint.V();
  const Matrix c_sub = joint.C().middleRows(first, count);
  const Matrix v_sub = v.block(first, first, count, count);
  const Matrix cross = k * v.middleCols(first, count);  // B [Sigma_X; Sigma_YX]
  const Matrix b_eps = k * linalg::cholesky_lower(v, "joint innovations covariance");
  const Matrix q = b_eps * b_eps.transpose();

  const SSModel ss(joint.A(), c_sub, q, v_sub, cross);
  DareSolution sol;
  try {
    sol = solve_dare(ss, options);
  } catch (const DarePreconditionError& e) {
    throw ModelError(std::string("submodel extraction on a corrupted joint model: ") + e.what());
  }
  return ISSModel(joint.A(), c_sub, std::move(sol.K), std::move(sol.V));
}

ISSModel extract_submodel(const ISSModel& joint, Block block, const DareOptions& options) {
  const JointPartition& part = joint.require_partition();
  if (block == Block::X) return extract_output_submodel(joint, 0, part.px(), options);
  return extract_output_submodel(joint, part.px(), part.py(), options);
}

SpectralCurve submodel_spectrum(const ISSModel& sub, std::span<const double> grid) {
  return spectrum_of_iss(sub, grid);
}

double log_det_hermitian(const CMatrix& m) {
  Eigen::LLT<CMatrix> llt(linalg::hermitian_part(m));
  if (llt.info() != Eigen::Success) {
    throw ModelError("spectral value is not positive definite");
  }
  const CMatrix l = llt.matrixL();
  return 2.0 * l.diagonal().real().array().log().sum();
}

double log_det_spectrum_integral(const SpectralCurve& curve) {
  if (curve.grid.size() != curve.values.size()) {
    throw DimensionError("spectral curve grid and values differ in length");
  }
  const std::vector<double> w = periodic_trapezoid_weights(curve.grid);
  double total = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) total += w[i] * log_det_hermitian(curve.values[i]);
  return total;
}

}  // namespace ssgc
