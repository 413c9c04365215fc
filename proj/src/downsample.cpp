#include "ssgc/downsample.hpp"

#include "ssgc/linalg.hpp"

namespace ssgc {

SSModel downsampled_ss_model(const ISSModel& model, int m) {
  if (m < 1) throw DimensionError("sampling multiple m must be >= 1");
  const Matrix& a = model.A();
  const Matrix bsb = linalg::symmetrize(model.K() * model.V() * model.K().transpose());
  Matrix q = bsb;
  for (int i = 2; i <= m; ++i) q = linalg::symmetrize(a * q * a.transpose() + bsb);
  const Matrix s = linalg::matrix_power(a, m - 1) * model.K() * model.V();
  return SSModel(linalg::matrix_power(a, m), model.C(), q, model.V(), s, model.partition());
}

ISSModel downsample_iss(const ISSModel& model, int m, const DareOptions& options) {
  if (m < 1) throw DimensionError("sampling multiple m must be >= 1");
  require_valid(model, true, "downsample_iss");
  if (m == 1) return model;
  const SSModel ss = downsampled_ss_model(model, m);
  const DareSolution sol = solve_dare(ss, options);
  return to_iss(ss, sol);
}

}  // namespace ssgc
