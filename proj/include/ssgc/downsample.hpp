#pragma once

#include "ssgc/dare.hpp"
#include "ssgc/model.hpp"

namespace ssgc {

// ISS model (A^m, C, K_m, V_m) of the point-sampled process zbar_k = z_{mk}.
// m = 1 returns the input unchanged. The partition is preserved.
ISSModel downsample_iss(const ISSModel& model, int m, const DareOptions& options = {});

// The SS model (A^m, C, [Q_m, V, A^{m-1} K V]) whose DARE yields the
// downsampled ISS model; Q_m = A Q_{m-1} A^T + K V K^T, Q_1 = K V K^T.
SSModel downsampled_ss_model(const ISSModel& model, int m);

}  // namespace ssgc
