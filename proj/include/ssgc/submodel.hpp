#pragma once

#include "ssgc/dare.hpp"
#include "ssgc/model.hpp"

namespace ssgc {

// ISS model of the outputs z_t[first .. first + count) of a stationary joint
// ISS model. The DARE is solved for the SS model
//   (A, C_sub, [B_e B_e^T, V_sub, K V_{:,sub}]),   B_e = K chol(V),
// and the result keeps the joint state dimension. No partition is attached.
ISSModel extract_output_submodel(const ISSModel& joint, int first, int count,
                                 const DareOptions& options = {});

// X- or Y-block submodel of a partitioned joint model.
ISSModel extract_submodel(const ISSModel& joint, Block block, const DareOptions& options = {});

// f_X(lambda) = h_X Omega_X h_X^*. Same as spectrum_of_iss on the submodel.
SpectralCurve submodel_spectrum(const ISSModel& sub, std::span<const double> grid);

// Periodic-trapezoid value of (1/2pi) \int ln det f(lambda) d lambda.
// Throws ModelError if any value is not positive definite.
double log_det_spectrum_integral(const SpectralCurve& curve);

// ln det of a Hermitian positive definite matrix; throws ModelError otherwise.
double log_det_hermitian(const CMatrix& m);

}  // namespace ssgc
