#include "ssgc/var1_design.hpp"

#include "ssgc/linalg.hpp"

#include <cmath>

namespace ssgc {

namespace {

bool is_real(const Complex& z) { return z.imag() == 0.0; }

void validate(const Var1Design& d) {
  if (!(std::abs(d.rho) < 1.0)) throw ModelError("design rho must lie in (-1, 1)");
  if (d.xi_x < 0.0 || d.xi_y < 0.0) throw ModelError("design xi values must be nonnegative");
  if (std::abs(d.sign_gx) != 1 || std::abs(d.sign_gy) != 1) {
    throw DimensionError("design signs must be +1 or -1");
  }
  if (d.root_case != 1 && d.root_case != 2) throw DimensionError("root_case must be 1 or 2");
  if (!(std::abs(d.lambda1) < 1.0) || !(std::abs(d.lambda2) < 1.0)) {
    throw ModelError("design eigenvalues must lie inside the unit circle");
  }
  const bool both_real = is_real(d.lambda1) && is_real(d.lambda2);
  if (!both_real && std::abs(d.lambda2 - std::conj(d.lambda1)) > 1e-14) {
    throw ModelError("complex design eigenvalues must form a conjugate pair");
  }
}

}  // namespace

Var1Design Var1Design::from_polar(double modulus, double angle, double xi_x, double xi_y,
                                  double rho, int sign_gx, int sign_gy, int root_case) {
  Var1Design d;
  d.lambda1 = std::polar(modulus, angle);
  d.lambda2 = std::conj(d.lambda1);
  if (std::sin(angle) == 0.0) d.lambda1 = d.lambda2 = Complex(d.lambda1.real(), 0.0);
  d.xi_x = xi_x;
  d.xi_y = xi_y;
  d.rho = rho;
  d.sign_gx = sign_gx;
  d.sign_gy = sign_gy;
  d.root_case = root_case;
  return d;
}

double Var1Design::gamma_x() const { return sign_gx * std::sqrt(xi_x / (1.0 - rho * rho)); }
double Var1Design::gamma_y() const { return sign_gy * std::sqrt(xi_y / (1.0 - rho * rho)); }

ISSModel Var1Model::to_iss() const {
  const Matrix coeffs[] = {A};
  return var_to_iss(coeffs, sigma, JointPartition(1, 1));
}

DesignCase design_case(int index) {
  if (index < 0 || index > 7) throw DimensionError("design case index must be in 0..7");
  return {index / 4 + 1, (index & 2) ? -1 : 1, (index & 1) ? -1 : 1};
}

Var1Model design_var1(const Var1Design& d) {
  validate(d);
  const double gx = d.gamma_x();
  const double gy = d.gamma_y();
  const double trace = (d.lambda1 + d.lambda2).real();
  // trace^2 - 4 det = (lambda1 - lambda2)^2 - 4 gamma_x gamma_y
  const double disc = ((d.lambda1 - d.lambda2) * (d.lambda1 - d.lambda2)).real() - 4.0 * gx * gy;
  if (disc < 0.0) {
    const bool complex_pair = !is_real(d.lambda1);
    const double sign = gx * gy;
    std::string why;
    if (complex_pair && sign >= 0.0) {
      why = "complex eigenvalues require sign(gamma_x gamma_y) < 0";
    } else if (complex_pair) {
      why = "complex eigenvalues with sign(gamma_x gamma_y) < 0: xi_x, xi_y too small for the "
            "imaginary part of the eigenvalues";
    } else {
      why = "real eigenvalues with sign(gamma_x gamma_y) > 0: xi_x, xi_y too large";
    }
    throw ModelError("infeasible VAR(1) design (" + why + ")");
  }
  const double root = std::sqrt(disc);
  const double r_plus = 0.5 * (trace + root);
  const double r_minus = 0.5 * (trace - root);

  Var1Model m;
  m.A = Matrix(2, 2);
  const double phi_x = d.root_case == 1 ? r_plus : r_minus;
  const double phi_y = d.root_case == 1 ? r_minus : r_plus;
  m.A << phi_x, gx, gy, phi_y;
  m.sigma = Matrix(2, 2);
  m.sigma << 1.0, d.rho, d.rho, 1.0;
  return m;
}

ClosedFormGem var1_gem_closed_form(const Var1Model& model, Direction direction) {
  if (model.A.rows() != 2 || model.A.cols() != 2) throw DimensionError("VAR(1) A must be 2x2");
  if (std::abs(model.sigma(0, 0) - 1.0) > 1e-12 || std::abs(model.sigma(1, 1) - 1.0) > 1e-12) {
    throw DimensionError("closed form assumes unit innovation variances");
  }
  if (linalg::spectral_radius(model.A) >= 1.0) throw ModelError("VAR(1) model is not stable");
  const double rho = model.rho();
  // Y->X: gamma = coefficient of y_{t-1} in the x equation, phi = own-lag of y.
  const bool y_to_x = direction == Direction::YtoX;
  const double gamma = y_to_x ? model.A(0, 1) : model.A(1, 0);
  const double phi_other = y_to_x ? model.A(1, 1) : model.A(0, 0);
  const double xi = (1.0 - rho * rho) * gamma * gamma;
  const double dd = phi_other - rho * gamma;
  const double g0 = 1.0 + xi + dd * dd;
  ClosedFormGem out;
  out.variance_ratio = 0.5 * (g0 + std::sqrt(g0 * g0 - 4.0 * dd * dd));
  out.value = std::log(out.variance_ratio);
  out.theta = dd / out.variance_ratio;
  return out;
}

}  // namespace ssgc
