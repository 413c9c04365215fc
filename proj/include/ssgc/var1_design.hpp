#pragma once

#include "ssgc/gem.hpp"
#include "ssgc/model.hpp"

namespace ssgc {

// Bivariate VAR(1) scenario with unit innovation variances:
//   A = [[phi_x, gamma_x], [gamma_y, phi_y]],  Sigma = [[1, rho], [rho, 1]],
// with prescribed eigenvalues of A and GEM lower bounds
//   F_{Y->X} >= ln(1 + xi_x),  F_{X->Y} >= ln(1 + xi_y),
//   gamma_x = sign_gx sqrt(xi_x / (1 - rho^2)),  gamma_y likewise.
struct Var1Design {
  Complex lambda1;
  Complex lambda2;
  double xi_x = 0.0;
  double xi_y = 0.0;
  double rho = 0.0;
  int sign_gx = 1;
  int sign_gy = 1;
  // 1: (phi_x, phi_y) = (r+, r-);  2: (phi_x, phi_y) = (r-, r+).
  int root_case = 1;

  // Conjugate pair r e^{+-j theta}.
  static Var1Design from_polar(double modulus, double angle, double xi_x, double xi_y, double rho,
                               int sign_gx, int sign_gy, int root_case);

  double gamma_x() const;
  double gamma_y() const;
};

struct Var1Model {
  Matrix A;
  Matrix sigma;

  double rho() const { return sigma(0, 1); }
  ISSModel to_iss() const;
};

// The eight (root_case, sign_gx, sign_gy) selections in a fixed order:
// index = (root_case - 1) * 4 + (sign_gx < 0) * 2 + (sign_gy < 0).
struct DesignCase {
  int root_case;
  int sign_gx;
  int sign_gy;
};
DesignCase design_case(int index);

// Throws ModelError naming the infeasible case when the quadratic for
// (phi_x, phi_y) has no real roots.
Var1Model design_var1(const Var1Design& design);

struct ClosedFormGem {
  double value = 0.0;           // F for the requested direction
  double variance_ratio = 1.0;  // sigma_x^2 / sigma_a^2
  double theta = 0.0;           // MA(1) coefficient of the marginal ARMA(2,1)
};

// Exact F_{Y->X} (or F_{X->Y}) of a stable bivariate VAR(1) with unit
// innovation variances, from the ARMA(2,1) form of the marginal spectrum.
ClosedFormGem var1_gem_closed_form(const Var1Model& model, Direction direction);

}  // namespace ssgc
