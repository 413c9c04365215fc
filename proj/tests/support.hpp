#pragma once

#include "ssgc/linalg.hpp"
#include "ssgc/model.hpp"

#include <random>

namespace ssgc::testing {

using Rng = std::mt19937_64;

inline Matrix randn(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = n(rng);
  return m;
}

inline double uniform(double lo, double hi, Rng& rng) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(int lo, int hi, Rng& rng) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline Matrix random_pd(Eigen::Index p, Rng& rng, double floor = 0.2) {
  const Matrix l = randn(p, p, rng);
  return linalg::symmetrize(l * l.transpose() / static_cast<double>(p) +
                            floor * Matrix::Identity(p, p));
}

inline Matrix random_stable(Eigen::Index n, double radius, Rng& rng) {
  Matrix a = randn(n, n, rng);
  const double r = linalg::spectral_radius(a);
  if (r > 0.0) a *= radius / r;
  return a;
}

// Stationary ISS model with rho(A) <= max_radius and rho(A - KC) < 1.
inline ISSModel random_iss(int n, int px, int py, Rng& rng, double max_radius = 0.9) {
  const int p = px + py;
  for (;;) {
    const Matrix a = random_stable(n, uniform(0.2, max_radius, rng), rng);
    const Matrix c = randn(p, n, rng);
    Matrix k = randn(n, p, rng) * uniform(0.1, 1.0, rng);
    for (int shrink = 0; shrink < 30; ++shrink) {
      if (linalg::spectral_radius(a - k * c) < 0.97) {
        return ISSModel(a, c, k, random_pd(p, rng), JointPartition(px, py));
      }
      k *= 0.7;
    }
  }
}

inline ISSModel random_iss(Rng& rng) {
  const int px = uniform_int(1, 2, rng);
  const int py = uniform_int(1, 2, rng);
  return random_iss(uniform_int(1, 6, rng), px, py, rng);
}

// Joint model in which Y does not strongly Granger-cause X: block-lower-
// triangular A and K, block-diagonal C and V.
inline ISSModel random_y_not_causing_x(int nx, int ny, int px, int py, Rng& rng) {
  const int n = nx + ny;
  const int p = px + py;
  for (;;) {
    Matrix a = Matrix::Zero(n, n);
    a.topLeftCorner(nx, nx) = random_stable(nx, uniform(0.2, 0.9, rng), rng);
    a.bottomRightCorner(ny, ny) = random_stable(ny, uniform(0.2, 0.9, rng), rng);
    a.bottomLeftCorner(ny, nx) = randn(ny, nx, rng) * 0.5;
    Matrix c = Matrix::Zero(p, n);
    c.topLeftCorner(px, nx) = randn(px, nx, rng);
    c.bottomRightCorner(py, ny) = randn(py, ny, rng);
    Matrix k = Matrix::Zero(n, p);
    k.topLeftCorner(nx, px) = randn(nx, px, rng) * 0.5;
    k.bottomLeftCorner(ny, px) = randn(ny, px, rng) * 0.5;
    k.bottomRightCorner(ny, py) = randn(ny, py, rng) * 0.5;
    Matrix v = Matrix::Zero(p, p);
    v.topLeftCorner(px, px) = random_pd(px, rng);
    v.bottomRightCorner(py, py) = random_pd(py, rng);
    for (int shrink = 0; shrink < 30; ++shrink) {
      if (linalg::spectral_radius(a - k * c) < 0.97) {
        return ISSModel(a, c, k, v, JointPartition(px, py));
      }
      k *= 0.7;
    }
  }
}

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().maxCoeff();
}

// Coefficient matrices of the four reference sampling-interval scenarios, with
// the (1,2) entry being the coefficient of y_{t-1} in the x equation.
struct Scenario {
  Matrix a;
  double rho;
};

inline Scenario scenario(int table) {
  Matrix a(2, 2);
  double rho = 0.0;
  switch (table) {
    case 1: a << -0.204, -1.24, 0.452, -1.69; rho = 0.2; break;
    case 2: a << 1.69, -1.24, 0.452, 0.204; rho = 0.2; break;
    case 3: a << 1.45, 1.18, -0.84, -1.16; rho = 0.7; break;
    case 4: a << 1.883, -0.408, 2.236, 0.036; rho = -0.8; break;
    default: throw std::invalid_argument("unknown scenario");
  }
  return {a, rho};
}

inline ISSModel scenario_model(int table) {
  const Scenario s = scenario(table);
  Matrix sigma(2, 2);
  sigma << 1.0, s.rho, s.rho, 1.0;
  const Matrix coeffs[] = {s.a};
  return var_to_iss(coeffs, sigma, JointPartition(1, 1));
}

}  // namespace ssgc::testing
