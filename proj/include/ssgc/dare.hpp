#pragma once

#include "ssgc/model.hpp"

namespace ssgc {

// Which solvability condition of the Riccati equation failed.
enum class DareCondition {
  Noise,            // R positive definite
  Stabilizability,  // (A_s, Q_s^{1/2}) stabilizable
  Detectability,    // (A, C) detectable
};

class DarePreconditionError : public ModelError {
 public:
  DarePreconditionError(DareCondition condition, const std::string& msg)
      : ModelError(msg), condition_(condition) {}
  DareCondition condition() const { return condition_; }

 private:
  DareCondition condition_;
};

enum class DareStart {
  // P_0 = 0: iterates are nondecreasing. Requires R positive definite.
  Zero,
  // P_0 = stationary state covariance (A stable). Iterates are
  // nonincreasing; admits singular R as long as the output process is
  // regular, e.g. outputs filtered with a leading zero tap.
  StationaryPrior,
};

struct DareOptions {
  double tol = 1e-12;
  long max_iter = 1'000'000;
  DareStart start = DareStart::Zero;
  bool check_preconditions = true;
};

struct DareSolution {
  Matrix P;  // steady-state one-step state error covariance
  Matrix K;  // (A P C^T + S) V^{-1}
  Matrix V;  // R + C P C^T
  long iterations = 0;
  double residual = 0.0;  // ||P - (A P A^T + Q - K V K^T)||_F
};

// One step of the Riccati recursion
//   V_t = R + C P_t C^T,  K_t = (A P_t C^T + S) V_t^{-1},
//   P_{t+1} = A P_t A^T + Q - K_t V_t K_t^T.
Matrix riccati_step(const SSModel& model, const Matrix& p);

double dare_residual(const SSModel& model, const Matrix& p);

// Throws DarePreconditionError naming the first of N, St, De that fails.
void check_dare_preconditions(const SSModel& model);

// Iterates the Riccati recursion to its fixed point. Convergence is declared
// when ||P_{t+1} - P_t||_F <= tol * max(1, ||P_t||_F).
DareSolution solve_dare(const SSModel& model, const DareOptions& options = {});

// Packages a DARE solution for `model` as an ISS model (A, C, K, V).
ISSModel to_iss(const SSModel& model, const DareSolution& solution);

}  // namespace ssgc
