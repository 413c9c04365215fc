#include "support.hpp"

#include "ssgc/model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace ssgc {
namespace {

using namespace ssgc::testing;

Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

bool controllable_by_rank(const Matrix& a, const Matrix& b) {
  const Eigen::Index n = a.rows();
  Matrix krylov(n, n * b.cols());
  Matrix blk = b;
  for (Eigen::Index r = 0; r < n; ++r) {
    krylov.middleCols(r * b.cols(), b.cols()) = blk;
    blk = a * blk;
  }
  return linalg::numerical_rank(krylov, 1e-9) == n;
}

TEST(JointPartition, RejectsEmptyBlocks) {
  EXPECT_THROW(JointPartition(0, 1), DimensionError);
  EXPECT_THROW(JointPartition(2, 0), DimensionError);
  EXPECT_EQ(JointPartition(2, 3).p(), 5);
}

TEST(Pbh, UnreachableUnstableModeIsNotStabilizable) {
  const PbhResult r = pbh_test(mat({{1.5, 0}, {0, 0.5}}), mat({{0}, {1}}), PbhMode::Stabilizable);
  EXPECT_FALSE(r.passed);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_NEAR(r.witness->real(), 1.5, 1e-12);
}

TEST(Pbh, StableMatrixIsStabilizableWithZeroInput) {
  EXPECT_TRUE(pbh_test(mat({{0.5, 0}, {0, 0.3}}), mat({{0}, {0}}), PbhMode::Stabilizable).passed);
  EXPECT_FALSE(pbh_test(mat({{0.5, 0}, {0, 0.3}}), mat({{0}, {0}}), PbhMode::Controllable).passed);
}

TEST(Pbh, ShiftChainIsControllable) {
  const Matrix a = mat({{0, 1}, {0, 0}});
  const Matrix b = mat({{0}, {1}});
  EXPECT_TRUE(controllable_by_rank(a, b));
  EXPECT_TRUE(pbh_test(a, b, PbhMode::Controllable).passed);
  EXPECT_FALSE(pbh_test(a, mat({{1}, {0}}), PbhMode::Controllable).passed);
}

TEST(Pbh, DetectableUsesTransposedPair) {
  // (A, C) with the unstable mode invisible in C.
  const Matrix a = mat({{1.2, 0}, {0, 0.4}});
  const Matrix c = mat({{0, 1}});
  EXPECT_FALSE(pbh_test(a, c.transpose(), PbhMode::Detectable).passed);
  EXPECT_TRUE(pbh_test(a, mat({{1, 0}}).transpose(), PbhMode::Detectable).passed);
}

TEST(Pbh, RejectsBadShapes) {
  EXPECT_THROW(pbh_test(Matrix::Zero(2, 3), Matrix::Zero(2, 1), PbhMode::Controllable),
               DimensionError);
  EXPECT_THROW(pbh_test(Matrix::Zero(2, 2), Matrix::Zero(3, 1), PbhMode::Controllable),
               DimensionError);
}

TEST(Pbh, AgreesWithControllabilityRankOn200Pairs) {
  Rng rng(101);
  int uncontrollable = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = uniform_int(1, 6, rng);
    const int m = uniform_int(1, 2, rng);
    Matrix a = randn(n, n, rng);
    Matrix b = randn(n, m, rng);
    if (trial % 2 == 1 && n > 1) {
      // Kalman decomposition with an unreachable block, rotated by a random
      // orthogonal matrix.
      const int nc = uniform_int(1, n - 1, rng);
      a.bottomLeftCorner(n - nc, nc).setZero();
      b.bottomRows(n - nc).setZero();
      const Eigen::HouseholderQR<Matrix> qr(randn(n, n, rng));
      const Matrix t = qr.householderQ();
      a = t * a * t.transpose();
      b = t * b;
    }
    const bool oracle = controllable_by_rank(a, b);
    if (!oracle) ++uncontrollable;
    EXPECT_EQ(pbh_test(a, b, PbhMode::Controllable).passed, oracle) << "trial " << trial;
  }
  EXPECT_GT(uncontrollable, 50);
}

TEST(Validate, ScenarioModelPassesAllChecks) {
  const ValidationReport r = validate_iss(scenario_model(1), true);
  EXPECT_TRUE(r.passed());
  EXPECT_TRUE(r.v_positive_definite.passed);
  EXPECT_TRUE(r.detectable.passed);
  EXPECT_TRUE(r.stabilizable.passed);
  EXPECT_TRUE(r.a_stable.passed);
  EXPECT_TRUE(r.min_phase.passed);
  EXPECT_NEAR(r.a_stable.witness, 0.95, 5e-3);
}

TEST(Validate, UnstableAFailsOnlyWhenStationarityRequired) {
  const ISSModel m(mat({{1.1}}), mat({{1}}), mat({{0}}), mat({{1}}));
  const ValidationReport r = validate_iss(m, true);
  EXPECT_FALSE(r.passed());
  EXPECT_FALSE(r.a_stable.passed);
  EXPECT_NEAR(r.a_stable.witness, 1.1, 1e-12);
  EXPECT_FALSE(validate_iss(m, false).a_stable.required);
  EXPECT_THROW(require_valid(m, true, "test"), ModelError);
}

TEST(Validate, UnstableInverseFails) {
  const ISSModel m(mat({{0}}), mat({{1}}), mat({{-2}}), mat({{1}}));
  const ValidationReport r = validate_iss(m, false);
  EXPECT_FALSE(r.passed());
  EXPECT_FALSE(r.min_phase.passed);
  EXPECT_NEAR(r.min_phase.witness, 2.0, 1e-12);
}

TEST(Validate, NonPositiveVFails) {
  const ISSModel m(mat({{0.5}}), mat({{1}}), mat({{0.2}}), mat({{-1}}));
  EXPECT_FALSE(validate_iss(m, true).v_positive_definite.passed);
}

TEST(VarToIss, ScalarAr1) {
  const Matrix coeffs[] = {mat({{0.5}})};
  const ISSModel m = var_to_iss(coeffs, mat({{1}}));
  EXPECT_EQ(m.A(), mat({{0.5}}));
  EXPECT_EQ(m.C(), mat({{0.5}}));
  EXPECT_EQ(m.K(), mat({{1}}));
  EXPECT_EQ(m.V(), mat({{1}}));
  EXPECT_NEAR(std::abs(transfer_function(m, 0.0)(0, 0) - Complex(2.0, 0.0)), 0.0, 1e-14);
}

TEST(VarToIss, ZeroCoefficientIsWhiteNoise) {
  const Matrix coeffs[] = {Matrix::Zero(2, 2)};
  const ISSModel m = var_to_iss(coeffs, Matrix::Identity(2, 2));
  for (double lambda : {-2.0, 0.0, 1.3}) {
    EXPECT_LT(max_abs(transfer_function(m, lambda) - CMatrix::Identity(2, 2)), 1e-15);
  }
}

TEST(VarToIss, RejectsUnstableOrBadSigma) {
  const Matrix unstable[] = {mat({{1.01}})};
  EXPECT_THROW(var_to_iss(unstable, mat({{1}})), ModelError);
  const Matrix ok[] = {mat({{0.3}})};
  EXPECT_THROW(var_to_iss(ok, mat({{0}})), ModelError);
}

TEST(VarToIss, TransferFunctionMatchesVarPolynomial) {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int p = uniform_int(1, 3, rng);
    const int order = uniform_int(1, 3, rng);
    std::vector<Matrix> coeffs;
    ISSModel m = [&] {
      for (;;) {
        coeffs.clear();
        for (int i = 0; i < order; ++i) coeffs.push_back(randn(p, p, rng) * 0.3);
        try {
          return var_to_iss(coeffs, random_pd(p, rng));
        } catch (const ModelError&) {
        }
      }
    }();
    for (int k = 0; k < 64; ++k) {
      const double lambda = uniform(-std::numbers::pi, std::numbers::pi, rng);
      CMatrix poly = CMatrix::Identity(p, p);
      for (int i = 0; i < order; ++i) {
        poly -= std::polar(1.0, -lambda * (i + 1)) * coeffs[static_cast<std::size_t>(i)].cast<Complex>();
      }
      const CMatrix expected = poly.inverse();
      const CMatrix got = transfer_function(m, lambda);
      EXPECT_LE((got - expected).norm(), 1e-10 * expected.norm());
    }
  }
}

TEST(Spectrum, WhiteModelIsConstant) {
  const Matrix v = mat({{2, 0.3}, {0.3, 1}});
  const ISSModel m(mat({{0.4}}), Matrix::Zero(2, 1), Matrix::Zero(1, 2), v);
  const SpectralCurve s = spectrum_of_iss(m, uniform_grid(32));
  for (const CMatrix& f : s.values) EXPECT_LT(max_abs(f - v.cast<Complex>()), 1e-15);
}

TEST(Spectrum, ScalarAr1AtZero) {
  const Matrix coeffs[] = {mat({{0.5}})};
  const ISSModel m = var_to_iss(coeffs, mat({{1}}));
  const std::vector<double> grid = {0.0};
  EXPECT_NEAR(spectrum_of_iss(m, grid).values[0](0, 0).real(), 4.0, 1e-13);
}

TEST(Spectrum, ScenarioAtZeroMatchesDirectFormula) {
  const Scenario s = scenario(1);
  const ISSModel m = scenario_model(1);
  const std::vector<double> grid = {0.0};
  const Matrix ia = (Matrix::Identity(2, 2) - s.a).inverse();
  const Matrix expected = ia * m.V() * ia.transpose();
  EXPECT_LT(max_abs(spectrum_of_iss(m, grid).values[0] - expected.cast<Complex>()), 1e-12);
}

TEST(Spectrum, HermitianPsdOnGrid) {
  Rng rng(11);
  std::vector<ISSModel> models = {scenario_model(1)};
  for (int i = 0; i < 20; ++i) models.push_back(random_iss(rng));
  for (const ISSModel& m : models) {
    const SpectralCurve s = spectrum_of_iss(m, uniform_grid(512));
    for (const CMatrix& f : s.values) {
      EXPECT_LT(max_abs(f - CMatrix(f.adjoint())), 1e-12);
      Eigen::SelfAdjointEigenSolver<CMatrix> es(f);
      EXPECT_GT(es.eigenvalues().minCoeff(), -1e-10);
    }
  }
}

TEST(Grid, UniformGridAndWeights) {
  const std::vector<double> g = uniform_grid(8);
  ASSERT_EQ(g.size(), 8u);
  EXPECT_DOUBLE_EQ(g[0], -std::numbers::pi);
  EXPECT_NEAR(g[4], 0.0, 1e-15);
  const std::vector<double> w = periodic_trapezoid_weights(g);
  double total = 0.0;
  for (double x : w) {
    EXPECT_NEAR(x, 1.0 / 8.0, 1e-15);
    total += x;
  }
  EXPECT_NEAR(total, 1.0, 1e-15);
  const std::vector<double> bad = {0.0, -1.0};
  EXPECT_THROW(periodic_trapezoid_weights(bad), DimensionError);
}

TEST(Autocovariance, WhiteNoise) {
  const Matrix v = mat({{1, 0.5}, {0.5, 2}});
  const ISSModel m(mat({{0.3}}), Matrix::Zero(2, 1), Matrix::Zero(1, 2), v);
  const AutocovarianceSequence g = autocovariance_of_iss(m, 3);
  EXPECT_LT(max_abs(g.at(0) - v), 1e-15);
  for (int h = 1; h <= 3; ++h) EXPECT_LT(max_abs(g.at(h)), 1e-15);
}

TEST(Autocovariance, HandSolvedScalar) {
  const ISSModel m(mat({{0.5}}), mat({{1}}), mat({{1}}), mat({{1}}));
  const AutocovarianceSequence g = autocovariance_of_iss(m, 2);
  EXPECT_NEAR(state_covariance(m)(0, 0), 4.0 / 3.0, 1e-13);
  EXPECT_NEAR(g.at(0)(0, 0), 7.0 / 3.0, 1e-13);
  EXPECT_NEAR(g.at(1)(0, 0), 5.0 / 3.0, 1e-13);
  EXPECT_NEAR(g.at(2)(0, 0), 5.0 / 6.0, 1e-13);
}

TEST(Autocovariance, MatchesQuadratureInversionOfSpectrum) {
  Rng rng(13);
  const std::vector<double> grid = uniform_grid(4096);
  const std::vector<double> w = periodic_trapezoid_weights(grid);
  for (int trial = 0; trial < 10; ++trial) {
    const ISSModel m = random_iss(uniform_int(1, 5, rng), 1, uniform_int(1, 2, rng), rng, 0.9);
    const SpectralCurve s = spectrum_of_iss(m, grid);
    const AutocovarianceSequence g = autocovariance_of_iss(m, 10);
    for (int h = 0; h <= 10; ++h) {
      CMatrix q = CMatrix::Zero(m.output_dim(), m.output_dim());
      for (std::size_t i = 0; i < grid.size(); ++i) {
        q += w[i] * std::polar(1.0, grid[i] * h) * s.values[i];
      }
      EXPECT_LT(max_abs(q - g.at(h).cast<Complex>()), 1e-6) << "trial " << trial << " lag " << h;
    }
  }
}

TEST(Models, ShapeChecks) {
  EXPECT_THROW(ISSModel(Matrix::Zero(2, 2), Matrix::Zero(1, 3), Matrix::Zero(2, 1), mat({{1}})),
               DimensionError);
  EXPECT_THROW(SSModel(mat({{0.5}}), mat({{1}}), mat({{1}}), mat({{1}}), Matrix::Zero(2, 1)),
               DimensionError);
  EXPECT_THROW(ISSModel(mat({{0.5}}), Matrix::Zero(2, 1), Matrix::Zero(1, 2),
                        Matrix::Identity(2, 2), JointPartition(2, 1)),
               DimensionError);
  const ISSModel m(mat({{0.5}}), mat({{1}}), mat({{1}}), mat({{1}}));
  EXPECT_THROW(m.require_partition(), DimensionError);
  const SSModel ss = m.as_ss_model();
  EXPECT_EQ(ss.Q(), mat({{1}}));
  EXPECT_EQ(ss.S(), mat({{1}}));
}

}  // namespace
}  // namespace ssgc
