#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nhsense/closedform.hpp"
#include "nhsense/dynamics.hpp"
#include "nhsense/errors.hpp"
#include "nhsense/oracle.hpp"

using namespace nhsense;

namespace {

constexpr double kPi = std::numbers::pi;

void expect_means_match(const SteadyMeans& s, const Eigen::VectorXd& state, int n) {
  for (int i = 0; i < n; ++i) {
    EXPECT_LE(std::abs(s.xt(i) - state(i)), 1e-8 * (1 + std::abs(s.xt(i)))) << i;
    EXPECT_LE(std::abs(s.pt(i) - state(n + i)), 1e-8 * (1 + std::abs(s.pt(i)))) << i;
  }
}

}  // namespace

TEST(IntegrateMeans, MatchesAlgebraicMeansUnperturbed) {
  const ChainParams c = from_hopping(3, 1.0, 0.7, 1.0);
  const DriveSpec d(2.0, 0.0, 1);
  const PerturbationSpec p(PerturbationKind::Nhse, 0.0);
  const OdeRun run = integrate_means(c, d, p, 200.0, 0.01);
  EXPECT_TRUE(run.converged);
  expect_means_match(steady_means(c, d, p), run.state, 3);
}

TEST(IntegrateLinear, ZeroDriveStaysAtOrigin) {
  const ChainParams c = from_hopping(5, 1.0, 0.5, 1.0);
  const DynMatrix h = build_htilde(c, PerturbationSpec(PerturbationKind::LocalN, 0.1), 1);
  OdeOptions opt;
  opt.t_end = 50;
  opt.dt = 0.01;
  const OdeRun run = integrate_linear(h.data, Eigen::VectorXd::Zero(10), 1.0, opt);
  EXPECT_EQ(run.state.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_TRUE(run.converged);
}

TEST(IntegrateMeans, NhseLastSiteConverges) {
  const int n = 5;
  const ChainParams c = from_hopping(n, 1.0, 2.0 / (n - 1), 1.0);
  const DriveSpec d(3.0, 0.4, n);
  const PerturbationSpec p(PerturbationKind::Nhse, 0.01, kPi / 2);
  const double dt = std::min(0.01, max_stable_step(c, p));
  const OdeRun run = integrate_means(c, d, p, 2000.0, dt);
  ASSERT_TRUE(run.converged);
  const double scale = 1.0 * run.state.cwiseAbs().maxCoeff() + std::sqrt(2.0) * 3.0;
  EXPECT_LE(run.residual, 1e-10 * scale);
  expect_means_match(steady_means(c, d, p), run.state, n);
}

TEST(IntegrateMeans, TrajectoryIsSampled) {
  const ChainParams c = from_hopping(3, 1.0, 0.3, 1.0);
  const OdeRun run = integrate_means(c, DriveSpec(1.0, 0.0, 1),
                                     PerturbationSpec(PerturbationKind::Nhse, 0.0), 100.0, 0.01);
  ASSERT_GE(run.trajectory.size(), 2u);
  EXPECT_LE(static_cast<int>(run.trajectory.size()), 201);
  EXPECT_EQ(run.trajectory.front().cwiseAbs().maxCoeff(), 0.0);
  EXPECT_GT(run.t_end, 0.0);
  EXPECT_LE(run.t_end, 100.0 + 1e-9);
}

TEST(IntegrateMeans, StepSizePrecondition) {
  const ChainParams c = from_hopping(3, 1.0, 1.0, 1.0);
  const PerturbationSpec p(PerturbationKind::Nhse, 0.0);
  const DriveSpec d(1.0, 0.0, 1);
  const double h = max_stable_step(c, p);
  EXPECT_NEAR(h, 0.05 / std::exp(1.0), 1e-15);
  EXPECT_THROW(integrate_means(c, d, p, 100.0, 2 * h), StepSizeError);
  EXPECT_THROW(integrate_means(c, d, p, 10.0, h), StepSizeError);
  EXPECT_NO_THROW(integrate_means(c, d, p, 100.0, h));
}

TEST(IntegrateMeans, LongerHorizonDoesNotMoveSteadyState) {
  const ChainParams c = from_hopping(5, 1.0, 0.5, 1.0);
  const DriveSpec d(2.0, 0.9, 1);
  const PerturbationSpec p(PerturbationKind::LocalN, 0.05);
  const OdeRun r1 = integrate_means(c, d, p, 2000.0, 0.01);
  const OdeRun r2 = integrate_means(c, d, p, 4000.0, 0.01);
  ASSERT_TRUE(r1.converged);
  ASSERT_TRUE(r2.converged);
  const double scale = r1.state.cwiseAbs().maxCoeff();
  EXPECT_LE((r1.state - r2.state).cwiseAbs().maxCoeff(), 1e-10 * scale);
}

TEST(IntegrateMeans, RandomConfigurations) {
  std::mt19937_64 rng(20261016);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int done = 0, attempts = 0;
  while (done < 12 && attempts < 200) {
    ++attempts;
    const int n = 3 + 2 * static_cast<int>(u(rng) * 3);
    const double span = 3.0 * u(rng);
    const double k = 0.5 + u(rng);
    const ChainParams c = from_hopping(n, 0.5 + u(rng), span / (n - 1), k);
    const auto kind = u(rng) < 0.5 ? PerturbationKind::Nhse : PerturbationKind::LocalN;
    const PerturbationSpec p(kind, 0.3 * k * u(rng), kPi * u(rng));
    const DriveSpec d(1.0 + u(rng), 2 * kPi * u(rng), u(rng) < 0.5 ? 1 : n);
    const double dt = std::min(0.02, max_stable_step(c, p));
    try {
      const OdeRun run = integrate_means(c, d, p, 4000.0 / k, dt);
      if (!run.converged) continue;
      expect_means_match(steady_means(c, d, p), run.state, n);
      ++done;
    } catch (const DivergenceError&) {
    }
  }
  EXPECT_EQ(done, 12);
}

TEST(IntegrateLinear, DivergenceDetected) {
  Eigen::MatrixXd h(1, 1);
  h << 0.5;
  Eigen::VectorXd d(1);
  d << 1.0;
  OdeOptions opt;
  opt.t_end = 200;
  opt.dt = 0.01;
  EXPECT_THROW(integrate_linear(h, d, 1.0, opt), DivergenceError);
}

TEST(ColumnSolveInverse, Identity) {
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(6, 6);
  EXPECT_EQ(column_solve_inverse(id), id);
}

TEST(ColumnSolveInverse, DiagonallyDominant) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd m(10, 10);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) m(i, j) = u(rng);
  for (int i = 0; i < 10; ++i) m(i, i) += 12.0 * (u(rng) < 0 ? -1 : 1);
  const Eigen::MatrixXd a = column_solve_inverse(m);
  const Eigen::MatrixXd b = invert(DynMatrix{5, m}).data;
  EXPECT_LE((a - b).cwiseAbs().maxCoeff(), 1e-12 * b.cwiseAbs().maxCoeff());
}

TEST(ColumnSolveInverse, Singular) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
  m(0, 0) = 1;
  m(1, 1) = 1;
  EXPECT_THROW(column_solve_inverse(m), SingularError);
}

TEST(ColumnSolveInverse, MatchesExactFamiliesAtStrongPerturbation) {
  const int n = 5;
  for (double span : {0.0, 0.7, 3.0}) {
    const ChainParams c = from_hopping(n, 1.0, span / (n - 1), 1.0);
    const DynMatrix h = build_htilde(c, PerturbationSpec(PerturbationKind::Nhse, 0.3, 0.9), n);
    const Eigen::MatrixXd inv = column_solve_inverse(h.data);
    const Eigen::VectorXd col =
        expand_first_column(c, htilde_inverse_exact_first_column(c, 0.3, 0.9));
    const double scale = col.cwiseAbs().maxCoeff();
    for (int i = 0; i < 2 * n; ++i) EXPECT_LE(std::abs(inv(i, 0) - col(i)), 1e-12 * scale) << i;
  }
}

TEST(ColumnSolveInverse, AgreesWithLuInverse) {
  for (auto kind : {PerturbationKind::Nhse, PerturbationKind::LocalN})
    for (int n : {3, 7, 11}) {
      const ChainParams c = from_hopping(n, 1.0, 3.0 / (n - 1), 1.0);
      const DynMatrix h = build_htilde(c, PerturbationSpec(kind, 0.1, 0.4), 1);
      const Eigen::MatrixXd a = column_solve_inverse(h.data);
      const Eigen::MatrixXd b = invert(h).data;
      EXPECT_LE((a - b).cwiseAbs().maxCoeff(), 1e-10 * b.cwiseAbs().maxCoeff());
    }
}

TEST(FiniteDifference, MatchesCoefficients) {
  const ChainParams c = from_hopping(3, 1.0, 0.4, 1.0);
  const DriveSpec d(1.0, 0.0, 3);
  const PerturbationSpec p(PerturbationKind::Nhse, 0.02, 0.7);
  const OutputCoeffs ref = output_fluct_coeffs(c, d, p);
  const OutputCoeffs fd = finite_difference_coeffs(c, d, p, 1e-2, 2e3, 0.01);
  EXPECT_NEAR(fd.cxx, ref.cxx, 1e-6);
  EXPECT_NEAR(fd.cxp, ref.cxp, 1e-6);
  EXPECT_NEAR(fd.cpx, ref.cpx, 1e-6);
  EXPECT_NEAR(fd.cpp, ref.cpp, 1e-6);
}
