#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <random>

#include "wenlr/numerics.hpp"

using namespace wenlr;

namespace {

Eigen::MatrixXd random_symmetric(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = g(rng);
  }
  return 0.5 * (a + a.transpose());
}

Eigen::MatrixXd random_spd(int n, unsigned seed) {
  Eigen::MatrixXd a = random_symmetric(n, seed);
  return a * a.transpose() + n * Eigen::MatrixXd::Identity(n, n) * 0.1;
}

LinearOperator dense_operator(const Eigen::MatrixXd& a) {
  return {static_cast<std::size_t>(a.rows()), [a](std::span<const double> in, std::span<double> out) {
            Eigen::Map<const Eigen::VectorXd> x(in.data(), static_cast<Eigen::Index>(in.size()));
            Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size())) = a * x;
          }};
}

}  // namespace

TEST(SymEig, IdentityAndDiagonal) {
  const SymEig id = sym_eig(Eigen::Matrix3d::Identity());
  EXPECT_EQ(id.values, Eigen::Vector3d(1, 1, 1));
  EXPECT_LE((id.vectors.transpose() * id.vectors - Eigen::Matrix3d::Identity()).norm(), 1e-12);

  const SymEig d = sym_eig(Eigen::Vector3d(3, 1, 2).asDiagonal().toDenseMatrix());
  EXPECT_DOUBLE_EQ(d.values(0), 3);
  EXPECT_DOUBLE_EQ(d.values(1), 2);
  EXPECT_DOUBLE_EQ(d.values(2), 1);
  EXPECT_NEAR(d.vectors(0, 0), 1.0, 1e-14);
  EXPECT_NEAR(d.vectors(2, 1), 1.0, 1e-14);
  EXPECT_NEAR(d.vectors(1, 2), 1.0, 1e-14);
}

TEST(SymEig, RandomReconstructionOrderingAndSigns) {
  for (unsigned seed = 0; seed < 10; ++seed) {
    const Eigen::MatrixXd a = random_symmetric(25, seed);
    const SymEig e = sym_eig(a);
    const Eigen::MatrixXd rec = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
    EXPECT_LE((rec - a).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LE((e.vectors.transpose() * e.vectors - Eigen::MatrixXd::Identity(25, 25)).cwiseAbs().maxCoeff(),
              1e-10);
    EXPECT_NEAR(e.values.sum(), a.trace(), 1e-9 * std::max(1.0, std::abs(a.trace())));
    for (int k = 0; k < 25; ++k) {
      EXPECT_LE((a * e.vectors.col(k) - e.values(k) * e.vectors.col(k)).norm(), 1e-8 * a.norm());
      if (k > 0) EXPECT_GE(e.values(k - 1), e.values(k));
      Eigen::Index arg = 0;
      e.vectors.col(k).cwiseAbs().maxCoeff(&arg);
      EXPECT_GT(e.vectors(arg, k), 0.0);
    }
  }
}

TEST(SymEig, RejectsBadInput) {
  Eigen::Matrix2d asym;
  asym << 1, 2, 0, 1;
  EXPECT_THROW(sym_eig(asym), std::invalid_argument);
  Eigen::Matrix2d nan = Eigen::Matrix2d::Identity();
  nan(0, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(sym_eig(nan), std::invalid_argument);
}

TEST(RidgeSolve, SmallExamples) {
  const Eigen::Vector2d r(4, 6);
  EXPECT_EQ(ridge_solve(Eigen::Matrix2d::Identity(), r), r);
  const Eigen::VectorXd z = ridge_solve(2.0 * Eigen::Matrix2d::Identity(), r);
  EXPECT_DOUBLE_EQ(z(0), 2.0);
  EXPECT_DOUBLE_EQ(z(1), 3.0);
}

TEST(RidgeSolve, RandomResidualAndStationarity) {
  for (unsigned seed = 0; seed < 10; ++seed) {
    const Eigen::MatrixXd g = random_spd(16, seed);
    const Eigen::VectorXd r = Eigen::VectorXd::LinSpaced(16, -1, 2);
    const Eigen::VectorXd z = ridge_solve(g, r);
    // gradient of 0.5 z'Gz - r'z
    EXPECT_LE((g * z - r).norm() / r.norm(), 1e-10);
    EXPECT_LE((g * z - r).norm(), 1e-8 * r.norm());
  }
}

TEST(RidgeSolve, RejectsIndefinite) {
  Eigen::Matrix2d g;
  g << 1, 0, 0, -1;
  EXPECT_THROW(ridge_solve(g, Eigen::Vector2d(1, 1)), NumericalError);
}

TEST(ConjugateGradient, IdentityConvergesInOneStep) {
  const auto op = dense_operator(Eigen::MatrixXd::Identity(5, 5));
  std::vector<double> rhs{1, 2, 3, 4, 5}, x(5, 0.0);
  const CgResult res = conjugate_gradient(op, rhs, x);
  EXPECT_EQ(res.iterations, 1);
  EXPECT_TRUE(res.converged);
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(x[i], rhs[i], 1e-14);
}

TEST(ConjugateGradient, DiagonalMatchesDirectSolve) {
  const Eigen::VectorXd d = Eigen::VectorXd::LinSpaced(10, 1, 10);
  const auto op = dense_operator(d.asDiagonal().toDenseMatrix());
  std::vector<double> rhs(10, 1.0), x(10, 0.0);
  conjugate_gradient(op, rhs, x, {1e-10, 100});
  for (int i = 0; i < 10; ++i) EXPECT_NEAR(x[i], 1.0 / d(i), 1e-8);
}

TEST(ConjugateGradient, ExactWarmStartTakesNoIterations) {
  const Eigen::MatrixXd a = random_spd(8, 3);
  const Eigen::VectorXd sol = Eigen::VectorXd::Ones(8);
  const Eigen::VectorXd b = a * sol;
  std::vector<double> rhs(b.data(), b.data() + 8), x(8, 1.0);
  const CgResult res = conjugate_gradient(dense_operator(a), rhs, x);
  EXPECT_EQ(res.iterations, 0);
  EXPECT_LE(res.relative_residual, 1e-6);
}

TEST(ConjugateGradient, ZeroRhsGivesZero) {
  std::vector<double> rhs(4, 0.0), x{1, 2, 3, 4};
  conjugate_gradient(dense_operator(Eigen::MatrixXd::Identity(4, 4)), rhs, x);
  for (double v : x) EXPECT_EQ(v, 0.0);
}

TEST(ConjugateGradient, RandomSpdMatchesDenseOracle) {
  for (int n : {20, 80, 200}) {
    const Eigen::MatrixXd a = random_spd(n, static_cast<unsigned>(n));
    const Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(n, -3, 5);
    const Eigen::VectorXd oracle = a.ldlt().solve(b);
    for (bool precondition : {false, true}) {
      std::vector<double> rhs(b.data(), b.data() + n), x(n, 0.0), inv;
      if (precondition) {
        for (int i = 0; i < n; ++i) inv.push_back(1.0 / a(i, i));
      }
      const CgResult res = conjugate_gradient(dense_operator(a), rhs, x, {1e-10, 2000}, inv);
      EXPECT_TRUE(res.converged);
      const Eigen::VectorXd got = Eigen::Map<Eigen::VectorXd>(x.data(), n);
      EXPECT_LE((got - oracle).norm() / oracle.norm(), 1e-6);
    }
  }
}

TEST(ConjugateGradient, ReportsNonConvergence) {
  const Eigen::MatrixXd a = random_spd(50, 9);
  std::vector<double> rhs(50, 1.0), x(50, 0.0);
  const CgResult res = conjugate_gradient(dense_operator(a), rhs, x, {1e-14, 2});
  EXPECT_FALSE(res.converged);
  EXPECT_EQ(res.iterations, 2);
}

TEST(ConjugateGradient, RejectsIndefiniteAndNan) {
  Eigen::MatrixXd neg = -Eigen::MatrixXd::Identity(3, 3);
  std::vector<double> rhs{1, 1, 1}, x(3, 0.0);
  EXPECT_THROW(conjugate_gradient(dense_operator(neg), rhs, x), NumericalError);
  std::vector<double> bad{1, std::numeric_limits<double>::quiet_NaN(), 1};
  std::fill(x.begin(), x.end(), 0.0);
  EXPECT_THROW(conjugate_gradient(dense_operator(Eigen::MatrixXd::Identity(3, 3)), bad, x),
               NumericalError);
}
