#include <gtest/gtest.h>

#include <algorithm>
#include <functional>

#include <Eigen/Dense>
#include <random>

#include "test_util.hpp"
#include "wenlr/dictionary.hpp"
#include "wenlr/image_io.hpp"
#include "wenlr/patch_search.hpp"

using namespace wenlr;

namespace {

Eigen::MatrixXd random_samples(int dim, int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXd s(dim, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < dim; ++i) s(i, j) = g(rng) * (1.0 + 0.2 * i);
  }
  return s;
}

}  // namespace

TEST(SampleCovariance, MatchesDefinition) {
  const Eigen::MatrixXd s = random_samples(6, 40, 1);
  Eigen::VectorXd mean;
  const Eigen::MatrixXd c = sample_covariance(s, &mean);
  Eigen::MatrixXd ref = Eigen::MatrixXd::Zero(6, 6);
  const Eigen::VectorXd m = s.rowwise().mean();
  for (int j = 0; j < 40; ++j) ref += (s.col(j) - m) * (s.col(j) - m).transpose();
  ref /= 40.0;
  EXPECT_LE((c - ref).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LE((mean - m).norm(), 1e-14);
}

TEST(TrainSubdictionary, EqualSamplesGiveIdentity) {
  Eigen::MatrixXd s(4, 5);
  for (int j = 0; j < 5; ++j) s.col(j) = Eigen::Vector4d(0.1, 0.2, 0.3, 0.4);
  const SubDictionary d = train_subdictionary(s);
  EXPECT_EQ(d.basis, Eigen::MatrixXd::Identity(4, 4));
  EXPECT_EQ(d.mean, s.col(0));
}

TEST(TrainSubdictionary, SingleAxisVariation) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Constant(5, 10, 0.5);
  for (int j = 0; j < 10; ++j) s(2, j) += 0.1 * j;
  const SubDictionary d = train_subdictionary(s);
  EXPECT_NEAR(std::abs(d.basis(0, 2)), 1.0, 1e-12);
  EXPECT_GT(d.basis(0, 2), 0.0);
}

TEST(TrainSubdictionary, RejectsTooFewSamples) {
  EXPECT_THROW(train_subdictionary(Eigen::MatrixXd::Ones(25, 1)), std::invalid_argument);
}

TEST(TrainSubdictionary, RandomInvariants) {
  for (unsigned seed = 0; seed < 10; ++seed) {
    const Eigen::MatrixXd s = random_samples(25, 60, seed);
    const SubDictionary d = train_subdictionary(s);
    const Eigen::MatrixXd c = sample_covariance(s);
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(25, 25);
    EXPECT_LE((d.basis * d.basis.transpose() - id).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE((d.basis.transpose() * d.basis - id).cwiseAbs().maxCoeff(), 1e-10);
    Eigen::MatrixXd proj = d.basis * c * d.basis.transpose();
    const Eigen::VectorXd variances = proj.diagonal();
    for (int k = 1; k < 25; ++k) EXPECT_GE(variances(k - 1), variances(k) - 1e-12);
    proj.diagonal().setZero();
    EXPECT_LE(proj.cwiseAbs().maxCoeff(), 1e-8);
    const DictionaryDiagnostics diag = check_subdictionary(d, c);
    EXPECT_LE(diag.orthonormality_error, 1e-10);
    EXPECT_LE(diag.diagonalization_error, 1e-8);
  }
}

TEST(SubDictionary, CodeDecodeConventions) {
  const SubDictionary d = train_subdictionary(random_samples(25, 60, 3));
  EXPECT_LE((d.decode(Eigen::VectorXd::Zero(25)) - d.mean).norm(), 1e-15);
  for (int k : {0, 7, 24}) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(25);
    e(k) = 1.0;
    EXPECT_LE((d.decode(e) - (d.mean + d.basis.row(k).transpose())).norm(), 1e-14);
  }
  std::mt19937 rng(2);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd a(25), v(25), w(25);
    for (int i = 0; i < 25; ++i) {
      a(i) = g(rng);
      v(i) = g(rng);
      w(i) = g(rng);
    }
    EXPECT_LE((d.code(d.decode(a)) - a).norm(), 1e-12);
    EXPECT_NEAR((d.code(v) - d.code(w)).norm(), (v - w).norm(), 1e-12);
  }
  EXPECT_THROW(d.code(Eigen::VectorXd::Zero(3)), std::invalid_argument);
}

TEST(PriorCoefficient, Examples) {
  const SubDictionary d = train_subdictionary(random_samples(25, 60, 4));
  const Eigen::MatrixXd n = random_samples(25, 2, 9);
  const std::vector<double> one{1.0};
  EXPECT_LE((prior_coefficient(d, n.leftCols(1), one) - d.code(n.col(0))).norm(), 1e-13);

  Eigen::MatrixXd same(25, 3);
  for (int j = 0; j < 3; ++j) same.col(j) = n.col(0);
  const std::vector<double> uneven{0.7, 0.2, 0.1};
  EXPECT_LE((prior_coefficient(d, same, uneven) - d.code(n.col(0))).norm(), 1e-13);

  const std::vector<double> half{0.5, 0.5};
  const Eigen::VectorXd mid = 0.5 * (n.col(0) + n.col(1));
  const Eigen::VectorXd beta = prior_coefficient(d, n, half);
  EXPECT_LE((beta - d.code(mid)).norm(), 1e-13);
  EXPECT_LE((d.decode(beta) - mid).norm(), 1e-10);
}

TEST(TrainSubdictionary, LeadingDirectionsBeatAnyPixelSubset) {
  // Ky Fan: the top-k eigenvalues carry at least the energy of any k coordinates,
  // in particular the k largest diagonal entries of the covariance.
  const Image img = read_image(std::string(WENLR_DATA_DIR) + "/lena.pgm");
  const PatchSystem sys(img.dims(), 5, 1);
  for (std::size_t q = 0; q < sys.count(); q += 997) {
    const SimilarPatchSet s = find_similar(img, sys, q, SearchConfig{}, 60);
    Eigen::MatrixXd samples(25, static_cast<Eigen::Index>(s.size()));
    for (std::size_t j = 0; j < s.size(); ++j) {
      extract_window(img, s.neighbors[j], 5,
                     std::span<double>(samples.col(static_cast<Eigen::Index>(j)).data(), 25));
    }
    const SubDictionary d = train_subdictionary(samples);
    Eigen::VectorXd diag = sample_covariance(samples).diagonal();
    std::sort(diag.data(), diag.data() + diag.size(), std::greater<>());
    for (int k = 1; k <= 25; ++k) EXPECT_GE(d.eigenvalues.head(k).sum(), diag.head(k).sum() - 1e-12);
    EXPECT_NEAR(d.eigenvalues.sum(), diag.sum(), 1e-12);
  }
}
