// Copyright 2026 The pushid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "pushid/gp/gaussian_process.hpp"
#include "pushid/gp/kernel.hpp"

namespace pushid::gp {
namespace {

Eigen::VectorXd random_point(std::mt19937_64& rng, Eigen::Index dim) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd p(dim);
  for (Eigen::Index d = 0; d < dim; ++d) p[d] = u(rng);
  return p;
}

// Closed-form posterior with an explicit inverse, independent of the
// Cholesky path used by GaussianProcess.
struct NaiveOracle {
  Eigen::MatrixXd x;  // columns
  Eigen::VectorXd y;
  KernelParams params;
  MeanFunction mean;

  Prediction predict(const Eigen::VectorXd& q) const {
    const Eigen::Index n = x.cols();
    Eigen::MatrixXd k(n, n);
    Eigen::VectorXd ks(n);
    Eigen::VectorXd resid(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      ks[i] = kernel_eval(params, x.col(i), q);
      resid[i] = y[i] - mean(x.col(i));
      for (Eigen::Index j = 0; j < n; ++j) k(i, j) = kernel_eval(params, x.col(i), x.col(j));
    }
    k.diagonal().array() += params.noise_variance;
    const Eigen::MatrixXd kinv = k.fullPivLu().inverse();
    return {mean(q) + ks.dot(kinv * resid),
            kernel_eval(params, q, q) - ks.dot(kinv * ks)};
  }
};

TEST(Kernel, SelfCovarianceIsSignalVariance) {
  const auto p = KernelParams::isotropic(3, 1.0, 0.2);
  const Eigen::Vector3d a(0.1, 0.7, 0.3);
  EXPECT_DOUBLE_EQ(kernel_eval(p, a, a), 1.0);
}

TEST(Kernel, Symmetric) {
  std::mt19937_64 rng(3);
  KernelParams p{2.5, Eigen::Vector3d(0.3, 0.1, 0.7), 0.0};
  for (int t = 0; t < 50; ++t) {
    const auto a = random_point(rng, 3);
    const auto b = random_point(rng, 3);
    EXPECT_EQ(kernel_eval(p, a, b), kernel_eval(p, b, a));
  }
}

TEST(Kernel, UnitDistanceOneDimension) {
  const auto p = KernelParams::isotropic(1, 1.0, 1.0);
  Eigen::VectorXd a(1), b(1);
  a << 0.25;
  b << 1.25;
  EXPECT_NEAR(kernel_eval(p, a, b), 0.6065306597126334, 1e-15);
}

TEST(Kernel, DimensionMismatchThrows) {
  const auto p = KernelParams::isotropic(2);
  EXPECT_THROW(kernel_eval(p, Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(3)),
               InputError);
}

TEST(Kernel, RejectsInvalidParams) {
  EXPECT_THROW(SquaredExponential(KernelParams{0.0, Eigen::VectorXd::Ones(1), 0.0}),
               InputError);
  EXPECT_THROW(SquaredExponential(KernelParams{1.0, Eigen::VectorXd::Zero(1), 0.0}),
               InputError);
  EXPECT_THROW(SquaredExponential(KernelParams{1.0, Eigen::VectorXd::Ones(1), -1.0}),
               InputError);
}

TEST(GaussianProcess, NoDataEqualsPrior) {
  auto mean = [](const Eigen::VectorXd& q) { return 3.0 * q[0]; };
  const auto gp = gp_fit({}, KernelParams::isotropic(2, 1.7, 0.2), mean);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 10; ++t) {
    const auto q = random_point(rng, 2);
    const auto p = gp.predict(q);
    EXPECT_DOUBLE_EQ(p.mean, 3.0 * q[0]);
    EXPECT_DOUBLE_EQ(p.variance, 1.7);
  }
}

TEST(GaussianProcess, InterpolatesSinglePoint) {
  Eigen::VectorXd x0(2);
  x0 << 0.4, 0.6;
  const std::vector<Observation> data{{x0, 2.0}};
  const auto gp = gp_fit(data, KernelParams::isotropic(2, 1.0, 0.2, 0.0));
  const auto p = gp.predict(x0);
  EXPECT_NEAR(p.mean, 2.0, 1e-8);
  EXPECT_LE(p.variance, 1e-6);
}

TEST(GaussianProcess, MatchesNaiveInverseOnRandomProblems) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> npts(1, 50);
  std::uniform_int_distribution<int> ndim(1, 3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int problem = 0; problem < 20; ++problem) {
    const Eigen::Index dim = ndim(rng);
    const int n = npts(rng);
    KernelParams params = KernelParams::isotropic(dim, 0.5 + u(rng) * 0.4, 0.3, 1e-3);
    const double slope = u(rng);
    MeanFunction mean = [slope](const Eigen::VectorXd& q) { return slope * q.sum(); };

    std::vector<Observation> data;
    NaiveOracle oracle{Eigen::MatrixXd(dim, n), Eigen::VectorXd(n), params, mean};
    for (int i = 0; i < n; ++i) {
      const auto x = random_point(rng, dim);
      const double y = std::sin(3.0 * x.sum()) + 0.1 * u(rng);
      data.push_back({x, y});
      oracle.x.col(i) = x;
      oracle.y[i] = y;
    }
    const auto gp = gp_fit(data, params, mean);
    for (int q = 0; q < 10; ++q) {
      const auto query = random_point(rng, dim);
      const auto got = gp.predict(query);
      const auto want = oracle.predict(query);
      EXPECT_NEAR(got.mean, want.mean, 1e-8) << "problem " << problem;
      EXPECT_NEAR(got.variance, std::max(0.0, want.variance), 1e-8) << "problem " << problem;
    }
  }
}

TEST(GaussianProcess, VarianceBoundsAndNoiseFreeTrainingPoints) {
  std::mt19937_64 rng(5);
  const auto params = KernelParams::isotropic(2, 2.0, 0.25, 0.0);
  std::vector<Observation> data;
  for (int i = 0; i < 15; ++i) data.push_back({random_point(rng, 2), std::cos(4.0 * i)});
  const auto gp = gp_fit(data, params);
  for (const auto& d : data) {
    EXPECT_LE(gp.predict(d.input).variance, 1e-6 * params.signal_variance);
  }
  for (int t = 0; t < 100; ++t) {
    const auto v = gp.predict(random_point(rng, 2)).variance;
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, params.signal_variance + params.noise_variance);
  }
}

TEST(GaussianProcess, RevertsToPriorFarFromData) {
  const auto params = KernelParams::isotropic(1, 1.3, 0.1, 0.0);
  std::vector<Observation> data{{Eigen::VectorXd::Constant(1, 0.0), 5.0},
                                {Eigen::VectorXd::Constant(1, 0.05), 4.0}};
  auto mean = [](const Eigen::VectorXd&) { return 0.5; };
  const auto gp = gp_fit(data, params, mean);
  const auto p = gp.predict(Eigen::VectorXd::Constant(1, 1.05));  // >= 10 lengthscales
  EXPECT_NEAR(p.mean, 0.5, 1e-12);
  EXPECT_NEAR(p.variance, 1.3, 1e-12);
}

TEST(GaussianProcess, MidpointOfSymmetricPairIsAverage) {
  const auto params = KernelParams::isotropic(1, 1.0, 0.3, 0.0);
  std::vector<Observation> data{{Eigen::VectorXd::Constant(1, 0.3), 1.0},
                                {Eigen::VectorXd::Constant(1, 0.7), 3.0}};
  const auto gp = gp_fit(data, params);
  const auto mid = Eigen::VectorXd::Constant(1, 0.5);
  NaiveOracle oracle{Eigen::RowVector2d(0.3, 0.7), Eigen::Vector2d(1.0, 3.0), params,
                     zero_mean()};
  // Zero prior mean shrinks the average towards zero; the oracle and the
  // symmetric combination must agree.
  const double k_mid = kernel_eval(params, mid, Eigen::VectorXd::Constant(1, 0.3));
  const double k_pair = kernel_eval(params, Eigen::VectorXd::Constant(1, 0.3),
                                    Eigen::VectorXd::Constant(1, 0.7));
  EXPECT_NEAR(gp.predict(mid).mean, (1.0 + 3.0) * k_mid / (1.0 + k_pair), 1e-10);
  EXPECT_NEAR(gp.predict(mid).mean, oracle.predict(mid).mean, 1e-10);

  // With the prior mean set to the average, the midpoint mean is the average.
  auto avg = [](const Eigen::VectorXd&) { return 2.0; };
  const auto gp2 = gp_fit(data, params, avg);
  EXPECT_NEAR(gp2.predict(mid).mean, 2.0, 1e-12);
}

TEST(GaussianProcess, DuplicateInputsAreAveraged) {
  const auto params = KernelParams::isotropic(1, 1.0, 0.2, 0.0);
  const auto x = Eigen::VectorXd::Constant(1, 0.5);
  std::vector<Observation> data{{x, 1.0}, {x, 3.0}};
  const auto gp = gp_fit(data, params);
  EXPECT_EQ(gp.size(), 1);
  EXPECT_NEAR(gp.predict(x).mean, 2.0, 1e-8);
}

TEST(GaussianProcess, RejectsMismatchedDimensions) {
  const auto params = KernelParams::isotropic(2);
  std::vector<Observation> bad{{Eigen::VectorXd::Zero(3), 1.0}};
  EXPECT_THROW(gp_fit(bad, params), InputError);
  const auto gp = gp_fit({}, params);
  EXPECT_THROW(gp.predict(Eigen::VectorXd::Zero(1)), InputError);
}

TEST(GaussianProcess, JitterGivesUpOnIndefiniteMatrices) {
  Eigen::Matrix2d a;
  a << 1.0, 2.0, 2.0, 1.0;
  EXPECT_THROW(cholesky_with_jitter(a), NumericalError);
  Eigen::Matrix2d singular = Eigen::Matrix2d::Ones();
  const Eigen::MatrixXd l = cholesky_with_jitter(singular);
  EXPECT_NEAR((l * l.transpose() - singular).norm(), 0.0, 1e-9);
}

class SampleJointTest : public ::testing::Test {
 protected:
  void SetUp() override {
    params_ = KernelParams::isotropic(1, 1.0, 0.5, 1e-6);
    data_ = {{Eigen::VectorXd::Constant(1, 0.0), 0.3}, {Eigen::VectorXd::Constant(1, 1.0), -0.2}};
    for (double x : {0.3, 0.4, 0.5, 0.6, 0.7}) candidates_.push_back(Eigen::VectorXd::Constant(1, x));
  }
  KernelParams params_;
  std::vector<Observation> data_;
  std::vector<Eigen::VectorXd> candidates_;
};

TEST_F(SampleJointTest, ZeroSamplesGiveEmptyMatrix) {
  const auto gp = gp_fit(data_, params_);
  const auto s = gp.sample_joint(candidates_, 0, 1);
  EXPECT_EQ(s.rows(), 0);
  EXPECT_EQ(s.cols(), 5);
}

TEST_F(SampleJointTest, EmptyCandidatesRejected) {
  const auto gp = gp_fit(data_, params_);
  EXPECT_THROW(gp.sample_joint({}, 10, 1), InputError);
}

TEST_F(SampleJointTest, DeterministicGivenSeed) {
  const auto gp = gp_fit(data_, params_);
  const auto a = gp.sample_joint(candidates_, 200, 99);
  const auto b = gp.sample_joint(candidates_, 200, 99);
  EXPECT_TRUE((a.array() == b.array()).all());
  const auto c = gp.sample_joint(candidates_, 200, 100);
  EXPECT_FALSE((a.array() == c.array()).all());
}

TEST_F(SampleJointTest, SingleCandidateMeanWithinStandardError) {
  const auto gp = gp_fit(data_, params_);
  const std::vector<Eigen::VectorXd> one{candidates_[2]};
  const std::size_t n = 100000;
  const auto s = gp.sample_joint(one, n, 7);
  const auto pred = gp.predict(one[0]);
  const double se = std::sqrt(pred.variance / static_cast<double>(n));
  EXPECT_NEAR(s.col(0).mean(), pred.mean, 3.0 * se);
}

TEST_F(SampleJointTest, SampleCovarianceMatchesPosterior) {
  const auto gp = gp_fit(data_, params_);
  const std::size_t n = 100000;
  const auto s = gp.sample_joint(candidates_, n, 11);
  const auto post = gp.joint_posterior(candidates_);
  const Eigen::MatrixXd centered = s.rowwise() - s.colwise().mean();
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n - 1);
  for (Eigen::Index i = 0; i < 5; ++i) {
    for (Eigen::Index j = 0; j < 5; ++j) {
      EXPECT_NEAR(cov(i, j), post.covariance(i, j), 0.05 * std::abs(post.covariance(i, j)))
          << i << "," << j;
    }
  }
}

}  // namespace
}  // namespace pushid::gp
