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

#include "pushid/search/pmin.hpp"

namespace pushid::search {
namespace {

PminEstimate make(std::initializer_list<double> p) {
  PminEstimate e;
  e.probs = Eigen::VectorXd(static_cast<Eigen::Index>(p.size()));
  Eigen::Index i = 0;
  for (double v : p) e.probs[i++] = v;
  e.entropy = entropy(e.probs);
  e.mc_samples = 1;
  return e;
}

TEST(EstimatePmin, IdenticalRowsGiveOneHot) {
  Eigen::MatrixXd s(5, 4);
  s.rowwise() = Eigen::RowVector4d(3.0, 2.0, -1.0, 0.5);
  const auto e = estimate_pmin(s);
  EXPECT_EQ(e.probs, Eigen::Vector4d(0, 0, 1, 0));
  EXPECT_EQ(e.entropy, 0.0);
  EXPECT_EQ(e.mc_samples, 5u);
}

TEST(EstimatePmin, DirectCount) {
  Eigen::MatrixXd s(4, 2);
  s << 1, 2, 2, 1, 1, 2, 1, 2;
  const auto e = estimate_pmin(s);
  EXPECT_DOUBLE_EQ(e.probs[0], 0.75);
  EXPECT_DOUBLE_EQ(e.probs[1], 0.25);
}

TEST(EstimatePmin, TiesGoToFirstColumn) {
  Eigen::MatrixXd s(3, 3);
  s << 1, 1, 1, 0, 2, 0, 5, 4, 4;
  const auto e = estimate_pmin(s);
  EXPECT_NEAR(e.probs[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(e.probs[1], 1.0 / 3.0, 1e-15);
  EXPECT_EQ(e.probs[2], 0.0);
}

TEST(EstimatePmin, SymmetricPairWithinBinomialBound) {
  const int n = 20000;
  std::mt19937_64 rng(17);
  std::normal_distribution<double> z;
  Eigen::MatrixXd s(n, 2);
  for (int r = 0; r < n; ++r) s.row(r) << z(rng), z(rng);
  const auto e = estimate_pmin(s);
  const double sigma = std::sqrt(0.25 / n);
  EXPECT_NEAR(e.probs[0], 0.5, 3.0 * sigma);
  EXPECT_NEAR(e.probs.sum(), 1.0, 1e-9);
  // d(-p log p - (1-p) log(1-p))/dp vanishes at 1/2; second-order bound.
  EXPECT_NEAR(e.entropy, std::log(2.0), 2.0 * 9.0 * sigma * sigma + 1e-12);
}

TEST(EstimatePmin, ValidDistributionOnRandomInput) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> z;
  for (int t = 0; t < 20; ++t) {
    const int n = 1 + t * 3;
    Eigen::MatrixXd s(37, n);
    for (Eigen::Index i = 0; i < s.size(); ++i) s.data()[i] = z(rng);
    const auto e = estimate_pmin(s);
    EXPECT_NEAR(e.probs.sum(), 1.0, 1e-9);
    EXPECT_TRUE((e.probs.array() >= 0.0).all());
    EXPECT_GE(e.entropy, 0.0);
    EXPECT_LE(e.entropy, std::log(static_cast<double>(n)) + 1e-12);
  }
}

TEST(EstimatePmin, IneligibleColumnsNeverWin) {
  Eigen::MatrixXd s(2, 3);
  s << 0, 1, 2, 0, 3, 1;
  const auto e = estimate_pmin(s, {false, true, true});
  EXPECT_EQ(e.probs[0], 0.0);
  EXPECT_DOUBLE_EQ(e.probs[1], 0.5);
  EXPECT_DOUBLE_EQ(e.probs[2], 0.5);
}

TEST(EstimatePmin, Errors) {
  EXPECT_THROW(estimate_pmin(Eigen::MatrixXd(0, 3)), InputError);
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2, 2);
  s(1, 1) = std::nan("");
  EXPECT_THROW(estimate_pmin(s), InputError);
  EXPECT_THROW(estimate_pmin(Eigen::MatrixXd::Zero(2, 2), {false, false}), InputError);
}

TEST(SelectNext, LargestEntropyTerm) {
  // -0.5 log 0.5 = 0.3466, -0.3 log 0.3 = 0.3612, -0.2 log 0.2 = 0.3219.
  const auto p = make({0.5, 0.3, 0.2});
  EXPECT_NEAR(entropy_term(0.5), 0.34657359, 1e-8);
  EXPECT_NEAR(entropy_term(0.3), 0.36119184, 1e-8);
  EXPECT_NEAR(entropy_term(0.2), 0.32188758, 1e-8);
  EXPECT_EQ(select_next(p, {false, false, false}), 1u);
}

TEST(SelectNext, RestrictedToUnevaluated) {
  const auto p = make({0.5, 0.3, 0.2});
  EXPECT_EQ(select_next(p, {false, true, false}), 0u);
  EXPECT_EQ(select_next(p, {true, true, false}), 2u);
}

TEST(SelectNext, ZeroTermsTieToLowestIndex) {
  const auto p = make({1.0, 0.0});
  EXPECT_EQ(select_next(p, {false, false}), 0u);
  EXPECT_EQ(select_next(p, {true, false}), 1u);
}

TEST(SelectNext, PicksTermClosestToInverseE) {
  // -p log p peaks at p = 1/e.
  const auto p = make({0.6, 0.37, 0.03});
  EXPECT_EQ(select_next(p, {false, false, false}), 1u);
}

TEST(SelectNext, ExhaustedThrows) {
  const auto p = make({0.5, 0.5});
  EXPECT_THROW(select_next(p, {true, true}), ExhaustedError);
}

TEST(ArgmaxFirst, LowestIndexOnTies) {
  EXPECT_EQ(argmax_first(Eigen::Vector4d(1, 3, 3, 2)), 1u);
  EXPECT_THROW(argmax_first(Eigen::VectorXd()), InputError);
}

}  // namespace
}  // namespace pushid::search
