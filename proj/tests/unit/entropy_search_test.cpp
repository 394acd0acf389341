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
#include <set>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "pushid/search/candidate_set.hpp"
#include "pushid/search/greedy_entropy_search.hpp"

namespace pushid::search {
namespace {

CandidateSet grid_2d(std::size_t n) {
  return CandidateSet::grid({linspace(0.0, 1.0, n), linspace(-2.0, 2.0, n)});
}

std::size_t brute_force_argmin(const Objective& f, std::size_t n) {
  std::size_t best = 0;
  double best_v = f(0);
  for (std::size_t i = 1; i < n; ++i) {
    const double v = f(i);
    if (v < best_v) {
      best = i;
      best_v = v;
    }
  }
  return best;
}

TEST(CandidateSet, GridOrderLastDimensionFastest) {
  const auto c = CandidateSet::grid({{1.0, 2.0}, {10.0, 20.0, 30.0}});
  ASSERT_EQ(c.size(), 6u);
  EXPECT_EQ(c[0], Eigen::Vector2d(1.0, 10.0));
  EXPECT_EQ(c[1], Eigen::Vector2d(1.0, 20.0));
  EXPECT_EQ(c[3], Eigen::Vector2d(2.0, 10.0));
  EXPECT_EQ(c.normalized()[5], Eigen::Vector2d(1.0, 1.0));
  EXPECT_EQ(c.normalized()[1], Eigen::Vector2d(0.0, 0.5));
}

TEST(CandidateSet, Validation) {
  EXPECT_THROW(CandidateSet(std::vector<Eigen::VectorXd>{}), InputError);
  EXPECT_THROW(CandidateSet({Eigen::Vector2d(0, 0), Eigen::Vector2d(0, 0)}), InputError);
  EXPECT_THROW(CandidateSet({Eigen::Vector2d(0, 0), Eigen::Vector3d(0, 0, 1)}), InputError);
  EXPECT_THROW(CandidateSet({Eigen::VectorXd::Constant(1, 2.0)}, {{0.0, 1.0}}), InputError);
  EXPECT_THROW(CandidateSet({Eigen::VectorXd::Constant(1, std::nan(""))}), InputError);
}

TEST(CandidateSet, DegenerateDimensionMapsToHalf) {
  const auto c = CandidateSet::grid({{0.3}, {1.0, 2.0}});
  EXPECT_EQ(c.normalized()[0], Eigen::Vector2d(0.5, 0.0));
}

TEST(GreedyEntropySearch, SingleCandidate) {
  const CandidateSet c({Eigen::VectorXd::Constant(1, 0.4)});
  int calls = 0;
  const auto r = greedy_entropy_search([&](std::size_t) { ++calls; return 2.5; }, c, {},
                                       SearchConfig{});
  EXPECT_EQ(calls, 1);
  EXPECT_EQ(r.trace.best_index, 0u);
  EXPECT_EQ(r.pmin.probs.size(), 1);
  EXPECT_EQ(r.pmin.probs[0], 1.0);
  EXPECT_EQ(r.pmin.entropy, 0.0);
}

TEST(GreedyEntropySearch, FullBudgetMatchesBruteForce) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto c = grid_2d(7);
  for (int problem = 0; problem < 10; ++problem) {
    const Eigen::Vector2d centre(0.5 + 0.4 * u(rng), 1.5 * u(rng));
    const double phase = 3.0 * u(rng);
    Objective f = [&](std::size_t i) {
      const Eigen::Vector2d d = c[i] - centre;
      return d.squaredNorm() + 0.2 * std::sin(5.0 * c[i][0] + phase);
    };
    SearchConfig cfg;
    cfg.eval_budget = c.size();
    cfg.entropy_tol = 0.0;
    cfg.mc_samples = 200;
    cfg.seed = static_cast<std::uint64_t>(problem);
    const auto r = greedy_entropy_search(f, c, {}, cfg);
    EXPECT_EQ(r.trace.evaluated.size(), c.size());
    EXPECT_EQ(r.trace.best_index, brute_force_argmin(f, c.size())) << "problem " << problem;
  }
}

TEST(GreedyEntropySearch, ValueTiesResolveToLowestIndex) {
  const auto c = grid_2d(4);
  Objective f = [](std::size_t i) { return (i == 5 || i == 11) ? -1.0 : 0.0; };
  SearchConfig cfg;
  cfg.eval_budget = c.size();
  cfg.entropy_tol = 0.0;
  const auto r = greedy_entropy_search(f, c, {}, cfg);
  EXPECT_EQ(r.trace.best_index, 5u);
}

TEST(GreedyEntropySearch, NeverRepeatsAndRespectsBudget) {
  const auto c = grid_2d(6);
  Objective f = [&](std::size_t i) { return std::cos(3.0 * c[i][0]) + c[i][1]; };
  SearchConfig cfg;
  cfg.eval_budget = 15;
  cfg.entropy_tol = 0.0;
  const auto r = greedy_entropy_search(f, c, {}, cfg);
  ASSERT_EQ(r.trace.evaluated.size(), 15u);
  std::set<std::size_t> seen;
  for (const auto& e : r.trace.evaluated) EXPECT_TRUE(seen.insert(e.index).second);
  EXPECT_EQ(r.trace.pmin_history.size(), r.trace.evaluated.size());
  EXPECT_NEAR(r.pmin.probs.sum(), 1.0, 1e-9);
  double best = 1e300;
  for (const auto& e : r.trace.evaluated) best = std::min(best, e.value);
  EXPECT_EQ(r.trace.best_value, best);
}

TEST(GreedyEntropySearch, FirstEvaluationIsPriorMap) {
  const auto c = grid_2d(5);
  std::vector<std::size_t> order;
  Objective f = [&](std::size_t i) { order.push_back(i); return c[i].norm(); };
  SearchConfig cfg;
  cfg.eval_budget = 2;
  greedy_entropy_search(f, c, {}, cfg);
  EXPECT_EQ(order.front(), 0u);

  Eigen::VectorXd prior = Eigen::VectorXd::Ones(25);
  prior[17] = 4.0;
  order.clear();
  greedy_entropy_search(f, c, prior, cfg);
  EXPECT_EQ(order.front(), 17u);
}

TEST(GreedyEntropySearch, Deterministic) {
  const auto c = grid_2d(6);
  Objective f = [&](std::size_t i) { return std::sin(4.0 * c[i][0]) * c[i][1]; };
  SearchConfig cfg;
  cfg.eval_budget = 20;
  cfg.seed = 42;
  const auto a = greedy_entropy_search(f, c, {}, cfg);
  const auto b = greedy_entropy_search(f, c, {}, cfg);
  ASSERT_EQ(a.trace.evaluated.size(), b.trace.evaluated.size());
  for (std::size_t k = 0; k < a.trace.evaluated.size(); ++k) {
    EXPECT_EQ(a.trace.evaluated[k].index, b.trace.evaluated[k].index);
    EXPECT_EQ(a.trace.evaluated[k].value, b.trace.evaluated[k].value);
  }
  EXPECT_TRUE((a.pmin.probs.array() == b.pmin.probs.array()).all());
}

TEST(GreedyEntropySearch, StopsOnStagnation) {
  const auto c = grid_2d(5);
  Objective f = [](std::size_t) { return 1.0; };
  SearchConfig cfg;
  cfg.eval_budget = 25;
  cfg.entropy_tol = 10.0;  // every change counts as stagnant
  cfg.patience = 2;
  const auto r = greedy_entropy_search(f, c, {}, cfg);
  EXPECT_TRUE(r.trace.stagnated);
  EXPECT_EQ(r.trace.evaluated.size(), 3u);
}

TEST(GreedyEntropySearch, InvalidValuesAreRecordedAndMasked) {
  const auto c = grid_2d(4);
  Objective f = [](std::size_t i) {
    return i % 3 == 0 ? std::numeric_limits<double>::quiet_NaN() : static_cast<double>(i);
  };
  SearchConfig cfg;
  cfg.eval_budget = c.size();
  cfg.entropy_tol = 0.0;
  const auto r = greedy_entropy_search(f, c, {}, cfg);
  for (const auto& e : r.trace.evaluated) {
    if (e.index % 3 == 0) {
      EXPECT_EQ(e.value, kInvalidValue);
      EXPECT_EQ(r.pmin.probs[static_cast<Eigen::Index>(e.index)], 0.0);
    }
  }
  EXPECT_EQ(r.trace.best_index, 1u);
}

TEST(GreedyEntropySearch, AllInvalidIsSearchError) {
  const auto c = grid_2d(3);
  SearchConfig cfg;
  cfg.eval_budget = 9;
  EXPECT_THROW(greedy_entropy_search([](std::size_t) { return INFINITY; }, c, {}, cfg),
               SearchError);
}

TEST(GreedyEntropySearch, ConfigValidation) {
  const auto c = grid_2d(3);
  SearchConfig cfg;
  cfg.eval_budget = 0;
  EXPECT_THROW(greedy_entropy_search([](std::size_t) { return 0.0; }, c, {}, cfg),
               InputError);
  cfg = {};
  EXPECT_THROW(greedy_entropy_search([](std::size_t) { return 0.0; }, c,
                                     Eigen::VectorXd::Ones(3), cfg),
               InputError);
}

}  // namespace
}  // namespace pushid::search
