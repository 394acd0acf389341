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

#ifndef PUSHID_BASELINES_POWER_HPP_
#define PUSHID_BASELINES_POWER_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "pushid/error.hpp"

namespace pushid::baselines {

// Scalar-parameter PoWER: Gaussian exploration around the policy mean,
// rewards exp(-c * cost), mean moved to the reward-weighted average of the
// best rollouts seen so far.
struct PowerConfig {
  double init_mean = 1.0;
  double init_std = 0.3;
  std::size_t n_best = 5;
  std::size_t rollouts_per_iter = 1;
  std::size_t iterations = 20;
  double reward_temperature = 10.0;
  double std_decay = 0.97;
  double std_floor = 0.01;  // effective floor is min(std_floor, init_std)
  std::uint64_t seed = 0;

  void validate() const {
    if (!std::isfinite(init_mean)) throw InputError("PoWER init_mean must be finite");
    if (!(init_std > 0.0)) throw InputError("PoWER init_std must be positive");
    if (n_best < 1) throw InputError("PoWER n_best must be at least 1");
    if (rollouts_per_iter < 1) throw InputError("PoWER rollouts_per_iter must be >= 1");
    if (!(reward_temperature > 0.0)) {
      throw InputError("PoWER reward_temperature must be positive");
    }
    if (!(std_decay > 0.0) || std_decay > 1.0) {
      throw InputError("PoWER std_decay must be in (0, 1]");
    }
    if (!(std_floor >= 0.0)) throw InputError("PoWER std_floor must be >= 0");
  }
};

struct RolloutResult {
  double cost = 0.0;
  bool dropped = false;
};

using RolloutOracle = std::function<RolloutResult(double)>;

struct PowerRollout {
  std::size_t iteration = 0;
  double mean = 0.0;  // policy mean the sample was drawn around
  double eta = 0.0;   // executed parameter
  double cost = 0.0;
  bool dropped = false;
};

struct PowerResult {
  std::vector<PowerRollout> curve;
  double final_mean = 0.0;
  double final_std = 0.0;

  std::size_t drops() const {
    return static_cast<std::size_t>(
        std::count_if(curve.begin(), curve.end(), [](const auto& r) { return r.dropped; }));
  }
};

inline PowerResult power_iterate(const PowerConfig& cfg, const RolloutOracle& env) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  struct Elite {
    double eta;
    double reward;
  };
  std::vector<Elite> elite;
  double mean = cfg.init_mean;
  double std_dev = cfg.init_std;
  const double floor = std::min(cfg.std_floor, cfg.init_std);

  PowerResult out;
  out.curve.reserve(cfg.iterations * cfg.rollouts_per_iter);
  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    for (std::size_t r = 0; r < cfg.rollouts_per_iter; ++r) {
      const double eta = mean + std_dev * normal(rng);
      const RolloutResult res = env(eta);
      const double reward =
          std::isfinite(res.cost) ? std::exp(-cfg.reward_temperature * res.cost) : 0.0;
      elite.push_back({eta, reward});
      out.curve.push_back({it, mean, eta, res.cost, res.dropped});
    }
    std::stable_sort(elite.begin(), elite.end(),
                     [](const Elite& a, const Elite& b) { return a.reward > b.reward; });
    if (elite.size() > cfg.n_best) elite.resize(cfg.n_best);

    double num = 0.0;
    double den = 0.0;
    for (const Elite& e : elite) {
      num += e.reward * (e.eta - mean);
      den += e.reward;
    }
    if (den > 0.0) mean += num / den;
    std_dev = std::max(floor, std_dev * cfg.std_decay);
  }
  out.final_mean = mean;
  out.final_std = std_dev;
  return out;
}

}  // namespace pushid::baselines

#endif  // PUSHID_BASELINES_POWER_HPP_
