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

#ifndef PUSHID_IDENT_IDENTIFICATION_HPP_
#define PUSHID_IDENT_IDENTIFICATION_HPP_

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "pushid/error.hpp"
#include "pushid/search/candidate_set.hpp"
#include "pushid/search/greedy_entropy_search.hpp"
#include "pushid/sim/simulator.hpp"

namespace pushid::ident {

using search::CandidateSet;
using search::SearchConfig;
using search::SearchTrace;
using sim::ObjectModel;
using sim::Pose;
using sim::PushAction;
using sim::SimConfig;

/// Candidate (mass, mu_static, mu_kinetic) grid: mass outer, friction inner,
/// with mu_static = static_ratio * mu_kinetic.
struct ThetaGridSpec {
  double mass_lo = 0.05;
  double mass_hi = 2.0;
  std::size_t mass_count = 20;
  double mu_lo = 0.05;
  double mu_hi = 0.8;
  std::size_t mu_count = 20;
  double static_ratio = 1.2;
};

inline CandidateSet make_theta_grid(const ThetaGridSpec& spec) {
  if (spec.mass_count < 1 || spec.mu_count < 1) {
    throw ConfigError("theta grid needs at least one value per axis");
  }
  if (!(spec.mass_lo > 0.0) || spec.mass_hi < spec.mass_lo || spec.mu_lo < 0.0 ||
      spec.mu_hi < spec.mu_lo || spec.static_ratio < 1.0 ||
      spec.static_ratio * spec.mu_hi > 2.0) {
    throw ConfigError("invalid theta grid ranges");
  }
  const auto masses = search::linspace(spec.mass_lo, spec.mass_hi, spec.mass_count);
  const auto mus = search::linspace(spec.mu_lo, spec.mu_hi, spec.mu_count);
  std::vector<Eigen::VectorXd> points;
  points.reserve(masses.size() * mus.size());
  for (double m : masses) {
    for (double mu : mus) points.push_back(Eigen::Vector3d(m, spec.static_ratio * mu, mu));
  }
  std::vector<search::Bounds> bounds{{spec.mass_lo, spec.mass_hi},
                                     {spec.static_ratio * spec.mu_lo,
                                      spec.static_ratio * spec.mu_hi},
                                     {spec.mu_lo, spec.mu_hi}};
  return CandidateSet(std::move(points), std::move(bounds));
}

/// Discrete belief over candidate object models sharing one footprint.
struct BeliefOverModels {
  CandidateSet theta_set;
  Eigen::VectorXd probs;
  sim::Shape shape = sim::Rectangle{};

  std::size_t size() const { return theta_set.size(); }

  ObjectModel model(std::size_t i) const {
    const Eigen::VectorXd& p = theta_set[i];
    return {p[0], p[1], p[2], shape};
  }

  void validate() const {
    if (theta_set.dimension() != 3) {
      throw InputError("model candidates must be (mass, mu_static, mu_kinetic)");
    }
    if (static_cast<std::size_t>(probs.size()) != theta_set.size()) {
      throw InputError("belief size does not match the candidate set");
    }
    if (!probs.allFinite() || (probs.array() < 0.0).any() ||
        std::abs(probs.sum() - 1.0) > 1e-9) {
      throw InputError("belief must be a probability vector");
    }
  }

  double entropy() const { return search::entropy(probs); }
};

inline BeliefOverModels uniform_belief(CandidateSet theta_set, sim::Shape shape) {
  const auto n = static_cast<Eigen::Index>(theta_set.size());
  return {std::move(theta_set), Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)),
          shape};
}

/// Observation triple: pose before, push, pose after.
struct PushObservation {
  Pose x_before;
  PushAction action;
  Pose x_after;
};

/// Weighted pose distance; rotation_weight converts radians into metres.
inline double pose_error(const Pose& a, const Pose& b, double rotation_weight) {
  const double dyaw = sim::wrap_angle(a.yaw - b.yaw);
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) +
                   rotation_weight * rotation_weight * dyaw * dyaw);
}

inline constexpr double kDefaultRotationWeight = 0.1;  // m/rad

/// Distance between the observed post-push pose and the simulated one.
/// Simulation failures return search::kInvalidValue.
inline double sim_error(const PushObservation& obs, const ObjectModel& theta,
                        const SimConfig& cfg,
                        double rotation_weight = kDefaultRotationWeight) {
  try {
    const sim::Trajectory traj = sim::simulate_push(obs.x_before, obs.action, theta, cfg);
    const double e = pose_error(obs.x_after, traj.final_pose(), rotation_weight);
    return std::isfinite(e) ? e : search::kInvalidValue;
  } catch (const Error&) {
    return search::kInvalidValue;
  }
}

inline double mean_sim_error(std::span<const PushObservation> obs,
                             const ObjectModel& theta, const SimConfig& cfg,
                             double rotation_weight = kDefaultRotationWeight) {
  if (obs.empty()) throw InputError("mean_sim_error needs at least one observation");
  double sum = 0.0;
  for (const auto& o : obs) {
    const double e = sim_error(o, theta, cfg, rotation_weight);
    if (e >= search::kInvalidValue) return search::kInvalidValue;
    sum += e;
  }
  return sum / static_cast<double>(obs.size());
}

struct BeliefUpdate {
  BeliefOverModels posterior;
  SearchTrace trace;
};

/// One online update: Greedy Entropy Search on the simulation error of the
/// new observation, with the current belief as prior. The final P_min becomes
/// the posterior.
inline BeliefUpdate update_belief(const BeliefOverModels& prior,
                                  const PushObservation& obs,
                                  const SearchConfig& cfg, const SimConfig& sim_cfg,
                                  double rotation_weight = kDefaultRotationWeight) {
  prior.validate();
  sim_cfg.validate();
  auto objective = [&](std::size_t i) {
    return sim_error(obs, prior.model(i), sim_cfg, rotation_weight);
  };
  auto result = search::greedy_entropy_search(objective, prior.theta_set, prior.probs, cfg);
  BeliefOverModels post{prior.theta_set, std::move(result.pmin.probs), prior.shape};
  return {std::move(post), std::move(result.trace)};
}

/// Same search on the mean error over several observations at once.
inline BeliefUpdate update_belief(const BeliefOverModels& prior,
                                  std::span<const PushObservation> obs,
                                  const SearchConfig& cfg, const SimConfig& sim_cfg,
                                  double rotation_weight = kDefaultRotationWeight) {
  prior.validate();
  sim_cfg.validate();
  auto objective = [&](std::size_t i) {
    return mean_sim_error(obs, prior.model(i), sim_cfg, rotation_weight);
  };
  auto result = search::greedy_entropy_search(objective, prior.theta_set, prior.probs, cfg);
  BeliefOverModels post{prior.theta_set, std::move(result.pmin.probs), prior.shape};
  return {std::move(post), std::move(result.trace)};
}

/// Sequential updates, one observation at a time; update k uses seed
/// cfg.seed + k.
inline std::vector<BeliefUpdate> identify_sequential(
    const BeliefOverModels& prior, std::span<const PushObservation> obs,
    const SearchConfig& cfg, const SimConfig& sim_cfg,
    double rotation_weight = kDefaultRotationWeight) {
  std::vector<BeliefUpdate> updates;
  updates.reserve(obs.size());
  const BeliefOverModels* current = &prior;
  for (std::size_t k = 0; k < obs.size(); ++k) {
    SearchConfig step_cfg = cfg;
    step_cfg.seed = cfg.seed + k;
    updates.push_back(update_belief(*current, obs[k], step_cfg, sim_cfg, rotation_weight));
    current = &updates.back().posterior;
  }
  return updates;
}

inline std::size_t map_index(const BeliefOverModels& belief) {
  belief.validate();
  return search::argmax_first(belief.probs);
}

inline ObjectModel map_estimate(const BeliefOverModels& belief) {
  return belief.model(map_index(belief));
}

inline Pose predict_motion(const Pose& x, const PushAction& action,
                           const BeliefOverModels& belief, const SimConfig& sim_cfg) {
  return sim::simulate_push(x, action, map_estimate(belief), sim_cfg).final_pose();
}

}  // namespace pushid::ident

#endif  // PUSHID_IDENT_IDENTIFICATION_HPP_
