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

#ifndef PUSHID_POLICY_POLICY_OPT_HPP_
#define PUSHID_POLICY_POLICY_OPT_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "pushid/error.hpp"
#include "pushid/ident/identification.hpp"
#include "pushid/search/greedy_entropy_search.hpp"
#include "pushid/sim/simulator.hpp"

namespace pushid::policy {

using sim::Pose;
using sim::PushAction;

enum class PolicyKind { PushDirection, PushSpeed };

/// One open-loop pushing policy: a single searched scalar (world push angle
/// or pusher speed) on top of fixed action fields.
struct PolicyParam {
  PolicyKind kind = PolicyKind::PushDirection;
  double value = 0.0;
  PushAction fixed{};
  std::size_t repeats = 1;

  std::size_t push_count() const { return repeats; }

  PushAction action_at(const Pose&, std::size_t) const {
    PushAction a = fixed;
    if (kind == PolicyKind::PushDirection) {
      a.direction = {std::cos(value), std::sin(value)};
    } else {
      a.speed = value;
    }
    return a;
  }
};
static_assert(sim::PushPolicy<PolicyParam>);

/// Contact point, in the object frame, that pushes through the centroid when
/// the pusher moves along world angle `angle`.
inline Eigen::Vector2d centered_contact(const Pose& x0, const sim::Shape& shape,
                                        double angle) {
  const Eigen::Vector2d world_dir(std::cos(angle), std::sin(angle));
  const Eigen::Vector2d body_dir = sim::rotation(x0.yaw).transpose() * world_dir;
  return sim::ray_boundary(shape, -body_dir);
}

inline PolicyParam direction_policy(const Pose& x0, const sim::Shape& shape,
                                    double angle, double speed, double duration) {
  PolicyParam p;
  p.kind = PolicyKind::PushDirection;
  p.value = sim::wrap_angle(angle);
  p.fixed.contact_point = centered_contact(x0, shape, p.value);
  p.fixed.direction = {std::cos(p.value), std::sin(p.value)};
  p.fixed.speed = speed;
  p.fixed.duration = duration;
  return p;
}

inline PolicyParam speed_policy(const Pose& x0, const sim::Shape& shape,
                                double heading, double speed, double duration) {
  PolicyParam p = direction_policy(x0, shape, heading, speed, duration);
  p.kind = PolicyKind::PushSpeed;
  p.value = speed;
  return p;
}

/// Policies plus the scalar coordinates the optimizer works on.
struct PolicySet {
  std::vector<PolicyParam> params;
  search::CandidateSet coords;

  std::size_t size() const { return params.size(); }
};

namespace detail {
inline std::vector<double> sample_values(double lo, double hi, std::size_t n,
                                         bool random, std::uint64_t seed) {
  if (n < 1) throw ConfigError("policy set needs at least one candidate");
  if (!random) return search::linspace(lo, hi, n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

inline search::CandidateSet scalar_coords(const std::vector<double>& v, double lo,
                                          double hi) {
  std::vector<Eigen::VectorXd> pts;
  pts.reserve(v.size());
  for (double x : v) pts.push_back(Eigen::VectorXd::Constant(1, x));
  return search::CandidateSet(std::move(pts), {{lo, hi}});
}
}  // namespace detail

/// Push directions in a cone of +-half_width around `heading`, each pushing
/// through the centroid. A grid by default; uniform random draws when
/// `random` is set.
inline PolicySet make_direction_set(const Pose& x0, const sim::Shape& shape,
                                    double heading, double half_width, std::size_t n,
                                    double speed, double duration, bool random = false,
                                    std::uint64_t seed = 0) {
  const auto offsets = detail::sample_values(-half_width, half_width, n, random, seed);
  PolicySet set{{}, detail::scalar_coords(offsets, -half_width, half_width)};
  for (double off : offsets) {
    set.params.push_back(direction_policy(x0, shape, heading + off, speed, duration));
  }
  return set;
}

inline PolicySet make_speed_set(const Pose& x0, const sim::Shape& shape, double heading,
                                double lo, double hi, std::size_t n, double duration,
                                bool random = false, std::uint64_t seed = 0) {
  if (lo < 0.0 || hi < lo) throw ConfigError("invalid speed range");
  const auto speeds = detail::sample_values(lo, hi, n, random, seed);
  PolicySet set{{}, detail::scalar_coords(speeds, lo, hi)};
  for (double s : speeds) set.params.push_back(speed_policy(x0, shape, heading, s, duration));
  return set;
}

struct CostSpec {
  Eigen::Vector2d goal = Eigen::Vector2d::Zero();
  double drop_penalty = 10.0;  // m-equivalent

  void validate() const {
    if (!goal.allFinite()) throw InputError("goal must be finite");
    if (!(drop_penalty >= 0.0)) throw InputError("drop_penalty must be >= 0");
  }
};

struct CostBreakdown {
  double cost = 0.0;
  double distance = 0.0;  // final distance to goal, also reported after drops
  bool dropped = false;
};

inline CostBreakdown evaluate_rollout(const sim::Trajectory& traj, const CostSpec& cost) {
  const Pose& f = traj.final_pose();
  CostBreakdown out;
  out.distance = std::hypot(f.x - cost.goal.x(), f.y - cost.goal.y());
  out.dropped = traj.dropped();
  out.cost = out.dropped ? cost.drop_penalty : out.distance;
  return out;
}

/// J = final distance to goal, or the drop penalty if the object fell off.
inline double rollout_cost(const Pose& x0, const PolicyParam& eta,
                           const sim::ObjectModel& model, const CostSpec& cost,
                           const sim::SimConfig& sim_cfg) {
  cost.validate();
  try {
    return evaluate_rollout(sim::rollout_policy(x0, eta, model, sim_cfg), cost).cost;
  } catch (const Error&) {
    return search::kInvalidValue;
  }
}

struct PolicyResult {
  PolicyParam eta_star;
  std::size_t index = 0;
  search::SearchTrace trace;
};

/// Greedy Entropy Search over the policy set, scoring each policy by its
/// rollout cost under the MAP model of `belief`.
inline PolicyResult optimize_policy(const Pose& x0, const PolicySet& pi_set,
                                    const ident::BeliefOverModels& belief,
                                    const CostSpec& cost, const search::SearchConfig& cfg,
                                    const sim::SimConfig& sim_cfg,
                                    const Eigen::VectorXd& prior = {}) {
  if (pi_set.size() < 1) throw InputError("policy set must not be empty");
  const sim::ObjectModel model = ident::map_estimate(belief);
  auto objective = [&](std::size_t i) {
    return rollout_cost(x0, pi_set.params[i], model, cost, sim_cfg);
  };
  auto result = search::greedy_entropy_search(objective, pi_set.coords, prior, cfg);
  PolicyResult out;
  out.index = result.trace.best_index;
  out.eta_star = pi_set.params[out.index];
  out.trace = std::move(result.trace);
  return out;
}

}  // namespace pushid::policy

#endif  // PUSHID_POLICY_POLICY_OPT_HPP_
