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

#ifndef PUSHID_SIM_SIMULATOR_HPP_
#define PUSHID_SIM_SIMULATOR_HPP_

#include <cmath>
#include <concepts>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pushid/error.hpp"
#include "pushid/sim/geometry.hpp"
#include "pushid/sim/types.hpp"

namespace pushid::sim {

namespace detail {

struct Twist {
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  double omega = 0.0;
};

// Object twist produced by a point pusher under the quasi-static ellipsoidal
// limit surface with friction radius c. Returns a zero twist when the pusher
// is not moving into the object.
inline Twist quasi_static_twist(const Eigen::Vector2d& r, const Eigen::Vector2d& n_in,
                                const Eigen::Vector2d& u, double c, double mu_contact) {
  Twist tw;
  const double un = u.dot(n_in);
  if (un <= 0.0) return tw;
  const Eigen::Vector2d pr = perp(r);
  const Eigen::Matrix2d a = Eigen::Matrix2d::Identity() + pr * pr.transpose() / (c * c);
  const Eigen::Vector2d f = a.inverse() * u;
  const double half = std::atan(mu_contact);
  const double ang = std::atan2(cross2(n_in, f), n_in.dot(f));
  if (n_in.dot(f) > 0.0 && std::abs(ang) <= half) {
    tw.v = f;
    tw.omega = cross2(r, f) / (c * c);
    return tw;
  }
  // Sliding contact: the force sits on the friction cone edge.
  const Eigen::Vector2d fe = rotation(ang >= 0.0 ? half : -half) * n_in;
  const double vn = (a * fe).dot(n_in);
  if (vn <= 0.0) return tw;
  const double lambda = un / vn;
  tw.v = lambda * fe;
  tw.omega = lambda * cross2(r, fe) / (c * c);
  return tw;
}

}  // namespace detail

/// Simulates one push followed by free sliding until rest.
///
/// Pushes faster than `cfg.quasi_static_speed` are integrated with Newtonian
/// dynamics: the pusher is a force-limited velocity source (normal impulse up
/// to `pusher_max_force`, tangential impulse inside the contact friction
/// cone), the ground applies Coulomb friction through an ellipsoidal limit
/// surface. Slower pushes use the quasi-static limit-surface kinematics and
/// stop with the pusher. The trajectory halts once the object centre leaves
/// the table.
inline Trajectory simulate_push(const Pose& x0, const PushAction& action,
                                const ObjectModel& model, const SimConfig& cfg) {
  cfg.validate();
  model.validate();
  action.validate();
  if (!on_boundary(model.shape, action.contact_point, 1e-6)) {
    throw InputError("contact point is not on the object boundary");
  }
  if (!std::isfinite(x0.x) || !std::isfinite(x0.y) || !std::isfinite(x0.yaw)) {
    throw InputError("initial pose is not finite");
  }
  if (!cfg.table.contains(x0.x, x0.y)) {
    throw InputError("initial pose is outside the table");
  }

  const double dt = cfg.dt;
  const double g = cfg.gravity;
  const double m = model.mass;
  const double c = friction_radius(model.shape);
  const double rho2 = gyration_sq(model.shape);
  const double inertia = m * rho2;
  const double kappa = c * c / rho2;  // angular/linear friction deceleration ratio
  const double mu_c = cfg.pusher_friction;
  const bool quasi_static = action.speed <= cfg.quasi_static_speed;

  Pose pose{x0.x, x0.y, wrap_angle(x0.yaw)};
  Eigen::Vector2d vel = Eigen::Vector2d::Zero();
  double omega = 0.0;
  bool moving = false;

  Trajectory traj;
  traj.points.push_back({0.0, pose, vel, omega, Phase::Pushing});

  const Eigen::Vector2d u = action.speed * action.direction;
  Eigen::Vector2d pusher = to_world(pose, action.contact_point);
  const auto push_steps = static_cast<std::size_t>(
      std::max<long long>(1, std::llround(action.duration / dt)));
  const auto max_steps = static_cast<std::size_t>(std::ceil(cfg.max_time / dt));
  const double contact_tol = 0.5 * action.speed * dt + 1e-9;

  for (std::size_t k = 1; k <= max_steps; ++k) {
    const bool pushing = k <= push_steps;
    bool in_contact = false;
    if (quasi_static) {
      vel.setZero();
      omega = 0.0;
    }

    if (pushing && action.speed > 0.0) {
      pusher += u * dt;
      const BoundaryPoint bp = closest_boundary(model.shape, to_body(pose, pusher));
      in_contact = bp.signed_distance <= contact_tol;
      if (in_contact) {
        const Eigen::Matrix2d rot = rotation(pose.yaw);
        const Eigen::Vector2d r = rot * bp.point;
        const Eigen::Vector2d n_in = -(rot * bp.normal);

        if (quasi_static) {
          const detail::Twist tw = detail::quasi_static_twist(r, n_in, u, c, mu_c);
          const double s = std::sqrt(tw.v.squaredNorm() + c * c * tw.omega * tw.omega);
          bool move = s > 0.0;
          if (move) {
            const double mu = moving ? model.mu_kinetic : model.mu_static;
            move = mu * m * g * tw.v.norm() / s <= cfg.pusher_max_force;
          }
          vel = move ? tw.v : Eigen::Vector2d::Zero();
          omega = move ? tw.omega : 0.0;
          moving = move;
        } else {
          const Eigen::Vector2d vc = vel + omega * perp(r);
          const double dn = (u - vc).dot(n_in);
          if (dn > 0.0) {
            const double rn = cross2(r, n_in);
            const double jn = dn / (1.0 / m + rn * rn / inertia);
            const Eigen::Vector2d t_dir = perp(n_in);
            const double rt = cross2(r, t_dir);
            double jt = (u - vc).dot(t_dir) / (1.0 / m + rt * rt / inertia);
            jt = std::clamp(jt, -mu_c * jn, mu_c * jn);
            Eigen::Vector2d impulse = jn * n_in + jt * t_dir;
            const double j_max = cfg.pusher_max_force * dt;
            if (impulse.norm() > j_max) impulse *= j_max / impulse.norm();

            if (!moving) {
              // Static limit surface test against the applied wrench.
              const double f_s = model.mu_static * m * g;
              const double fx = impulse.norm() / dt / f_s;
              const double mz = cross2(r, impulse) / dt / (f_s * c);
              moving = fx * fx + mz * mz > 1.0;
            }
            if (moving) {
              vel += impulse / m;
              omega += cross2(r, impulse) / inertia;
            }
          }
        }
        pusher = to_world(pose, bp.point);
      }
    }
    if (quasi_static && !in_contact) moving = false;

    if (!quasi_static && moving) {
      const double s = std::sqrt(vel.squaredNorm() + c * c * omega * omega);
      if (s > 0.0) {
        const double decel = model.mu_kinetic * g * dt / s;
        vel *= std::max(0.0, 1.0 - decel);
        omega *= std::max(0.0, 1.0 - kappa * decel);
      }
      if (!in_contact && vel.norm() < cfg.rest_speed &&
          c * std::abs(omega) < cfg.rest_speed) {
        vel.setZero();
        omega = 0.0;
      }
      if (vel.isZero(0.0) && omega == 0.0) moving = false;
    }

    pose.x += dt * vel.x();
    pose.y += dt * vel.y();
    pose.yaw = wrap_angle(pose.yaw + dt * omega);
    const double t = static_cast<double>(k) * dt;
    traj.points.push_back({t, pose, vel, omega, pushing ? Phase::Pushing : Phase::Sliding});

    if (!cfg.table.contains(pose.x, pose.y)) {
      traj.outcome = Outcome::Dropped;
      traj.t_drop = t;
      break;
    }
    if (!pushing && !moving) break;
  }
  return traj;
}

/// An open-loop sequence of pushes, each computed from the pose reached by
/// the previous one.
template <typename P>
concept PushPolicy = requires(const P& p, const Pose& x, std::size_t k) {
  { p.push_count() } -> std::convertible_to<std::size_t>;
  { p.action_at(x, k) } -> std::same_as<PushAction>;
};

struct PushSequence {
  std::vector<PushAction> pushes;

  std::size_t push_count() const { return pushes.size(); }
  PushAction action_at(const Pose&, std::size_t k) const { return pushes[k]; }
};

/// Chains the policy's pushes, feeding the final pose of each into the next.
/// Stops at the first drop.
template <PushPolicy Policy>
Trajectory rollout_policy(const Pose& x0, const Policy& policy,
                          const ObjectModel& model, const SimConfig& cfg) {
  Trajectory out;
  out.points.push_back({0.0, Pose{x0.x, x0.y, wrap_angle(x0.yaw)}});
  for (std::size_t k = 0; k < policy.push_count(); ++k) {
    const Pose start = out.final_pose();
    const Trajectory seg = simulate_push(start, policy.action_at(start, k), model, cfg);
    const double offset = out.points.back().t;
    for (std::size_t i = 1; i < seg.points.size(); ++i) {
      TrajectoryPoint p = seg.points[i];
      p.t += offset;
      out.points.push_back(p);
    }
    if (seg.dropped()) {
      out.outcome = Outcome::Dropped;
      out.t_drop = seg.t_drop + offset;
      break;
    }
  }
  return out;
}

struct Displacement {
  double translation = 0.0;  // m
  double rotation = 0.0;     // rad, in [0, pi]
};

inline Displacement final_displacement(const Trajectory& traj) {
  if (traj.points.empty()) throw InputError("trajectory is empty");
  const Pose& a = traj.initial_pose();
  const Pose& b = traj.final_pose();
  return {std::hypot(b.x - a.x, b.y - a.y), std::abs(wrap_angle(b.yaw - a.yaw))};
}

}  // namespace pushid::sim

#endif  // PUSHID_SIM_SIMULATOR_HPP_
