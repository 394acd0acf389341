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

#ifndef PUSHID_SIM_TYPES_HPP_
#define PUSHID_SIM_TYPES_HPP_

#include <cmath>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "pushid/error.hpp"

namespace pushid::sim {

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double w = std::remainder(a, kTwoPi);  // [-pi, pi]
  if (w <= -std::numbers::pi) w += kTwoPi;
  return w;
}

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;

  Eigen::Vector2d position() const { return {x, y}; }
  bool operator==(const Pose&) const = default;
};

inline Pose make_pose(double x, double y, double yaw) {
  return {x, y, wrap_angle(yaw)};
}

struct Rectangle {
  double width = 0.1;  // along the body x axis
  double depth = 0.06;
};

struct Disk {
  double radius = 0.04;
};

using Shape = std::variant<Rectangle, Disk>;

struct ObjectModel {
  double mass = 1.0;        // kg
  double mu_static = 0.3;
  double mu_kinetic = 0.25;
  Shape shape = Rectangle{};

  void validate() const {
    if (!(mass > 0.0) || !std::isfinite(mass)) {
      throw InputError("object mass must be positive");
    }
    if (!(mu_kinetic >= 0.0) || !(mu_kinetic <= mu_static) || !(mu_static <= 2.0)) {
      throw InputError("friction must satisfy 0 <= mu_kinetic <= mu_static <= 2");
    }
    if (const auto* r = std::get_if<Rectangle>(&shape)) {
      if (!(r->width > 0.0) || !(r->depth > 0.0)) {
        throw InputError("rectangle dimensions must be positive");
      }
    } else if (!(std::get<Disk>(shape).radius > 0.0)) {
      throw InputError("disk radius must be positive");
    }
  }
};

/// A pusher moving in a straight line, starting at a boundary point of the
/// object. `contact_point` is in the object frame, `direction` in the world
/// frame.
struct PushAction {
  Eigen::Vector2d contact_point = Eigen::Vector2d::Zero();
  Eigen::Vector2d direction = Eigen::Vector2d::UnitX();
  double speed = 0.0;     // m/s
  double duration = 0.1;  // s

  void validate() const {
    if (!contact_point.allFinite() || !direction.allFinite() ||
        !std::isfinite(speed) || !std::isfinite(duration)) {
      throw InputError("push action contains a non-finite value");
    }
    if (std::abs(direction.norm() - 1.0) > 1e-9) {
      throw InputError("push direction must be a unit vector");
    }
    if (speed < 0.0) throw InputError("push speed must be non-negative");
    if (!(duration > 0.0)) throw InputError("push duration must be positive");
  }
};

struct TableBounds {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 1.0;
  double y_max = 1.0;

  bool contains(double x, double y) const {
    return x >= x_min && x <= x_max && y >= y_min && y <= y_max;
  }
};

struct SimConfig {
  double dt = 1e-3;                  // s
  double gravity = 9.81;             // m/s^2
  TableBounds table{};
  double quasi_static_speed = 0.05;  // m/s; pushes at or below use the limit-surface model
  double pusher_max_force = 20.0;    // N
  double pusher_friction = 0.3;      // pusher/object Coulomb coefficient
  double rest_speed = 1e-4;          // m/s
  double max_time = 30.0;            // s

  void validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
    if (!(gravity > 0.0)) throw ConfigError("gravity must be positive");
    if (!(table.x_max > table.x_min) || !(table.y_max > table.y_min)) {
      throw ConfigError("table bounds are degenerate");
    }
    if (!(quasi_static_speed >= 0.0)) {
      throw ConfigError("quasi_static_speed must be non-negative");
    }
    if (!(pusher_max_force > 0.0)) throw ConfigError("pusher_max_force must be positive");
    if (!(pusher_friction >= 0.0)) throw ConfigError("pusher_friction must be >= 0");
    if (!(rest_speed > 0.0)) throw ConfigError("rest_speed must be positive");
    if (!(max_time > 0.0)) throw ConfigError("max_time must be positive");
  }
};

enum class Phase { Pushing, Sliding };
enum class Outcome { OnTable, Dropped };

struct TrajectoryPoint {
  double t = 0.0;
  Pose pose;
  Eigen::Vector2d velocity = Eigen::Vector2d::Zero();  // world frame
  double omega = 0.0;
  Phase phase = Phase::Pushing;
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;
  Outcome outcome = Outcome::OnTable;
  double t_drop = 0.0;

  bool dropped() const { return outcome == Outcome::Dropped; }
  const Pose& initial_pose() const { return points.front().pose; }
  const Pose& final_pose() const { return points.back().pose; }
};

}  // namespace pushid::sim

#endif  // PUSHID_SIM_TYPES_HPP_
