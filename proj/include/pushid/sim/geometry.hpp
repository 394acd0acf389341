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

#ifndef PUSHID_SIM_GEOMETRY_HPP_
#define PUSHID_SIM_GEOMETRY_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <variant>

#include <Eigen/Core>

#include "pushid/sim/types.hpp"

namespace pushid::sim {

inline Eigen::Matrix2d rotation(double yaw) {
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  Eigen::Matrix2d r;
  r << c, -s, s, c;
  return r;
}

inline double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

inline Eigen::Vector2d perp(const Eigen::Vector2d& a) { return {-a.y(), a.x()}; }

inline Eigen::Vector2d to_world(const Pose& pose, const Eigen::Vector2d& body) {
  return rotation(pose.yaw) * body + pose.position();
}

inline Eigen::Vector2d to_body(const Pose& pose, const Eigen::Vector2d& world) {
  return rotation(pose.yaw).transpose() * (world - pose.position());
}

/// Closest boundary point of a shape to a body-frame query point.
/// `signed_distance` is negative inside the footprint.
struct BoundaryPoint {
  Eigen::Vector2d point;
  Eigen::Vector2d normal;  // outward, unit
  double signed_distance = 0.0;
};

inline BoundaryPoint closest_boundary(const Rectangle& rect, const Eigen::Vector2d& q) {
  const double hx = 0.5 * rect.width;
  const double hy = 0.5 * rect.depth;
  const double ex = std::abs(q.x()) - hx;
  const double ey = std::abs(q.y()) - hy;
  const double sx = q.x() >= 0.0 ? 1.0 : -1.0;
  const double sy = q.y() >= 0.0 ? 1.0 : -1.0;
  BoundaryPoint b;
  if (ex <= 0.0 && ey <= 0.0) {
    if (ex >= ey) {
      b.point = {sx * hx, q.y()};
      b.normal = {sx, 0.0};
      b.signed_distance = ex;
    } else {
      b.point = {q.x(), sy * hy};
      b.normal = {0.0, sy};
      b.signed_distance = ey;
    }
    return b;
  }
  b.point = {std::clamp(q.x(), -hx, hx), std::clamp(q.y(), -hy, hy)};
  const Eigen::Vector2d d = q - b.point;
  b.signed_distance = d.norm();
  if (ex > 0.0 && ey > 0.0) {
    b.normal = d / b.signed_distance;
  } else if (ex > 0.0) {
    b.normal = {sx, 0.0};
  } else {
    b.normal = {0.0, sy};
  }
  return b;
}

inline BoundaryPoint closest_boundary(const Disk& disk, const Eigen::Vector2d& q) {
  const double r = q.norm();
  BoundaryPoint b;
  b.normal = r > 0.0 ? Eigen::Vector2d(q / r) : Eigen::Vector2d::UnitX();
  b.point = disk.radius * b.normal;
  b.signed_distance = r - disk.radius;
  return b;
}

inline BoundaryPoint closest_boundary(const Shape& shape, const Eigen::Vector2d& q) {
  return std::visit([&](const auto& s) { return closest_boundary(s, q); }, shape);
}

inline bool on_boundary(const Shape& shape, const Eigen::Vector2d& q,
                        double tol = 1e-6) {
  return std::abs(closest_boundary(shape, q).signed_distance) <= tol;
}

/// Boundary point hit by the ray from the centroid along `dir` (body frame).
inline Eigen::Vector2d ray_boundary(const Shape& shape, const Eigen::Vector2d& dir) {
  const Eigen::Vector2d u = dir.normalized();
  if (const auto* r = std::get_if<Rectangle>(&shape)) {
    const double tx = u.x() != 0.0 ? 0.5 * r->width / std::abs(u.x()) : std::numeric_limits<double>::infinity();
    const double ty = u.y() != 0.0 ? 0.5 * r->depth / std::abs(u.y()) : std::numeric_limits<double>::infinity();
    return std::min(tx, ty) * u;
  }
  return std::get<Disk>(shape).radius * u;
}

// Mean distance of the footprint from its centroid under uniform pressure;
// ratio of maximum friction moment to maximum friction force.
inline double friction_radius(const Shape& shape) {
  if (const auto* r = std::get_if<Rectangle>(&shape)) {
    const double a = 0.5 * r->width;
    const double b = 0.5 * r->depth;
    const double d = std::hypot(a, b);
    // Integral of |p| over the quadrant [0,a]x[0,b], divided by its area.
    const double integral = (2.0 * a * b * d + a * a * a * std::log((b + d) / a) +
                             b * b * b * std::log((a + d) / b)) /
                            6.0;
    return integral / (a * b);
  }
  return 2.0 * std::get<Disk>(shape).radius / 3.0;
}

// I / m for a uniform-density footprint.
inline double gyration_sq(const Shape& shape) {
  if (const auto* r = std::get_if<Rectangle>(&shape)) {
    return (r->width * r->width + r->depth * r->depth) / 12.0;
  }
  const double rad = std::get<Disk>(shape).radius;
  return 0.5 * rad * rad;
}

}  // namespace pushid::sim

#endif  // PUSHID_SIM_GEOMETRY_HPP_
