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

#ifndef PUSHID_SEARCH_CANDIDATE_SET_HPP_
#define PUSHID_SEARCH_CANDIDATE_SET_HPP_

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "pushid/error.hpp"

namespace pushid::search {

struct Bounds {
  double lo = 0.0;
  double hi = 1.0;
};

/// Ordered, finite set of distinct parameter vectors together with the box
/// used to map each dimension onto [0, 1].
class CandidateSet {
 public:
  CandidateSet() = default;

  explicit CandidateSet(std::vector<Eigen::VectorXd> points)
      : CandidateSet(points, bounding_box(points)) {}

  CandidateSet(std::vector<Eigen::VectorXd> points, std::vector<Bounds> bounds)
      : points_(std::move(points)), bounds_(std::move(bounds)) {
    if (points_.empty()) throw InputError("candidate set must not be empty");
    const Eigen::Index dim = points_.front().size();
    if (static_cast<std::size_t>(dim) != bounds_.size()) {
      throw InputError("candidate bounds do not match point dimension");
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
      const auto& p = points_[i];
      if (p.size() != dim) {
        throw InputError("candidate " + std::to_string(i) +
                         " has inconsistent dimension");
      }
      if (!p.allFinite()) {
        throw InputError("candidate " + std::to_string(i) + " is not finite");
      }
      for (Eigen::Index d = 0; d < dim; ++d) {
        const Bounds& b = bounds_[static_cast<std::size_t>(d)];
        if (p[d] < b.lo || p[d] > b.hi) {
          throw InputError("candidate " + std::to_string(i) +
                           " lies outside its bounds");
        }
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (points_[j] == p) {
          throw InputError("candidates " + std::to_string(j) + " and " +
                           std::to_string(i) + " are identical");
        }
      }
    }
    normalized_.reserve(points_.size());
    for (const auto& p : points_) normalized_.push_back(normalize(p));
  }

  /// Cartesian product of per-dimension value lists; the last dimension
  /// varies fastest.
  static CandidateSet grid(const std::vector<std::vector<double>>& axes) {
    if (axes.empty()) throw InputError("grid needs at least one axis");
    std::vector<Bounds> bounds;
    std::size_t total = 1;
    for (const auto& axis : axes) {
      if (axis.empty()) throw InputError("grid axis must not be empty");
      auto [lo, hi] = std::minmax_element(axis.begin(), axis.end());
      bounds.push_back({*lo, *hi});
      total *= axis.size();
    }
    std::vector<Eigen::VectorXd> points;
    points.reserve(total);
    std::vector<std::size_t> idx(axes.size(), 0);
    for (std::size_t k = 0; k < total; ++k) {
      Eigen::VectorXd p(static_cast<Eigen::Index>(axes.size()));
      for (std::size_t d = 0; d < axes.size(); ++d) {
        p[static_cast<Eigen::Index>(d)] = axes[d][idx[d]];
      }
      points.push_back(std::move(p));
      for (std::size_t d = axes.size(); d-- > 0;) {
        if (++idx[d] < axes[d].size()) break;
        idx[d] = 0;
      }
    }
    return CandidateSet(std::move(points), std::move(bounds));
  }

  std::size_t size() const { return points_.size(); }
  Eigen::Index dimension() const { return points_.front().size(); }
  const Eigen::VectorXd& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<Eigen::VectorXd>& points() const { return points_; }
  const std::vector<Bounds>& bounds() const { return bounds_; }
  std::span<const Eigen::VectorXd> normalized() const { return normalized_; }

  // Degenerate dimensions (lo == hi) map to 0.5.
  Eigen::VectorXd normalize(const Eigen::VectorXd& p) const {
    Eigen::VectorXd u(p.size());
    for (Eigen::Index d = 0; d < p.size(); ++d) {
      const Bounds& b = bounds_[static_cast<std::size_t>(d)];
      const double span = b.hi - b.lo;
      u[d] = span > 0.0 ? (p[d] - b.lo) / span : 0.5;
    }
    return u;
  }

 private:
  static std::vector<Bounds> bounding_box(
      const std::vector<Eigen::VectorXd>& points) {
    if (points.empty()) return {};
    std::vector<Bounds> b(static_cast<std::size_t>(points.front().size()));
    for (std::size_t d = 0; d < b.size(); ++d) {
      const auto dd = static_cast<Eigen::Index>(d);
      b[d] = {points.front()[dd], points.front()[dd]};
      for (const auto& p : points) {
        if (p.size() != points.front().size()) break;
        b[d].lo = std::min(b[d].lo, p[dd]);
        b[d].hi = std::max(b[d].hi, p[dd]);
      }
    }
    return b;
  }

  std::vector<Eigen::VectorXd> points_;
  std::vector<Bounds> bounds_;
  std::vector<Eigen::VectorXd> normalized_;
};

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n == 0) throw InputError("linspace needs at least one point");
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  v.back() = hi;
  return v;
}

}  // namespace pushid::search

#endif  // PUSHID_SEARCH_CANDIDATE_SET_HPP_
