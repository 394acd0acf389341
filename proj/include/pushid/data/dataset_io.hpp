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

#ifndef PUSHID_DATA_DATASET_IO_HPP_
#define PUSHID_DATA_DATASET_IO_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "pushid/error.hpp"
#include "pushid/ident/identification.hpp"
#include "pushid/sim/simulator.hpp"

namespace pushid::data {

using sim::Pose;
using sim::PushAction;

enum class Source { Synthetic, Imported };

struct PushRecord {
  std::string id;
  Pose x_before;
  PushAction action;
  Pose x_after;
  Source source = Source::Imported;
  std::string surface_tag;
  std::string shape_tag;

  ident::PushObservation observation() const { return {x_before, action, x_after}; }
};

inline void validate_record(const PushRecord& r) {
  auto finite_pose = [](const Pose& p) {
    return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.yaw);
  };
  if (!finite_pose(r.x_before) || !finite_pose(r.x_after)) {
    throw InputError("record '" + r.id + "' has a non-finite pose");
  }
  r.action.validate();
}

// %.9g: nine significant digits.
inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

/// One record as a single line, keys in fixed order, no trailing newline.
inline std::string format_record(const PushRecord& r) {
  validate_record(r);
  auto arr = [](std::initializer_list<double> xs) {
    std::string s = "[";
    bool first = true;
    for (double x : xs) {
      if (!first) s += ',';
      s += format_number(x);
      first = false;
    }
    return s + "]";
  };
  const auto& a = r.action;
  std::string line = "{\"id\":" + nlohmann::json(r.id).dump();
  line += ",\"x_before\":" + arr({r.x_before.x, r.x_before.y, r.x_before.yaw});
  line += ",\"contact\":" + arr({a.contact_point.x(), a.contact_point.y()});
  line += ",\"dir\":" + arr({a.direction.x(), a.direction.y()});
  line += ",\"speed\":" + format_number(a.speed);
  line += ",\"duration\":" + format_number(a.duration);
  line += ",\"x_after\":" + arr({r.x_after.x, r.x_after.y, r.x_after.yaw});
  line += ",\"surface\":" + nlohmann::json(r.surface_tag).dump();
  line += ",\"shape\":" + nlohmann::json(r.shape_tag).dump();
  line += "}";
  return line;
}

namespace detail {

inline double number(const nlohmann::json& j, const char* key, std::size_t line) {
  if (!j.contains(key)) throw ParseError(line, std::string("missing key '") + key + "'");
  const auto& v = j.at(key);
  if (!v.is_number()) throw ParseError(line, std::string("'") + key + "' is not a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ParseError(line, std::string("'") + key + "' is not finite");
  return x;
}

inline std::vector<double> numbers(const nlohmann::json& j, const char* key,
                                   std::size_t n, std::size_t line) {
  if (!j.contains(key)) throw ParseError(line, std::string("missing key '") + key + "'");
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != n) {
    throw ParseError(line, std::string("'") + key + "' must be an array of " +
                               std::to_string(n) + " numbers");
  }
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) {
      throw ParseError(line, std::string("'") + key + "' contains a non-numeric value");
    }
    const double d = x.get<double>();
    if (!std::isfinite(d)) {
      throw ParseError(line, std::string("'") + key + "' contains a non-finite value");
    }
    out.push_back(d);
  }
  return out;
}

inline std::string text(const nlohmann::json& j, const char* key, std::size_t line) {
  if (!j.contains(key) || !j.at(key).is_string()) {
    throw ParseError(line, std::string("missing string '") + key + "'");
  }
  return j.at(key).get<std::string>();
}

}  // namespace detail

inline PushRecord parse_record(const std::string& text, std::size_t line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(line, std::string("malformed record: ") + e.what());
  }
  if (!j.is_object()) throw ParseError(line, "record is not an object");

  PushRecord r;
  r.id = detail::text(j, "id", line);
  const auto xb = detail::numbers(j, "x_before", 3, line);
  const auto c = detail::numbers(j, "contact", 2, line);
  const auto d = detail::numbers(j, "dir", 2, line);
  const auto xa = detail::numbers(j, "x_after", 3, line);
  r.x_before = {xb[0], xb[1], xb[2]};
  r.x_after = {xa[0], xa[1], xa[2]};
  r.action.contact_point = {c[0], c[1]};
  Eigen::Vector2d dir(d[0], d[1]);
  // Nine printed digits perturb the norm by ~1e-9; renormalize small drift.
  if (std::abs(dir.norm() - 1.0) > 1e-6) throw ParseError(line, "'dir' is not a unit vector");
  r.action.direction = dir.normalized();
  r.action.speed = detail::number(j, "speed", line);
  r.action.duration = detail::number(j, "duration", line);
  r.surface_tag = detail::text(j, "surface", line);
  r.shape_tag = detail::text(j, "shape", line);
  r.source = Source::Imported;
  try {
    validate_record(r);
  } catch (const InputError& e) {
    throw ParseError(line, e.what());
  }
  return r;
}

inline std::vector<PushRecord> read_push_records(std::istream& in) {
  std::vector<PushRecord> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(parse_record(line, n));
  }
  return out;
}

inline std::vector<PushRecord> load_push_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open dataset '" + path + "'");
  return read_push_records(in);
}

inline void write_push_records(std::ostream& out, const std::vector<PushRecord>& records) {
  for (const auto& r : records) out << format_record(r) << '\n';
}

inline void save_push_records(const std::string& path,
                              const std::vector<PushRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write dataset '" + path + "'");
  write_push_records(out, records);
}

/// Adapter for external planar-push logs stored as CSV with the header
///   x_before,y_before,yaw_before,contact_x,contact_y,dir_x,dir_y,speed,
///   duration,x_after,y_after,yaw_after
/// where the contact is given in the world frame. Contacts are moved into the
/// object frame and snapped onto the footprint boundary.
inline std::vector<PushRecord> import_planar_push_csv(const std::string& path,
                                                      const sim::Shape& shape,
                                                      const std::string& surface_tag,
                                                      const std::string& shape_tag) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  static const std::vector<std::string> kColumns = {
      "x_before", "y_before", "yaw_before", "contact_x", "contact_y", "dir_x",
      "dir_y",    "speed",    "duration",   "x_after",   "y_after",   "yaw_after"};
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
  };
  std::string line;
  if (!std::getline(in, line)) return {};
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line);
  std::vector<std::size_t> col(kColumns.size());
  for (std::size_t k = 0; k < kColumns.size(); ++k) {
    auto it = std::find(header.begin(), header.end(), kColumns[k]);
    if (it == header.end()) throw ParseError(1, "missing column '" + kColumns[k] + "'");
    col[k] = static_cast<std::size_t>(it - header.begin());
  }
  std::vector<PushRecord> out;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    double v[12];
    for (std::size_t k = 0; k < kColumns.size(); ++k) {
      if (col[k] >= cells.size()) throw ParseError(n, "too few columns");
      try {
        std::size_t used = 0;
        v[k] = std::stod(cells[col[k]], &used);
      } catch (const std::exception&) {
        throw ParseError(n, "column '" + kColumns[k] + "' is not a number");
      }
      if (!std::isfinite(v[k])) throw ParseError(n, "column '" + kColumns[k] + "' is not finite");
    }
    PushRecord r;
    r.id = "import-" + std::to_string(n - 1);
    r.x_before = sim::make_pose(v[0], v[1], v[2]);
    r.x_after = sim::make_pose(v[9], v[10], v[11]);
    const Eigen::Vector2d contact_body = sim::to_body(r.x_before, {v[3], v[4]});
    r.action.contact_point = sim::closest_boundary(shape, contact_body).point;
    const Eigen::Vector2d dir(v[5], v[6]);
    if (!(dir.norm() > 0.0)) throw ParseError(n, "zero push direction");
    r.action.direction = dir.normalized();
    r.action.speed = v[7];
    r.action.duration = v[8];
    r.surface_tag = surface_tag;
    r.shape_tag = shape_tag;
    try {
      validate_record(r);
    } catch (const InputError& e) {
      throw ParseError(n, e.what());
    }
    out.push_back(std::move(r));
  }
  return out;
}

struct TrainTest {
  std::vector<PushRecord> train;
  std::vector<PushRecord> test;
};

/// Random disjoint train/test selection, deterministic in `seed`.
inline TrainTest split_train_test(const std::vector<PushRecord>& records,
                                  std::size_t train_count, std::size_t test_count,
                                  std::uint64_t seed) {
  if (test_count < 1) throw InputError("test_count must be at least 1");
  if (train_count + test_count > records.size()) {
    throw InputError("split needs " + std::to_string(train_count + test_count) +
                     " records but only " + std::to_string(records.size()) +
                     " are available");
  }
  std::vector<std::size_t> order(records.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  TrainTest out;
  for (std::size_t i = 0; i < train_count; ++i) out.train.push_back(records[order[i]]);
  for (std::size_t i = 0; i < test_count; ++i) {
    out.test.push_back(records[order[train_count + i]]);
  }
  return out;
}

/// Selects `select` records at random (all when 0) and deals them into k
/// folds whose sizes differ by at most one.
inline std::vector<std::vector<PushRecord>> k_folds(const std::vector<PushRecord>& records,
                                                    std::size_t k, std::uint64_t seed,
                                                    std::size_t select = 0) {
  if (k < 2) throw InputError("k_folds needs k >= 2");
  const std::size_t n = select == 0 ? records.size() : select;
  if (n > records.size() || n < k) {
    throw InputError("not enough records for " + std::to_string(k) + " folds");
  }
  std::vector<std::size_t> order(records.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<PushRecord>> folds(k);
  for (std::size_t i = 0; i < n; ++i) folds[i % k].push_back(records[order[i]]);
  return folds;
}

struct PoseNoise {
  double position = 0.0;  // m, per axis
  double yaw = 0.0;       // rad
};

/// Ranges for random exploratory pushes.
struct PushRanges {
  double speed_lo = 0.1;
  double speed_hi = 0.3;
  double duration_lo = 0.1;
  double duration_hi = 0.4;
  double max_incidence = std::numbers::pi / 6.0;  // push angle off the inward normal
  double edge_margin = 0.15;                      // re-centre when closer to a table edge
};

namespace detail {

inline Eigen::Vector2d random_boundary_point(const sim::Shape& shape, std::mt19937_64& rng,
                                             Eigen::Vector2d& normal) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  if (const auto* r = std::get_if<sim::Rectangle>(&shape)) {
    const double per = 2.0 * (r->width + r->depth);
    double s = u01(rng) * per;
    // Keep away from corners so the normal is well defined.
    auto along = [&](double len) { return (0.1 + 0.8 * (s / len)) * len - 0.5 * len; };
    if (s < r->width) {
      normal = {0.0, -1.0};
      return {along(r->width), -0.5 * r->depth};
    }
    s -= r->width;
    if (s < r->depth) {
      normal = {1.0, 0.0};
      return {0.5 * r->width, along(r->depth)};
    }
    s -= r->depth;
    if (s < r->width) {
      normal = {0.0, 1.0};
      return {-along(r->width), 0.5 * r->depth};
    }
    s -= r->width;
    normal = {-1.0, 0.0};
    return {-0.5 * r->width, -along(r->depth)};
  }
  const double a = u01(rng) * 2.0 * std::numbers::pi;
  normal = {std::cos(a), std::sin(a)};
  return std::get<sim::Disk>(shape).radius * normal;
}

inline bool near_edge(const Pose& p, const sim::TableBounds& t, double margin) {
  return p.x - t.x_min < margin || t.x_max - p.x < margin || p.y - t.y_min < margin ||
         t.y_max - p.y < margin;
}

}  // namespace detail

/// Random exploratory pushes on a simulated object with known parameters.
/// Pushes are chained; the object is put back at the table centre whenever it
/// ends near an edge. Pose noise is added to x_after only.
inline std::vector<PushRecord> generate_synthetic_dataset(
    const sim::ObjectModel& theta_gt, std::size_t n_pushes, const PoseNoise& noise,
    std::uint64_t seed, const sim::SimConfig& sim_cfg, const PushRanges& ranges = {},
    const std::string& surface_tag = "synthetic", const std::string& shape_tag = "synthetic") {
  if (n_pushes < 1) throw InputError("n_pushes must be at least 1");
  theta_gt.validate();
  sim_cfg.validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * u01(rng); };

  const auto& tb = sim_cfg.table;
  const Pose centre{0.5 * (tb.x_min + tb.x_max), 0.5 * (tb.y_min + tb.y_max), 0.0};
  Pose pose = sim::make_pose(centre.x, centre.y, uniform(-std::numbers::pi, std::numbers::pi));

  std::vector<PushRecord> out;
  while (out.size() < n_pushes) {
    if (detail::near_edge(pose, tb, ranges.edge_margin)) {
      pose = sim::make_pose(centre.x, centre.y, pose.yaw);
    }
    Eigen::Vector2d normal;
    PushAction a;
    a.contact_point = detail::random_boundary_point(theta_gt.shape, rng, normal);
    const double incidence = uniform(-ranges.max_incidence, ranges.max_incidence);
    const Eigen::Vector2d in_body = sim::rotation(incidence) * (-normal);
    a.direction = (sim::rotation(pose.yaw) * in_body).normalized();
    a.speed = uniform(ranges.speed_lo, ranges.speed_hi);
    a.duration = uniform(ranges.duration_lo, ranges.duration_hi);

    const sim::Trajectory traj = sim::simulate_push(pose, a, theta_gt, sim_cfg);
    if (traj.dropped()) {
      pose = centre;
      continue;
    }
    const Pose truth = traj.final_pose();
    PushRecord r;
    r.id = "syn-" + std::to_string(seed) + "-" + std::to_string(out.size());
    r.x_before = pose;
    r.action = a;
    r.x_after = truth;
    if (noise.position > 0.0 || noise.yaw > 0.0) {
      const double nx = noise.position * gauss(rng);
      const double ny = noise.position * gauss(rng);
      const double nyaw = noise.yaw * gauss(rng);
      r.x_after = sim::make_pose(truth.x + nx, truth.y + ny, truth.yaw + nyaw);
    }
    r.source = Source::Synthetic;
    r.surface_tag = surface_tag;
    r.shape_tag = shape_tag;
    out.push_back(std::move(r));
    pose = truth;
  }
  return out;
}

}  // namespace pushid::data

#endif  // PUSHID_DATA_DATASET_IO_HPP_
