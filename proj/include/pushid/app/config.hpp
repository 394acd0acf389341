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


#ifndef PUSHID_APP_CONFIG_HPP_
#define PUSHID_APP_CONFIG_HPP_

#include <cstdint>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "pushid/baselines/power.hpp"
#include "pushid/error.hpp"
#include "pushid/ident/identification.hpp"
#include "pushid/search/greedy_entropy_search.hpp"
#include "pushid/sim/types.hpp"

namespace pushid::app {

using Json = nlohmann::ordered_json;

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

struct ShapeSpec {
  std::string kind = "rectangle";  // rectangle | disk
  double width = 0.1;
  double depth = 0.06;
  double radius = 0.04;

  sim::Shape shape() const {
    if (kind == "rectangle") return sim::Rectangle{width, depth};
    if (kind == "disk") return sim::Disk{radius};
    throw ConfigError("unknown shape kind '" + kind + "'");
  }
};

// Ground-truth draws for synthetic worlds: mu_static = ratio * mu_kinetic.
struct WorldSpec {
  Range mass{0.05, 2.0};
  Range mu_kinetic{0.05, 0.8};
  double static_ratio = 1.2;
  double noise_position = 0.0;  // m
  double noise_yaw = 0.0;       // rad
};

struct IdentifySpec {
  std::size_t n_train = 6;
  std::size_t n_test = 3;
  std::vector<std::size_t> train_sizes{1, 3, 6};  // predict, synthetic mode
  std::size_t k_folds = 0;                         // predict, dataset mode
  std::size_t select = 0;                          // records drawn before folding; 0 = all
  WorldSpec world{};
};

struct GoalPushSpec {
  double start_x = 0.3;
  double start_y = 0.5;
  double start_yaw = 0.0;
  double goal_x = 0.6;
  double goal_y = 0.55;
  std::size_t n_pushes = 2;
  double speed = 0.2;
  double cone_half_width = std::numbers::pi / 6.0;
  std::size_t n_policies = 25;
  double success_radius = 0.01;
  std::size_t n_train = 3;
  WorldSpec world{0.2, 1.0, 0.15, 0.6, 1.2, 0.0, 0.0};
};

struct HighSpeedSpec {
  double start_x = 0.3;
  double start_y = 0.4;
  double goal_x = 1.3;
  double goal_y = 0.4;
  double speed_lo = 0.1;
  double speed_hi = 2.0;
  std::size_t n_speeds = 30;
  double duration = 0.1;
  std::size_t rollout_budget = 8;
  std::size_t n_low_speed = 3;
  double drop_penalty = 10.0;
  WorldSpec world{0.2, 0.8, 0.08, 0.22, 1.2, 0.0, 0.0};
};

struct SimulateSpec {
  double mass = 0.5;
  double mu_static = 0.36;
  double mu_kinetic = 0.3;
  double x = 0.3;
  double y = 0.5;
  double yaw = 0.0;
  double contact_x = -0.05;
  double contact_y = 0.0;
  double angle = 0.0;  // world push direction
  double speed = 0.3;
  double duration = 0.2;
};

struct RunConfig {
  std::string experiment;
  std::string dataset;  // JSONL push records; synthetic data when empty
  std::string out_dir = "out";
  std::vector<std::uint64_t> seeds{0};
  std::size_t threads = 0;  // 0 = hardware concurrency
  bool quiet = false;
  bool random_pi = false;

  search::SearchConfig search{};
  sim::SimConfig sim{};
  baselines::PowerConfig power{};
  ident::ThetaGridSpec theta_grid{};
  ShapeSpec object{};
  double rotation_weight = ident::kDefaultRotationWeight;

  IdentifySpec identify{};
  GoalPushSpec goal_push{};
  HighSpeedSpec high_speed{};
  SimulateSpec simulate{};

  std::size_t worker_count() const {
    if (threads > 0) return threads;
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
  }
};

inline const std::vector<std::string>& experiments() {
  static const std::vector<std::string> names{"identify", "predict", "goal-push",
                                              "high-speed-bench", "simulate"};
  return names;
}

namespace detail {

// Reads `key` into `field` when present.
template <typename T>
void read(const Json& j, const char* key, T& field) {
  if (!j.contains(key)) return;
  try {
    field = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

inline void reject_unknown(const Json& j, const std::string& section,
                           std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError("config section '" + section + "' must be an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw ConfigError("unknown config key '" + section + "." + it.key() + "'");
    }
  }
}

inline void read_range(const Json& j, const char* key, Range& r) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ConfigError(std::string("config key '") + key + "' must be [lo, hi]");
  }
  r = {v[0].get<double>(), v[1].get<double>()};
}

inline void read_world(const Json& j, WorldSpec& w) {
  reject_unknown(j, "world", {"mass", "mu_kinetic", "static_ratio", "noise_position",
                              "noise_yaw"});
  read_range(j, "mass", w.mass);
  read_range(j, "mu_kinetic", w.mu_kinetic);
  read(j, "static_ratio", w.static_ratio);
  read(j, "noise_position", w.noise_position);
  read(j, "noise_yaw", w.noise_yaw);
}

inline Json world_json(const WorldSpec& w) {
  return Json{{"mass", {w.mass.lo, w.mass.hi}},
              {"mu_kinetic", {w.mu_kinetic.lo, w.mu_kinetic.hi}},
              {"static_ratio", w.static_ratio},
              {"noise_position", w.noise_position},
              {"noise_yaw", w.noise_yaw}};
}

inline void validate_world(const WorldSpec& w, const std::string& where) {
  if (!(w.mass.lo > 0.0) || w.mass.hi < w.mass.lo || w.mu_kinetic.lo < 0.0 ||
      w.mu_kinetic.hi < w.mu_kinetic.lo || w.static_ratio < 1.0 ||
      w.static_ratio * w.mu_kinetic.hi > 2.0 || w.noise_position < 0.0 || w.noise_yaw < 0.0) {
    throw ConfigError("invalid ground-truth ranges in '" + where + "'");
  }
}

}  // namespace detail

inline void apply_json(const Json& j, RunConfig& c) {
  using detail::read;
  detail::reject_unknown(j, "<root>",
                         {"experiment", "dataset", "out_dir", "seeds", "threads", "quiet",
                          "random_pi", "rotation_weight", "search", "sim", "power",
                          "theta_grid", "object", "identify", "goal_push", "high_speed",
                          "simulate"});
  read(j, "experiment", c.experiment);
  read(j, "dataset", c.dataset);
  read(j, "out_dir", c.out_dir);
  read(j, "seeds", c.seeds);
  read(j, "threads", c.threads);
  read(j, "quiet", c.quiet);
  read(j, "random_pi", c.random_pi);
  read(j, "rotation_weight", c.rotation_weight);

  if (j.contains("search")) {
    const auto& s = j.at("search");
    detail::reject_unknown(s, "search", {"eval_budget", "mc_samples", "entropy_tol",
                                         "patience", "lengthscale", "noise_ratio",
                                         "prior_weight"});
    read(s, "eval_budget", c.search.eval_budget);
    read(s, "mc_samples", c.search.mc_samples);
    read(s, "entropy_tol", c.search.entropy_tol);
    read(s, "patience", c.search.patience);
    read(s, "lengthscale", c.search.lengthscale);
    read(s, "noise_ratio", c.search.noise_ratio);
    read(s, "prior_weight", c.search.prior_weight);
  }
  if (j.contains("sim")) {
    const auto& s = j.at("sim");
    detail::reject_unknown(s, "sim", {"dt", "gravity", "table", "quasi_static_speed",
                                      "pusher_max_force", "pusher_friction", "rest_speed",
                                      "max_time"});
    read(s, "dt", c.sim.dt);
    read(s, "gravity", c.sim.gravity);
    if (s.contains("table")) {
      const auto& t = s.at("table");
      if (!t.is_array() || t.size() != 4) {
        throw ConfigError("sim.table must be [x_min, y_min, x_max, y_max]");
      }
      c.sim.table = {t[0].get<double>(), t[1].get<double>(), t[2].get<double>(),
                     t[3].get<double>()};
    }
    read(s, "quasi_static_speed", c.sim.quasi_static_speed);
    read(s, "pusher_max_force", c.sim.pusher_max_force);
    read(s, "pusher_friction", c.sim.pusher_friction);
    read(s, "rest_speed", c.sim.rest_speed);
    read(s, "max_time", c.sim.max_time);
  }
  if (j.contains("power")) {
    const auto& s = j.at("power");
    detail::reject_unknown(s, "power", {"init_mean", "init_std", "n_best",
                                        "rollouts_per_iter", "iterations",
                                        "reward_temperature", "std_decay", "std_floor"});
    read(s, "init_mean", c.power.init_mean);
    read(s, "init_std", c.power.init_std);
    read(s, "n_best", c.power.n_best);
    read(s, "rollouts_per_iter", c.power.rollouts_per_iter);
    read(s, "iterations", c.power.iterations);
    read(s, "reward_temperature", c.power.reward_temperature);
    read(s, "std_decay", c.power.std_decay);
    read(s, "std_floor", c.power.std_floor);
  }
  if (j.contains("theta_grid")) {
    const auto& s = j.at("theta_grid");
    detail::reject_unknown(s, "theta_grid", {"mass_lo", "mass_hi", "mass_count", "mu_lo",
                                             "mu_hi", "mu_count", "static_ratio"});
    read(s, "mass_lo", c.theta_grid.mass_lo);
    read(s, "mass_hi", c.theta_grid.mass_hi);
    read(s, "mass_count", c.theta_grid.mass_count);
    read(s, "mu_lo", c.theta_grid.mu_lo);
    read(s, "mu_hi", c.theta_grid.mu_hi);
    read(s, "mu_count", c.theta_grid.mu_count);
    read(s, "static_ratio", c.theta_grid.static_ratio);
  }
  if (j.contains("object")) {
    const auto& s = j.at("object");
    detail::reject_unknown(s, "object", {"kind", "width", "depth", "radius"});
    read(s, "kind", c.object.kind);
    read(s, "width", c.object.width);
    read(s, "depth", c.object.depth);
    read(s, "radius", c.object.radius);
  }
  if (j.contains("identify")) {
    const auto& s = j.at("identify");
    detail::reject_unknown(s, "identify", {"n_train", "n_test", "train_sizes", "k_folds",
                                           "select", "world"});
    read(s, "n_train", c.identify.n_train);
    read(s, "n_test", c.identify.n_test);
    read(s, "train_sizes", c.identify.train_sizes);
    read(s, "k_folds", c.identify.k_folds);
    read(s, "select", c.identify.select);
    if (s.contains("world")) detail::read_world(s.at("world"), c.identify.world);
  }
  if (j.contains("goal_push")) {
    const auto& s = j.at("goal_push");
    auto& g = c.goal_push;
    detail::reject_unknown(s, "goal_push", {"start", "goal", "n_pushes", "speed",
                                            "cone_half_width", "n_policies",
                                            "success_radius", "n_train", "world"});
    if (s.contains("start")) {
      const auto v = s.at("start").get<std::vector<double>>();
      if (v.size() != 3) throw ConfigError("goal_push.start must be [x, y, yaw]");
      g.start_x = v[0];
      g.start_y = v[1];
      g.start_yaw = v[2];
    }
    if (s.contains("goal")) {
      const auto v = s.at("goal").get<std::vector<double>>();
      if (v.size() != 2) throw ConfigError("goal_push.goal must be [x, y]");
      g.goal_x = v[0];
      g.goal_y = v[1];
    }
    read(s, "n_pushes", g.n_pushes);
    read(s, "speed", g.speed);
    read(s, "cone_half_width", g.cone_half_width);
    read(s, "n_policies", g.n_policies);
    read(s, "success_radius", g.success_radius);
    read(s, "n_train", g.n_train);
    if (s.contains("world")) detail::read_world(s.at("world"), g.world);
  }
  if (j.contains("high_speed")) {
    const auto& s = j.at("high_speed");
    auto& h = c.high_speed;
    detail::reject_unknown(s, "high_speed", {"start", "goal", "speed_range", "n_speeds",
                                             "duration", "rollout_budget", "n_low_speed",
                                             "drop_penalty", "world"});
    if (s.contains("start")) {
      const auto v = s.at("start").get<std::vector<double>>();
      if (v.size() != 2) throw ConfigError("high_speed.start must be [x, y]");
      h.start_x = v[0];
      h.start_y = v[1];
    }
    if (s.contains("goal")) {
      const auto v = s.at("goal").get<std::vector<double>>();
      if (v.size() != 2) throw ConfigError("high_speed.goal must be [x, y]");
      h.goal_x = v[0];
      h.goal_y = v[1];
    }
    Range r{h.speed_lo, h.speed_hi};
    detail::read_range(s, "speed_range", r);
    h.speed_lo = r.lo;
    h.speed_hi = r.hi;
    read(s, "n_speeds", h.n_speeds);
    read(s, "duration", h.duration);
    read(s, "rollout_budget", h.rollout_budget);
    read(s, "n_low_speed", h.n_low_speed);
    read(s, "drop_penalty", h.drop_penalty);
    if (s.contains("world")) detail::read_world(s.at("world"), h.world);
  }
  if (j.contains("simulate")) {
    const auto& s = j.at("simulate");
    auto& m = c.simulate;
    detail::reject_unknown(s, "simulate", {"mass", "mu_static", "mu_kinetic", "x", "y",
                                           "yaw", "contact", "angle", "speed", "duration"});
    read(s, "mass", m.mass);
    read(s, "mu_static", m.mu_static);
    read(s, "mu_kinetic", m.mu_kinetic);
    read(s, "x", m.x);
    read(s, "y", m.y);
    read(s, "yaw", m.yaw);
    if (s.contains("contact")) {
      const auto v = s.at("contact").get<std::vector<double>>();
      if (v.size() != 2) throw ConfigError("simulate.contact must be [x, y]");
      m.contact_x = v[0];
      m.contact_y = v[1];
    }
    read(s, "angle", m.angle);
    read(s, "speed", m.speed);
    read(s, "duration", m.duration);
  }
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  RunConfig c;
  apply_json(j, c);
  return c;
}

inline Json to_json(const RunConfig& c) {
  const auto& s = c.search;
  const auto& p = c.power;
  const auto& t = c.theta_grid;
  const auto& g = c.goal_push;
  const auto& h = c.high_speed;
  const auto& m = c.simulate;
  Json j;
  j["experiment"] = c.experiment;
  j["dataset"] = c.dataset;
  j["out_dir"] = c.out_dir;
  j["seeds"] = c.seeds;
  j["random_pi"] = c.random_pi;
  j["rotation_weight"] = c.rotation_weight;
  j["search"] = {{"eval_budget", s.eval_budget}, {"mc_samples", s.mc_samples},
                 {"entropy_tol", s.entropy_tol}, {"patience", s.patience},
                 {"lengthscale", s.lengthscale}, {"noise_ratio", s.noise_ratio},
                 {"prior_weight", s.prior_weight}};
  j["sim"] = {{"dt", c.sim.dt},
              {"gravity", c.sim.gravity},
              {"table", {c.sim.table.x_min, c.sim.table.y_min, c.sim.table.x_max,
                         c.sim.table.y_max}},
              {"quasi_static_speed", c.sim.quasi_static_speed},
              {"pusher_max_force", c.sim.pusher_max_force},
              {"pusher_friction", c.sim.pusher_friction},
              {"rest_speed", c.sim.rest_speed},
              {"max_time", c.sim.max_time}};
  j["power"] = {{"init_mean", p.init_mean}, {"init_std", p.init_std},
                {"n_best", p.n_best}, {"rollouts_per_iter", p.rollouts_per_iter},
                {"iterations", p.iterations}, {"reward_temperature", p.reward_temperature},
                {"std_decay", p.std_decay}, {"std_floor", p.std_floor}};
  j["theta_grid"] = {{"mass_lo", t.mass_lo}, {"mass_hi", t.mass_hi},
                     {"mass_count", t.mass_count}, {"mu_lo", t.mu_lo},
                     {"mu_hi", t.mu_hi}, {"mu_count", t.mu_count},
                     {"static_ratio", t.static_ratio}};
  j["object"] = {{"kind", c.object.kind}, {"width", c.object.width},
                 {"depth", c.object.depth}, {"radius", c.object.radius}};
  j["identify"] = {{"n_train", c.identify.n_train}, {"n_test", c.identify.n_test},
                   {"train_sizes", c.identify.train_sizes},
                   {"k_folds", c.identify.k_folds}, {"select", c.identify.select},
                   {"world", detail::world_json(c.identify.world)}};
  j["goal_push"] = {{"start", {g.start_x, g.start_y, g.start_yaw}},
                    {"goal", {g.goal_x, g.goal_y}},
                    {"n_pushes", g.n_pushes},
                    {"speed", g.speed},
                    {"cone_half_width", g.cone_half_width},
                    {"n_policies", g.n_policies},
                    {"success_radius", g.success_radius},
                    {"n_train", g.n_train},
                    {"world", detail::world_json(g.world)}};
  j["high_speed"] = {{"start", {h.start_x, h.start_y}},
                     {"goal", {h.goal_x, h.goal_y}},
                     {"speed_range", {h.speed_lo, h.speed_hi}},
                     {"n_speeds", h.n_speeds},
                     {"duration", h.duration},
                     {"rollout_budget", h.rollout_budget},
                     {"n_low_speed", h.n_low_speed},
                     {"drop_penalty", h.drop_penalty},
                     {"world", detail::world_json(h.world)}};
  j["simulate"] = {{"mass", m.mass},        {"mu_static", m.mu_static},
                   {"mu_kinetic", m.mu_kinetic}, {"x", m.x},
                   {"y", m.y},              {"yaw", m.yaw},
                   {"contact", {m.contact_x, m.contact_y}},
                   {"angle", m.angle},      {"speed", m.speed},
                   {"duration", m.duration}};
  return j;
}

/// "MLO:MHI:NM,MULO:MUHI:NMU" -> mass and kinetic friction axes.
inline void parse_theta_grid(const std::string& spec, ident::ThetaGridSpec& out) {
  double mlo, mhi, ulo, uhi;
  std::size_t nm, nu;
  char c1, c2, comma, c3, c4;
  std::istringstream in(spec);
  if (!(in >> mlo >> c1 >> mhi >> c2 >> nm >> comma >> ulo >> c3 >> uhi >> c4 >> nu) ||
      c1 != ':' || c2 != ':' || comma != ',' || c3 != ':' || c4 != ':' ||
      (in >> std::ws, !in.eof())) {
    throw ConfigError("theta grid must look like MLO:MHI:NM,MULO:MUHI:NMU, got '" + spec +
                      "'");
  }
  out.mass_lo = mlo;
  out.mass_hi = mhi;
  out.mass_count = nm;
  out.mu_lo = ulo;
  out.mu_hi = uhi;
  out.mu_count = nu;
}

struct ScalarGrid {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 1;
};

/// "LO:HI:N".
inline ScalarGrid parse_scalar_grid(const std::string& spec) {
  ScalarGrid g;
  char c1, c2;
  std::istringstream in(spec);
  if (!(in >> g.lo >> c1 >> g.hi >> c2 >> g.n) || c1 != ':' || c2 != ':' ||
      (in >> std::ws, !in.eof())) {
    throw ConfigError("policy grid must look like LO:HI:N, got '" + spec + "'");
  }
  if (g.n < 1 || g.hi < g.lo) throw ConfigError("invalid policy grid '" + spec + "'");
  return g;
}

/// "0,1,5" or "0-19" or a mix like "0-3,10".
inline std::vector<std::uint64_t> parse_seeds(const std::string& spec) {
  std::vector<std::uint64_t> out;
  std::istringstream in(spec);
  std::string part;
  while (std::getline(in, part, ',')) {
    if (part.empty()) throw ConfigError("empty entry in seed list '" + spec + "'");
    try {
      const auto dash = part.find('-', 1);
      if (dash == std::string::npos) {
        std::size_t used = 0;
        out.push_back(std::stoull(part, &used));
        if (used != part.size()) throw std::invalid_argument(part);
      } else {
        const auto a = std::stoull(part.substr(0, dash));
        const auto b = std::stoull(part.substr(dash + 1));
        if (b < a) throw std::invalid_argument(part);
        for (auto s = a; s <= b; ++s) out.push_back(s);
      }
    } catch (const std::logic_error&) {
      throw ConfigError("invalid seed list '" + spec + "'");
    }
  }
  if (out.empty()) throw ConfigError("seed list is empty");
  return out;
}

inline void validate(const RunConfig& c) {
  bool known = false;
  for (const auto& e : experiments()) known = known || e == c.experiment;
  if (!known) throw ConfigError("unknown experiment '" + c.experiment + "'");
  if (c.seeds.empty()) throw ConfigError("at least one seed is required");
  if (c.out_dir.empty()) throw ConfigError("output directory must not be empty");
  try {
    c.search.validate();
    c.power.validate();
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
  c.sim.validate();
  ident::make_theta_grid(c.theta_grid);
  sim::ObjectModel probe{1.0, 0.5, 0.5, c.object.shape()};
  try {
    probe.validate();
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
  if (!(c.rotation_weight >= 0.0)) throw ConfigError("rotation_weight must be >= 0");
  detail::validate_world(c.identify.world, "identify");
  detail::validate_world(c.goal_push.world, "goal_push");
  detail::validate_world(c.high_speed.world, "high_speed");
  if (c.identify.n_test < 1) throw ConfigError("identify.n_test must be at least 1");
  if (c.identify.k_folds == 1) throw ConfigError("identify.k_folds must be 0 or >= 2");
  const auto& g = c.goal_push;
  if (g.n_pushes < 1 || g.n_policies < 1 || !(g.speed > c.sim.quasi_static_speed) ||
      !(g.success_radius > 0.0) || g.cone_half_width < 0.0) {
    throw ConfigError("invalid goal_push settings");
  }
  if (!c.sim.table.contains(g.start_x, g.start_y) || !c.sim.table.contains(g.goal_x, g.goal_y)) {
    throw ConfigError("goal_push start and goal must lie on the table");
  }
  const auto& h = c.high_speed;
  if (h.n_speeds < 1 || h.speed_lo < 0.0 || h.speed_hi < h.speed_lo || !(h.duration > 0.0) ||
      h.rollout_budget < 1 || h.drop_penalty < 0.0) {
    throw ConfigError("invalid high_speed settings");
  }
  if (c.experiment == "high-speed-bench" &&
      (!c.sim.table.contains(h.start_x, h.start_y) ||
       !c.sim.table.contains(h.goal_x, h.goal_y) || h.rollout_budget <= h.n_low_speed)) {
    throw ConfigError(
        "infeasible high-speed geometry: start and goal must be on the table and the "
        "rollout budget must exceed the low-speed pushes");
  }
}

}  // namespace pushid::app

#endif  // PUSHID_APP_CONFIG_HPP_
