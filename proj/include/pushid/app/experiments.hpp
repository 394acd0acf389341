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


#ifndef PUSHID_APP_EXPERIMENTS_HPP_
#define PUSHID_APP_EXPERIMENTS_HPP_

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <mutex>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "pushid/app/config.hpp"
#include "pushid/baselines/power.hpp"
#include "pushid/baselines/random_search.hpp"
#include "pushid/data/dataset_io.hpp"
#include "pushid/ident/identification.hpp"
#include "pushid/policy/policy_opt.hpp"
#include "pushid/sim/simulator.hpp"

namespace pushid::app {

/// Named report files (CSV and text) in write order.
struct Report {
  std::vector<std::pair<std::string, std::string>> files;
  std::string summary;

  const std::string& file(const std::string& name) const {
    for (const auto& [n, body] : files) {
      if (n == name) return body;
    }
    throw InputError("report has no file '" + name + "'");
  }
};

class Csv {
 public:
  explicit Csv(std::initializer_list<std::string> header) { row(header); }

  void row(std::initializer_list<std::string> cells) {
    bool first = true;
    for (const auto& c : cells) {
      if (!first) text_ += ',';
      text_ += c;
      first = false;
    }
    text_ += '\n';
  }

  const std::string& str() const { return text_; }

 private:
  std::string text_;
};

inline std::string num(double v) { return data::format_number(v); }
inline std::string num(std::size_t v) { return std::to_string(v); }

/// Runs fn(i) for i in [0, n) on `workers` threads. Each result lands in its
/// own slot, so the output does not depend on scheduling. The first
/// exception is rethrown.
template <typename T>
std::vector<T> parallel_map(std::size_t n, std::size_t workers,
                            const std::function<T(std::size_t)>& fn) {
  std::vector<T> out(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t k = std::min(std::max<std::size_t>(1, workers), std::max<std::size_t>(1, n));
  if (k == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < k; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

// Linear-interpolated quantile of an unsorted sample.
inline double quantile(std::vector<double> v, double q) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

inline double median(const std::vector<double>& v) { return quantile(v, 0.5); }

/// Ground-truth object drawn from the configured ranges.
inline sim::ObjectModel draw_world(const WorldSpec& w, std::uint64_t seed,
                                   const sim::Shape& shape) {
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + 0x5eed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double mass = w.mass.lo + (w.mass.hi - w.mass.lo) * u(rng);
  const double mu = w.mu_kinetic.lo + (w.mu_kinetic.hi - w.mu_kinetic.lo) * u(rng);
  return {mass, w.static_ratio * mu, mu, shape};
}

inline std::vector<ident::PushObservation> observations(
    std::span<const data::PushRecord> records) {
  std::vector<ident::PushObservation> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.observation());
  return out;
}

/// Mean predicted-location error over held-out pushes.
inline double location_error(const sim::ObjectModel& model,
                             std::span<const data::PushRecord> test,
                             const sim::SimConfig& sim_cfg) {
  double sum = 0.0;
  for (const auto& r : test) {
    const auto p = sim::simulate_push(r.x_before, r.action, model, sim_cfg).final_pose();
    sum += std::hypot(p.x - r.x_after.x, p.y - r.x_after.y);
  }
  return sum / static_cast<double>(test.size());
}

/// Random Search baseline for identification: `budget` uniform draws scored
/// by the mean simulation error over all training pushes.
inline sim::ObjectModel random_search_model(const ident::BeliefOverModels& prior,
                                            std::span<const ident::PushObservation> obs,
                                            std::size_t budget, std::uint64_t seed,
                                            const sim::SimConfig& sim_cfg,
                                            double rotation_weight) {
  if (obs.empty()) return ident::map_estimate(prior);
  const auto trace = baselines::random_search(
      [&](std::size_t i) {
        return ident::mean_sim_error(obs, prior.model(i), sim_cfg, rotation_weight);
      },
      prior.theta_set, budget, seed);
  return prior.model(trace.best_index);
}

inline search::SearchConfig search_for_seed(const RunConfig& cfg, std::uint64_t seed) {
  search::SearchConfig sc = cfg.search;
  sc.seed = seed;
  return sc;
}

inline data::PoseNoise noise_of(const WorldSpec& w) {
  return {w.noise_position, w.noise_yaw};
}

inline std::vector<data::PushRecord> load_dataset(const RunConfig& cfg) {
  if (cfg.dataset.empty()) return {};
  auto records = data::load_push_records(cfg.dataset);
  if (records.empty()) throw InputError("dataset '" + cfg.dataset + "' has no records");
  return records;
}

inline void progress(const RunConfig& cfg, const std::string& what, std::uint64_t seed) {
  if (cfg.quiet) return;
  static std::mutex m;
  std::lock_guard<std::mutex> lock(m);
  std::cerr << what << ": seed " << seed << " done\n";
}

// ---------------------------------------------------------------------------
// identify

inline Report cmd_identify(const RunConfig& cfg) {
  const sim::Shape shape = cfg.object.shape();
  const auto prior = ident::uniform_belief(ident::make_theta_grid(cfg.theta_grid), shape);
  const auto dataset = load_dataset(cfg);
  const auto& spec = cfg.identify;

  struct SeedResult {
    std::string rows;
    std::string world;
    std::string belief;
    double ges = 0.0;
    double rs = 0.0;
  };
  auto run = [&](std::size_t k) {
    const std::uint64_t seed = cfg.seeds[k];
    std::vector<data::PushRecord> train;
    std::vector<data::PushRecord> test;
    SeedResult out;
    if (!dataset.empty()) {
      auto split = data::split_train_test(dataset, spec.n_train, spec.n_test, seed);
      train = std::move(split.train);
      test = std::move(split.test);
    } else {
      const auto gt = draw_world(spec.world, seed, shape);
      auto recs = data::generate_synthetic_dataset(gt, spec.n_train + spec.n_test,
                                                   noise_of(spec.world), seed, cfg.sim, {},
                                                   "synthetic", cfg.object.kind);
      train.assign(recs.begin(), recs.begin() + static_cast<long>(spec.n_train));
      test.assign(recs.begin() + static_cast<long>(spec.n_train), recs.end());
      out.world = num(seed) + "," + num(gt.mass) + "," + num(gt.mu_static) + "," +
                  num(gt.mu_kinetic) + "\n";
    }
    const auto obs = observations(train);
    const auto sc = search_for_seed(cfg, seed);
    ident::BeliefOverModels posterior = prior;
    if (!obs.empty()) {
      auto updates = ident::identify_sequential(prior, obs, sc, cfg.sim, cfg.rotation_weight);
      posterior = std::move(updates.back().posterior);
    }
    const auto ges_model = ident::map_estimate(posterior);
    const auto rs_model = random_search_model(prior, obs, cfg.search.eval_budget,
                                              seed + 1000003, cfg.sim, cfg.rotation_weight);
    out.ges = location_error(ges_model, test, cfg.sim);
    out.rs = location_error(rs_model, test, cfg.sim);
    const std::string prior_only = obs.empty() ? "1" : "0";
    auto row = [&](const char* method, const sim::ObjectModel& m, double err) {
      return std::string(method) + "," + num(seed) + "," + num(spec.n_train) + "," +
             num(err) + "," + num(m.mass) + "," + num(m.mu_static) + "," +
             num(m.mu_kinetic) + "," + prior_only + "\n";
    };
    out.rows = row("ges", ges_model, out.ges) + row("random", rs_model, out.rs);
    Csv belief({"index", "mass", "mu_static", "mu_kinetic", "prob"});
    for (std::size_t i = 0; i < posterior.size(); ++i) {
      const auto m = posterior.model(i);
      belief.row({num(i), num(m.mass), num(m.mu_static), num(m.mu_kinetic),
                  num(posterior.probs[static_cast<Eigen::Index>(i)])});
    }
    out.belief = belief.str();
    progress(cfg, "identify", seed);
    return out;
  };
  const auto results = parallel_map<SeedResult>(cfg.seeds.size(), cfg.worker_count(), run);

  Report rep;
  std::string per_seed =
      "method,seed,n_train,test_error_m,map_mass,map_mu_static,map_mu_kinetic,prior_only\n";
  std::string worlds = "seed,mass,mu_static,mu_kinetic\n";
  std::vector<double> ges, rs;
  for (const auto& r : results) {
    per_seed += r.rows;
    worlds += r.world;
    ges.push_back(r.ges);
    rs.push_back(r.rs);
  }
  rep.files.emplace_back("identify.csv", per_seed);
  if (dataset.empty()) rep.files.emplace_back("worlds.csv", worlds);
  for (std::size_t k = 0; k < results.size(); ++k) {
    rep.files.emplace_back("belief_seed" + std::to_string(cfg.seeds[k]) + ".csv",
                           results[k].belief);
  }
  std::string s = "experiment identify\n";
  s += "seeds " + num(cfg.seeds.size()) + "\n";
  s += "train_pushes " + num(spec.n_train) + (spec.n_train == 0 ? " (prior-only)" : "") + "\n";
  s += "test_pushes " + num(spec.n_test) + "\n";
  auto line = [&](const char* m, const std::vector<double>& v) {
    s += std::string(m) + " median_test_error_m " + num(median(v)) + " iqr " +
         num(quantile(v, 0.75) - quantile(v, 0.25)) + "\n";
  };
  line("ges", ges);
  line("random", rs);
  rep.summary = s;
  return rep;
}

// ---------------------------------------------------------------------------
// predict: held-out error against the amount of training data

inline Report cmd_predict(const RunConfig& cfg) {
  const sim::Shape shape = cfg.object.shape();
  const auto prior = ident::uniform_belief(ident::make_theta_grid(cfg.theta_grid), shape);
  const auto dataset = load_dataset(cfg);
  const auto& spec = cfg.identify;
  const bool cv = !dataset.empty() && spec.k_folds >= 2;
  if (!cv && spec.train_sizes.empty()) throw ConfigError("identify.train_sizes is empty");
  std::vector<std::size_t> sizes = spec.train_sizes;
  std::sort(sizes.begin(), sizes.end());
  const std::size_t max_train = sizes.empty() ? 0 : sizes.back();

  struct Row {
    std::string method;
    std::size_t fold;
    std::size_t n_train;
    double error;
  };
  auto run = [&](std::size_t k) {
    const std::uint64_t seed = cfg.seeds[k];
    const auto sc = search_for_seed(cfg, seed);
    std::vector<Row> rows;
    if (cv) {
      const auto folds = data::k_folds(dataset, spec.k_folds, seed, spec.select);
      for (std::size_t f = 0; f < folds.size(); ++f) {
        std::vector<data::PushRecord> train;
        for (std::size_t g = 0; g < folds.size(); ++g) {
          if (g != f) train.insert(train.end(), folds[g].begin(), folds[g].end());
        }
        const auto obs = observations(train);
        search::SearchConfig fsc = sc;
        fsc.seed = seed * 1000 + f;
        const auto up = ident::update_belief(prior, std::span<const ident::PushObservation>(obs),
                                             fsc, cfg.sim, cfg.rotation_weight);
        const auto rs = random_search_model(prior, obs, cfg.search.eval_budget, fsc.seed + 7,
                                            cfg.sim, cfg.rotation_weight);
        rows.push_back({"ges", f, train.size(),
                        location_error(ident::map_estimate(up.posterior), folds[f], cfg.sim)});
        rows.push_back({"random", f, train.size(), location_error(rs, folds[f], cfg.sim)});
      }
    } else {
      std::vector<data::PushRecord> train;
      std::vector<data::PushRecord> test;
      if (!dataset.empty()) {
        auto split = data::split_train_test(dataset, max_train, spec.n_test, seed);
        train = std::move(split.train);
        test = std::move(split.test);
      } else {
        const auto gt = draw_world(spec.world, seed, shape);
        auto recs = data::generate_synthetic_dataset(gt, max_train + spec.n_test,
                                                     noise_of(spec.world), seed, cfg.sim, {},
                                                     "synthetic", cfg.object.kind);
        train.assign(recs.begin(), recs.begin() + static_cast<long>(max_train));
        test.assign(recs.begin() + static_cast<long>(max_train), recs.end());
      }
      const auto obs = observations(train);
      std::vector<ident::BeliefUpdate> updates;
      if (!obs.empty()) {
        updates = ident::identify_sequential(prior, obs, sc, cfg.sim, cfg.rotation_weight);
      }
      for (std::size_t n : sizes) {
        const auto& belief = n == 0 ? prior : updates[n - 1].posterior;
        const std::span<const ident::PushObservation> first(obs.data(), n);
        const auto rs = random_search_model(prior, first, cfg.search.eval_budget,
                                            seed + 1000003 + n, cfg.sim, cfg.rotation_weight);
        rows.push_back({"ges", 0, n, location_error(ident::map_estimate(belief), test, cfg.sim)});
        rows.push_back({"random", 0, n, location_error(rs, test, cfg.sim)});
      }
    }
    progress(cfg, "predict", seed);
    return rows;
  };
  const auto results = parallel_map<std::vector<Row>>(cfg.seeds.size(), cfg.worker_count(), run);

  Csv csv({"method", "seed", "fold", "n_train", "test_error_m"});
  std::vector<std::pair<std::string, std::size_t>> keys;
  for (std::size_t k = 0; k < results.size(); ++k) {
    for (const auto& r : results[k]) {
      csv.row({r.method, num(cfg.seeds[k]), num(r.fold), num(r.n_train), num(r.error)});
    }
  }
  std::string s = "experiment predict\n";
  s += std::string("mode ") + (cv ? "k-fold" : "train-sizes") + "\n";
  s += "seeds " + num(cfg.seeds.size()) + "\n";
  for (const char* method : {"ges", "random"}) {
    if (cv) {
      std::vector<double> v;
      for (const auto& rows : results) {
        for (const auto& r : rows) {
          if (r.method == method) v.push_back(r.error);
        }
      }
      s += std::string(method) + " median_test_error_m " + num(median(v)) + "\n";
    } else {
      for (std::size_t n : sizes) {
        std::vector<double> v;
        for (const auto& rows : results) {
          for (const auto& r : rows) {
            if (r.method == method && r.n_train == n) v.push_back(r.error);
          }
        }
        s += std::string(method) + " n_train " + num(n) + " median_test_error_m " +
             num(median(v)) + "\n";
      }
    }
  }
  Report rep;
  rep.files.emplace_back("predict.csv", csv.str());
  rep.summary = s;
  return rep;
}

// ---------------------------------------------------------------------------
// goal-push

/// Push duration that moves the object `distance` along `heading` under
/// `model`, found by bisection on the simulated travel.
inline double plan_duration(const sim::Pose& x0, double heading, double distance,
                            double speed, const sim::ObjectModel& model,
                            const sim::SimConfig& sim_cfg) {
  sim::SimConfig open = sim_cfg;
  const double span = 10.0 + distance;
  open.table = {x0.x - span, x0.y - span, x0.x + span, x0.y + span};
  auto travel = [&](double t) {
    const auto p = policy::direction_policy(x0, model.shape, heading, speed, t);
    const auto f = sim::rollout_policy(x0, p, model, open).final_pose();
    return std::hypot(f.x - x0.x, f.y - x0.y);
  };
  double lo = 1e-3;
  double hi = std::max(2.0 * distance / speed, 2e-3);
  for (int i = 0; i < 3 && travel(hi) < distance; ++i) hi *= 2.0;
  for (int i = 0; i < 24; ++i) {
    const double mid = 0.5 * (lo + hi);
    (travel(mid) < distance ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct GoalPushOutcome {
  double distance = 0.0;
  bool dropped = false;
};

/// Plans and executes `n_pushes` pushes towards the goal. Planning uses the
/// MAP model of `belief`; execution uses `truth`.
inline GoalPushOutcome run_goal_push(const RunConfig& cfg,
                                     const ident::BeliefOverModels& belief,
                                     const sim::ObjectModel& truth, std::uint64_t seed) {
  const auto& g = cfg.goal_push;
  const policy::CostSpec cost{{g.goal_x, g.goal_y}, 10.0};
  const auto model = ident::map_estimate(belief);
  sim::Pose pose = sim::make_pose(g.start_x, g.start_y, g.start_yaw);
  GoalPushOutcome out;
  for (std::size_t k = 0; k < g.n_pushes; ++k) {
    const double dx = g.goal_x - pose.x;
    const double dy = g.goal_y - pose.y;
    const double dist = std::hypot(dx, dy);
    if (dist < 1e-6) break;
    const double heading = std::atan2(dy, dx);
    // Each direction gets the duration that covers `dist` under the model.
    auto set = policy::make_direction_set(pose, truth.shape, heading, g.cone_half_width,
                                          g.n_policies, g.speed, 0.0, cfg.random_pi,
                                          seed * 131 + k);
    for (auto& p : set.params) {
      p.fixed.duration = plan_duration(pose, p.value, dist, g.speed, model, cfg.sim);
    }
    search::SearchConfig sc = search_for_seed(cfg, seed * 131 + k);
    // Favour directions near the goal bearing.
    Eigen::VectorXd prior(static_cast<Eigen::Index>(set.size()));
    const double width = std::max(g.cone_half_width / 3.0, 1e-6);
    for (std::size_t i = 0; i < set.size(); ++i) {
      const double off = sim::wrap_angle(set.params[i].value - heading) / width;
      prior[static_cast<Eigen::Index>(i)] = std::exp(-0.5 * off * off);
    }
    const auto res = policy::optimize_policy(pose, set, belief, cost, sc, cfg.sim, prior);
    const auto traj = sim::rollout_policy(pose, res.eta_star, truth, cfg.sim);
    pose = traj.final_pose();
    if (traj.dropped()) {
      out.dropped = true;
      break;
    }
  }
  out.distance = std::hypot(pose.x - g.goal_x, pose.y - g.goal_y);
  return out;
}

inline ident::BeliefOverModels one_hot_belief(const sim::ObjectModel& m) {
  search::CandidateSet c({Eigen::Vector3d(m.mass, m.mu_static, m.mu_kinetic)});
  return ident::uniform_belief(std::move(c), m.shape);
}

inline Report cmd_goal_push(const RunConfig& cfg) {
  const sim::Shape shape = cfg.object.shape();
  const auto prior = ident::uniform_belief(ident::make_theta_grid(cfg.theta_grid), shape);
  const auto& g = cfg.goal_push;
  static const char* kMethods[] = {"oracle", "ges", "random"};

  auto run = [&](std::size_t k) {
    const std::uint64_t seed = cfg.seeds[k];
    const auto gt = draw_world(g.world, seed, shape);
    std::vector<ident::PushObservation> obs;
    if (g.n_train > 0) {
      const auto recs = data::generate_synthetic_dataset(gt, g.n_train, noise_of(g.world), seed,
                                                         cfg.sim, {}, "synthetic",
                                                         cfg.object.kind);
      obs = observations(recs);
    }
    ident::BeliefOverModels ges = prior;
    if (!obs.empty()) {
      ges = ident::identify_sequential(prior, obs, search_for_seed(cfg, seed), cfg.sim,
                                       cfg.rotation_weight)
                .back()
                .posterior;
    }
    const auto rs = random_search_model(prior, obs, cfg.search.eval_budget, seed + 1000003,
                                        cfg.sim, cfg.rotation_weight);
    std::vector<GoalPushOutcome> out;
    out.push_back(run_goal_push(cfg, one_hot_belief(gt), gt, seed));
    out.push_back(run_goal_push(cfg, ges, gt, seed));
    out.push_back(run_goal_push(cfg, one_hot_belief(rs), gt, seed));
    progress(cfg, "goal-push", seed);
    return out;
  };
  const auto results =
      parallel_map<std::vector<GoalPushOutcome>>(cfg.seeds.size(), cfg.worker_count(), run);

  Csv csv({"method", "seed", "final_distance_m", "success", "dropped"});
  std::size_t success[3] = {0, 0, 0};
  for (std::size_t k = 0; k < results.size(); ++k) {
    for (std::size_t m = 0; m < 3; ++m) {
      const auto& o = results[k][m];
      const bool ok = !o.dropped && o.distance <= g.success_radius;
      success[m] += ok ? 1 : 0;
      csv.row({kMethods[m], num(cfg.seeds[k]), num(o.distance), ok ? "1" : "0",
               o.dropped ? "1" : "0"});
    }
  }
  std::string s = "experiment goal-push\n";
  s += "trials " + num(cfg.seeds.size()) + "\n";
  s += "success_radius_m " + num(g.success_radius) + "\n";
  for (std::size_t m = 0; m < 3; ++m) {
    s += std::string(kMethods[m]) + " successes " + num(success[m]) + "\n";
  }
  Report rep;
  rep.files.emplace_back("goal_push.csv", csv.str());
  rep.summary = s;
  return rep;
}

// ---------------------------------------------------------------------------
// high-speed-bench

struct BenchRollout {
  std::size_t index = 0;
  double speed = 0.0;
  double cost = 0.0;
  double distance = 0.0;
  bool dropped = false;
};

struct BenchArm {
  std::vector<BenchRollout> rollouts;

  double final_distance() const { return rollouts.empty() ? 0.0 : rollouts.back().distance; }
  std::size_t drops() const {
    return static_cast<std::size_t>(std::count_if(rollouts.begin(), rollouts.end(),
                                                  [](const auto& r) { return r.dropped; }));
  }
};

/// Identify at low speed, then alternate plan / execute / re-identify with
/// the remaining high-speed rollouts. Every identification starts from
/// `prior` and scores candidates on the mean error over all observations
/// collected so far.
inline BenchArm bench_ges_arm(const RunConfig& cfg, const ident::BeliefOverModels& prior,
                              const sim::ObjectModel& gt, std::uint64_t seed) {
  const auto& h = cfg.high_speed;
  const sim::Pose start{h.start_x, h.start_y, 0.0};
  const double heading = std::atan2(h.goal_y - h.start_y, h.goal_x - h.start_x);
  const policy::CostSpec cost{{h.goal_x, h.goal_y}, h.drop_penalty};
  BenchArm arm;
  ident::BeliefOverModels belief = prior;
  std::vector<ident::PushObservation> seen_obs;
  if (h.n_low_speed > 0) {
    const auto recs = data::generate_synthetic_dataset(gt, h.n_low_speed, noise_of(h.world),
                                                       seed, cfg.sim, {}, "synthetic",
                                                       cfg.object.kind);
    seen_obs = observations(recs);
    belief = ident::update_belief(prior, std::span<const ident::PushObservation>(seen_obs),
                                  search_for_seed(cfg, seed), cfg.sim, cfg.rotation_weight)
                 .posterior;
    for (const auto& r : recs) {
      arm.rollouts.push_back({arm.rollouts.size(), r.action.speed, 0.0,
                              std::hypot(r.x_after.x - h.goal_x, r.x_after.y - h.goal_y),
                              false});
    }
  }
  const auto set = policy::make_speed_set(start, gt.shape, heading, h.speed_lo, h.speed_hi,
                                          h.n_speeds, h.duration, cfg.random_pi, seed);
  std::mt19937_64 noise_rng(seed ^ 0xABCDEF);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t r = h.n_low_speed; r < h.rollout_budget; ++r) {
    search::SearchConfig sc = search_for_seed(cfg, seed * 977 + r);
    const auto res = policy::optimize_policy(start, set, belief, cost, sc, cfg.sim);
    const auto traj = sim::rollout_policy(start, res.eta_star, gt, cfg.sim);
    const auto b = policy::evaluate_rollout(traj, cost);
    arm.rollouts.push_back({r, res.eta_star.value, b.cost, b.distance, b.dropped});
    if (r + 1 < h.rollout_budget) {
      // Dropped rollouts are kept: candidates that also drop end near the
      // same edge crossing.
      sim::Pose seen = traj.final_pose();
      if (h.world.noise_position > 0.0 || h.world.noise_yaw > 0.0) {
        seen = sim::make_pose(seen.x + h.world.noise_position * gauss(noise_rng),
                              seen.y + h.world.noise_position * gauss(noise_rng),
                              seen.yaw + h.world.noise_yaw * gauss(noise_rng));
      }
      seen_obs.push_back({start, res.eta_star.action_at(start, 0), seen});
      belief = ident::update_belief(prior, std::span<const ident::PushObservation>(seen_obs),
                                    search_for_seed(cfg, seed * 977 + r + 500), cfg.sim,
                                    cfg.rotation_weight)
                   .posterior;
    }
  }
  return arm;
}

/// PoWER directly on ground-truth rollouts: budget - 1 exploratory rollouts
/// and one final rollout at the learned mean.
inline BenchArm bench_power_arm(const RunConfig& cfg, const sim::ObjectModel& gt,
                                std::uint64_t seed) {
  const auto& h = cfg.high_speed;
  const sim::Pose start{h.start_x, h.start_y, 0.0};
  const double heading = std::atan2(h.goal_y - h.start_y, h.goal_x - h.start_x);
  const policy::CostSpec cost{{h.goal_x, h.goal_y}, h.drop_penalty};
  auto execute = [&](double eta) {
    const double speed = std::clamp(eta, h.speed_lo, h.speed_hi);
    const auto p = policy::speed_policy(start, gt.shape, heading, speed, h.duration);
    return policy::evaluate_rollout(sim::rollout_policy(start, p, gt, cfg.sim), cost);
  };
  baselines::PowerConfig pc = cfg.power;
  pc.seed = seed;
  pc.iterations = (h.rollout_budget - 1) / pc.rollouts_per_iter;
  BenchArm arm;
  const auto res = baselines::power_iterate(pc, [&](double eta) {
    const auto b = execute(eta);
    arm.rollouts.push_back({arm.rollouts.size(), std::clamp(eta, h.speed_lo, h.speed_hi),
                            b.cost, b.distance, b.dropped});
    return baselines::RolloutResult{b.cost, b.dropped};
  });
  const auto last = execute(res.final_mean);
  arm.rollouts.push_back({arm.rollouts.size(), std::clamp(res.final_mean, h.speed_lo, h.speed_hi),
                          last.cost, last.distance, last.dropped});
  return arm;
}

inline Report cmd_high_speed_bench(const RunConfig& cfg) {
  const sim::Shape shape = cfg.object.shape();
  const auto prior = ident::uniform_belief(ident::make_theta_grid(cfg.theta_grid), shape);
  const auto& h = cfg.high_speed;

  struct SeedResult {
    sim::ObjectModel gt;
    BenchArm ges;
    BenchArm power;
  };
  auto run = [&](std::size_t k) {
    const std::uint64_t seed = cfg.seeds[k];
    SeedResult out;
    out.gt = draw_world(h.world, seed, shape);
    out.ges = bench_ges_arm(cfg, prior, out.gt, seed);
    out.power = bench_power_arm(cfg, out.gt, seed);
    progress(cfg, "high-speed-bench", seed);
    return out;
  };
  const auto results = parallel_map<SeedResult>(cfg.seeds.size(), cfg.worker_count(), run);

  Csv bench({"method", "seed", "final_distance_m", "drops", "rollouts"});
  Csv curves({"method", "seed", "rollout", "speed", "cost", "distance_m", "dropped"});
  Csv worlds({"seed", "mass", "mu_static", "mu_kinetic"});
  std::size_t drops_ges = 0, drops_power = 0;
  std::vector<double> dist_ges, dist_power;
  for (std::size_t k = 0; k < results.size(); ++k) {
    const auto seed = num(cfg.seeds[k]);
    const auto& r = results[k];
    worlds.row({seed, num(r.gt.mass), num(r.gt.mu_static), num(r.gt.mu_kinetic)});
    for (const auto& [name, arm] : {std::pair<const char*, const BenchArm*>{"ges", &r.ges},
                                    {"power", &r.power}}) {
      bench.row({name, seed, num(arm->final_distance()), num(arm->drops()),
                 num(arm->rollouts.size())});
      for (const auto& ro : arm->rollouts) {
        curves.row({name, seed, num(ro.index), num(ro.speed), num(ro.cost), num(ro.distance),
                    ro.dropped ? "1" : "0"});
      }
    }
    drops_ges += r.ges.drops();
    drops_power += r.power.drops();
    dist_ges.push_back(r.ges.final_distance());
    dist_power.push_back(r.power.final_distance());
  }
  std::string s = "experiment high-speed-bench\n";
  s += "seeds " + num(cfg.seeds.size()) + "\n";
  s += "rollout_budget " + num(h.rollout_budget) + "\n";
  s += "ges total_drops " + num(drops_ges) + " median_final_distance_m " +
       num(median(dist_ges)) + "\n";
  s += "power total_drops " + num(drops_power) + " median_final_distance_m " +
       num(median(dist_power)) + "\n";
  Report rep;
  rep.files.emplace_back("high_speed.csv", bench.str());
  rep.files.emplace_back("learning_curves.csv", curves.str());
  rep.files.emplace_back("worlds.csv", worlds.str());
  rep.summary = s;
  return rep;
}

// ---------------------------------------------------------------------------
// simulate

inline Report cmd_simulate(const RunConfig& cfg) {
  const auto& m = cfg.simulate;
  const sim::ObjectModel model{m.mass, m.mu_static, m.mu_kinetic, cfg.object.shape()};
  sim::PushAction a;
  a.contact_point = {m.contact_x, m.contact_y};
  a.direction = {std::cos(m.angle), std::sin(m.angle)};
  a.speed = m.speed;
  a.duration = m.duration;
  const auto traj = sim::simulate_push(sim::make_pose(m.x, m.y, m.yaw), a, model, cfg.sim);
  Csv csv({"t", "x", "y", "yaw", "vx", "vy", "omega", "phase"});
  for (const auto& p : traj.points) {
    csv.row({num(p.t), num(p.pose.x), num(p.pose.y), num(p.pose.yaw), num(p.velocity.x()),
             num(p.velocity.y()), num(p.omega),
             p.phase == sim::Phase::Pushing ? "push" : "slide"});
  }
  const auto d = sim::final_displacement(traj);
  const auto& f = traj.final_pose();
  std::string s = "experiment simulate\n";
  s += std::string("outcome ") + (traj.dropped() ? "dropped" : "on_table") + "\n";
  if (traj.dropped()) s += "t_drop_s " + num(traj.t_drop) + "\n";
  s += "final_pose " + num(f.x) + " " + num(f.y) + " " + num(f.yaw) + "\n";
  s += "translation_m " + num(d.translation) + "\n";
  s += "rotation_rad " + num(d.rotation) + "\n";
  Report rep;
  rep.files.emplace_back("trajectory.csv", csv.str());
  rep.summary = s;
  return rep;
}

inline Report run_experiment(const RunConfig& cfg) {
  validate(cfg);
  if (cfg.experiment == "identify") return cmd_identify(cfg);
  if (cfg.experiment == "predict") return cmd_predict(cfg);
  if (cfg.experiment == "goal-push") return cmd_goal_push(cfg);
  if (cfg.experiment == "high-speed-bench") return cmd_high_speed_bench(cfg);
  return cmd_simulate(cfg);
}

/// Writes every report file, summary.txt and config_resolved.json into
/// cfg.out_dir.
inline void write_report(const RunConfig& cfg, const Report& rep) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) throw InputError("cannot create output directory '" + cfg.out_dir + "'");
  auto put = [&](const std::string& name, const std::string& body) {
    std::ofstream out(fs::path(cfg.out_dir) / name, std::ios::binary);
    if (!out) throw InputError("cannot write '" + name + "' in '" + cfg.out_dir + "'");
    out << body;
  };
  for (const auto& [name, body] : rep.files) put(name, body);
  put("summary.txt", rep.summary);
  put("config_resolved.json", to_json(cfg).dump(2) + "\n");
}

}  // namespace pushid::app

#endif  // PUSHID_APP_EXPERIMENTS_HPP_
