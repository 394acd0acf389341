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


// Command-line front end: pushid <experiment> [options].

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pushid/app/config.hpp"
#include "pushid/app/experiments.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::string> seeds;
  std::optional<std::size_t> budget;
  std::optional<std::size_t> mc_samples;
  std::optional<std::string> theta_grid;
  std::optional<std::string> pi_grid;
  std::optional<std::string> dataset;
  std::optional<std::size_t> threads;
  bool random_pi = false;
  bool quiet = false;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--seeds", f.seeds, "seed list, e.g. 0,3,7 or 0-19");
  cmd->add_option("--budget", f.budget, "evaluation budget per search");
  cmd->add_option("--mc-samples", f.mc_samples, "Monte Carlo samples for P_min");
  cmd->add_option("--theta-grid", f.theta_grid, "model grid MLO:MHI:NM,MULO:MUHI:NMU");
  cmd->add_option("--pi-grid", f.pi_grid, "policy grid LO:HI:N");
  cmd->add_option("--dataset", f.dataset, "JSONL push records");
  cmd->add_option("--threads", f.threads, "worker threads (0 = all cores)");
  cmd->add_flag("--random-pi", f.random_pi, "sample the policy set uniformly at random");
  cmd->add_flag("--quiet", f.quiet, "no progress output");
}

pushid::app::RunConfig resolve(const std::string& experiment, const Flags& f) {
  using namespace pushid;
  app::RunConfig cfg;
  if (!f.config.empty()) cfg = app::load_config(f.config);
  if (!cfg.experiment.empty() && cfg.experiment != experiment) {
    throw ConfigError("config is for '" + cfg.experiment + "' but '" + experiment +
                      "' was requested");
  }
  cfg.experiment = experiment;
  if (f.out) cfg.out_dir = *f.out;
  if (f.seeds) cfg.seeds = app::parse_seeds(*f.seeds);
  if (f.budget) cfg.search.eval_budget = *f.budget;
  if (f.mc_samples) cfg.search.mc_samples = *f.mc_samples;
  if (f.theta_grid) app::parse_theta_grid(*f.theta_grid, cfg.theta_grid);
  if (f.dataset) cfg.dataset = *f.dataset;
  if (f.threads) cfg.threads = *f.threads;
  if (f.random_pi) cfg.random_pi = true;
  if (f.quiet) cfg.quiet = true;
  if (f.pi_grid) {
    const auto g = app::parse_scalar_grid(*f.pi_grid);
    if (experiment == "goal-push") {
      if (std::abs(g.lo + g.hi) > 1e-12) {
        throw ConfigError("goal-push policy grid must be symmetric, e.g. -0.5:0.5:25");
      }
      cfg.goal_push.cone_half_width = g.hi;
      cfg.goal_push.n_policies = g.n;
    } else if (experiment == "high-speed-bench") {
      cfg.high_speed.speed_lo = g.lo;
      cfg.high_speed.speed_hi = g.hi;
      cfg.high_speed.n_speeds = g.n;
    } else {
      throw ConfigError("--pi-grid applies to goal-push and high-speed-bench only");
    }
  }
  if (!cfg.dataset.empty() && !std::filesystem::is_regular_file(cfg.dataset)) {
    throw ConfigError("dataset '" + cfg.dataset + "' does not exist");
  }
  app::validate(cfg);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"System identification and policy search for planar pushing"};
  app.require_subcommand(1);
  Flags flags;
  std::vector<CLI::App*> commands;
  const std::map<std::string, std::string> about{
      {"identify", "identify object models and score held-out predictions"},
      {"predict", "held-out prediction error against training-set size"},
      {"goal-push", "two-push goal reaching with oracle, GES and random models"},
      {"high-speed-bench", "identify-then-plan against PoWER on a fast push"},
      {"simulate", "simulate a single push and write its trajectory"},
  };
  for (const auto& name : pushid::app::experiments()) {
    auto* cmd = app.add_subcommand(name, about.at(name));
    add_common(cmd, flags);
    commands.push_back(cmd);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  std::string experiment;
  for (auto* cmd : commands) {
    if (cmd->parsed()) experiment = cmd->get_name();
  }

  pushid::app::RunConfig cfg;
  try {
    cfg = resolve(experiment, flags);
  } catch (const pushid::ConfigError& e) {
    std::cerr << "pushid: " << e.what() << "\n";
    return 1;
  } catch (const pushid::InputError& e) {
    std::cerr << "pushid: " << e.what() << "\n";
    return 1;
  }

  try {
    const auto report = pushid::app::run_experiment(cfg);
    pushid::app::write_report(cfg, report);
    if (!cfg.quiet) std::cout << report.summary;
  } catch (const pushid::ConfigError& e) {
    std::cerr << "pushid: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "pushid: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
