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

#ifndef PUSHID_SEARCH_GREEDY_ENTROPY_SEARCH_HPP_
#define PUSHID_SEARCH_GREEDY_ENTROPY_SEARCH_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <algorithm>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pushid/error.hpp"
#include "pushid/gp/gaussian_process.hpp"
#include "pushid/search/candidate_set.hpp"
#include "pushid/search/pmin.hpp"

namespace pushid::search {

// Objective value recorded for failed evaluations. Objectives may also
// return it directly to flag a failure.
inline constexpr double kInvalidValue = 1e30;

struct SearchConfig {
  std::size_t eval_budget = 60;
  std::size_t mc_samples = 1000;
  double entropy_tol = 1e-3;   // nats
  std::size_t patience = 3;    // consecutive stagnant iterations
  std::uint64_t seed = 0;

  // GP settings in the normalized domain.
  double lengthscale = 0.2;
  double noise_ratio = 1e-6;    // noise variance relative to signal variance
  double prior_weight = 1.0;    // beta in m(i) = beta * (1 - P(i) / max P)

  void validate() const {
    if (eval_budget < 1) throw InputError("eval_budget must be at least 1");
    if (mc_samples < 1) throw InputError("mc_samples must be at least 1");
    if (!(entropy_tol >= 0.0)) throw InputError("entropy_tol must be >= 0");
    if (patience < 1) throw InputError("patience must be at least 1");
    if (!(lengthscale > 0.0)) throw InputError("lengthscale must be positive");
    if (!(noise_ratio >= 0.0)) throw InputError("noise_ratio must be >= 0");
  }
};

struct Evaluation {
  std::size_t index = 0;
  double value = 0.0;
};

struct SearchTrace {
  std::vector<Evaluation> evaluated;
  std::vector<PminEstimate> pmin_history;
  std::size_t best_index = 0;
  double best_value = std::numeric_limits<double>::infinity();
  bool stagnated = false;

  /// Lowest value among the first `n` evaluations.
  double best_after(std::size_t n) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n && i < evaluated.size(); ++i) {
      best = std::min(best, evaluated[i].value);
    }
    return best;
  }

  void record(std::size_t index, double value) {
    evaluated.push_back({index, value});
    if (evaluated.size() == 1 || value < best_value ||
        (value == best_value && index < best_index)) {
      best_index = index;
      best_value = value;
    }
  }
};

struct SearchResult {
  PminEstimate pmin;
  SearchTrace trace;
};

using Objective = std::function<double(std::size_t)>;

namespace detail {

inline Eigen::VectorXd resolve_prior(const Eigen::VectorXd& prior, std::size_t n) {
  if (prior.size() == 0) {
    return Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), 1.0 / n);
  }
  if (static_cast<std::size_t>(prior.size()) != n) {
    throw InputError("prior has " + std::to_string(prior.size()) +
                     " entries but there are " + std::to_string(n) +
                     " candidates");
  }
  if (!prior.allFinite() || (prior.array() < 0.0).any() || !(prior.sum() > 0.0)) {
    throw InputError("prior must be a non-negative, non-zero vector");
  }
  return prior / prior.sum();
}

// Prior mean on standardized errors: candidates the prior favours are
// expected to have low error.
inline gp::MeanFunction prior_mean(const CandidateSet& candidates,
                                   const Eigen::VectorXd& prior, double weight) {
  const double max_p = prior.maxCoeff();
  if (weight == 0.0 || (prior.array() == max_p).all()) return gp::zero_mean();
  auto table = std::make_shared<std::map<std::vector<double>, double>>();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& u = candidates.normalized()[i];
    (*table)[std::vector<double>(u.data(), u.data() + u.size())] =
        weight * (1.0 - prior[static_cast<Eigen::Index>(i)] / max_p);
  }
  return [table](const Eigen::VectorXd& u) {
    auto it = table->find(std::vector<double>(u.data(), u.data() + u.size()));
    return it == table->end() ? 0.0 : it->second;
  };
}

}  // namespace detail

/// Greedy Entropy Search over a discrete candidate set.
///
/// Starts at the prior MAP, then repeatedly refits a GP to the standardized
/// objective values, estimates P_min by Monte Carlo over joint posterior
/// draws and evaluates the unevaluated candidate with the largest -p log p.
/// Stops once the entropy of P_min moves by less than `entropy_tol` for
/// `patience` consecutive iterations, or when the budget is spent.
inline SearchResult greedy_entropy_search(const Objective& objective,
                                          const CandidateSet& candidates,
                                          const Eigen::VectorXd& prior,
                                          const SearchConfig& cfg) {
  cfg.validate();
  const std::size_t n = candidates.size();
  const Eigen::VectorXd p0 = detail::resolve_prior(prior, n);
  const gp::MeanFunction mean = detail::prior_mean(candidates, p0, cfg.prior_weight);
  const Eigen::Index dim = candidates.dimension();

  std::mt19937_64 rng(cfg.seed);
  std::vector<bool> evaluated(n, false);
  std::vector<bool> eligible(n, true);
  SearchResult result;
  SearchTrace& trace = result.trace;

  std::vector<std::size_t> valid_idx;
  std::vector<double> valid_val;
  std::size_t stagnant = 0;

  std::size_t next = argmax_first(p0);

  const std::size_t budget = std::min(cfg.eval_budget, n);
  while (trace.evaluated.size() < budget) {
    double value = objective(next);
    evaluated[next] = true;
    if (!std::isfinite(value) || value >= kInvalidValue) {
      value = kInvalidValue;
      eligible[next] = false;
    } else {
      valid_idx.push_back(next);
      valid_val.push_back(value);
    }
    trace.record(next, value);

    // Standardize observed values; P_min is invariant to this affine map.
    std::vector<gp::Observation> data;
    data.reserve(valid_idx.size());
    if (!valid_val.empty()) {
      double mu = 0.0;
      for (double v : valid_val) mu += v;
      mu /= static_cast<double>(valid_val.size());
      double var = 0.0;
      for (double v : valid_val) var += (v - mu) * (v - mu);
      var /= static_cast<double>(valid_val.size());
      double sd = std::sqrt(var);
      if (!(sd > 1e-12 * std::max(1.0, std::abs(mu)))) sd = 1.0;
      for (std::size_t k = 0; k < valid_idx.size(); ++k) {
        data.push_back({candidates.normalized()[valid_idx[k]],
                        (valid_val[k] - mu) / sd});
      }
    }
    const auto kernel = gp::KernelParams::isotropic(dim, 1.0, cfg.lengthscale,
                                                   cfg.noise_ratio);
    const auto post = gp::gp_fit(data, kernel, mean);
    const std::uint64_t draw_seed = rng();
    const Eigen::MatrixXd draws =
        post.sample_joint(candidates.normalized(), cfg.mc_samples, draw_seed);

    bool any_eligible = false;
    for (bool e : eligible) any_eligible = any_eligible || e;
    if (!any_eligible) break;
    PminEstimate est = estimate_pmin(draws, eligible);

    if (!trace.pmin_history.empty() &&
        std::abs(est.entropy - trace.pmin_history.back().entropy) < cfg.entropy_tol) {
      ++stagnant;
    } else {
      stagnant = 0;
    }
    trace.pmin_history.push_back(est);
    result.pmin = std::move(est);
    if (stagnant >= cfg.patience) {
      trace.stagnated = true;
      break;
    }
    if (trace.evaluated.size() >= budget) break;
    next = select_next(result.pmin, evaluated);
  }

  if (valid_idx.empty()) {
    throw SearchError("every evaluated candidate returned a non-finite objective");
  }
  return result;
}

}  // namespace pushid::search

#endif  // PUSHID_SEARCH_GREEDY_ENTROPY_SEARCH_HPP_
