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

#ifndef PUSHID_SEARCH_PMIN_HPP_
#define PUSHID_SEARCH_PMIN_HPP_

#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "pushid/error.hpp"

namespace pushid::search {

/// Monte-Carlo estimate of the probability that each candidate is the
/// minimizer. Entropy is in nats.
struct PminEstimate {
  Eigen::VectorXd probs;
  std::size_t mc_samples = 0;
  double entropy = 0.0;
};

// -p log p with 0 log 0 := 0.
inline double entropy_term(double p) { return p > 0.0 ? -p * std::log(p) : 0.0; }

inline double entropy(const Eigen::VectorXd& probs) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) h += entropy_term(probs[i]);
  return h;
}

/// Counts, for every sampled row, which column holds the minimum. Ties go to
/// the lowest column index. Columns flagged as ineligible never win and get
/// probability zero.
inline PminEstimate estimate_pmin(const Eigen::MatrixXd& samples,
                                  const std::vector<bool>& eligible = {}) {
  const Eigen::Index rows = samples.rows();
  const Eigen::Index cols = samples.cols();
  if (rows == 0 || cols == 0) throw InputError("estimate_pmin: empty sample matrix");
  if (samples.hasNaN()) throw InputError("estimate_pmin: samples contain NaN");
  if (!eligible.empty() && eligible.size() != static_cast<std::size_t>(cols)) {
    throw InputError("estimate_pmin: eligibility mask has wrong size");
  }
  auto allowed = [&](Eigen::Index j) {
    return eligible.empty() || eligible[static_cast<std::size_t>(j)];
  };

  std::vector<std::size_t> counts(static_cast<std::size_t>(cols), 0);
  std::size_t counted = 0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    Eigen::Index best = -1;
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (!allowed(j)) continue;
      if (best < 0 || samples(r, j) < samples(r, best)) best = j;
    }
    if (best < 0) throw InputError("estimate_pmin: no eligible candidate");
    ++counts[static_cast<std::size_t>(best)];
    ++counted;
  }

  PminEstimate est;
  est.mc_samples = static_cast<std::size_t>(rows);
  est.probs.resize(cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    est.probs[j] = static_cast<double>(counts[static_cast<std::size_t>(j)]) /
                   static_cast<double>(counted);
  }
  est.entropy = entropy(est.probs);
  return est;
}

/// Index of the largest entry, lowest index on ties.
inline std::size_t argmax_first(const Eigen::VectorXd& v) {
  if (v.size() == 0) throw InputError("argmax of an empty vector");
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return static_cast<std::size_t>(best);
}

/// Greedy entropy acquisition: the unevaluated candidate with the largest
/// -p log p term, lowest index on ties.
inline std::size_t select_next(const PminEstimate& pmin,
                               const std::vector<bool>& evaluated) {
  const auto n = static_cast<std::size_t>(pmin.probs.size());
  if (evaluated.size() != n) {
    throw InputError("select_next: evaluated mask has wrong size");
  }
  std::size_t best = n;
  double best_term = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (evaluated[i]) continue;
    const double t = entropy_term(pmin.probs[static_cast<Eigen::Index>(i)]);
    if (best == n || t > best_term) {
      best = i;
      best_term = t;
    }
  }
  if (best == n) throw ExhaustedError("select_next: every candidate was evaluated");
  return best;
}

}  // namespace pushid::search

#endif  // PUSHID_SEARCH_PMIN_HPP_
