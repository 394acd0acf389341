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

#ifndef PUSHID_BASELINES_RANDOM_SEARCH_HPP_
#define PUSHID_BASELINES_RANDOM_SEARCH_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>

#include "pushid/error.hpp"
#include "pushid/search/candidate_set.hpp"
#include "pushid/search/greedy_entropy_search.hpp"

namespace pushid::baselines {

/// Uniform sampling with replacement over the candidate set. Consumes
/// exactly `budget` objective evaluations.
inline search::SearchTrace random_search(const search::Objective& objective,
                                         const search::CandidateSet& candidates,
                                         std::size_t budget, std::uint64_t seed) {
  if (budget < 1) throw InputError("random_search budget must be at least 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
  search::SearchTrace trace;
  for (std::size_t k = 0; k < budget; ++k) {
    const std::size_t i = pick(rng);
    double v = objective(i);
    if (!std::isfinite(v) || v >= search::kInvalidValue) v = search::kInvalidValue;
    trace.record(i, v);
  }
  return trace;
}

}  // namespace pushid::baselines

#endif  // PUSHID_BASELINES_RANDOM_SEARCH_HPP_
