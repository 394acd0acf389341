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

#ifndef PUSHID_PUSHID_HPP_
#define PUSHID_PUSHID_HPP_

#include "pushid/baselines/power.hpp"
#include "pushid/baselines/random_search.hpp"
#include "pushid/data/dataset_io.hpp"
#include "pushid/error.hpp"
#include "pushid/gp/gaussian_process.hpp"
#include "pushid/gp/kernel.hpp"
#include "pushid/ident/identification.hpp"
#include "pushid/policy/policy_opt.hpp"
#include "pushid/search/candidate_set.hpp"
#include "pushid/search/greedy_entropy_search.hpp"
#include "pushid/search/pmin.hpp"
#include "pushid/sim/geometry.hpp"
#include "pushid/sim/simulator.hpp"
#include "pushid/sim/types.hpp"

#endif  // PUSHID_PUSHID_HPP_
