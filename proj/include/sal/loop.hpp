/*
 * Copyright 2026 The sal Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sal/bench.hpp"
#include "sal/regress.hpp"
#include "sal/sample.hpp"
#include "sal/sim.hpp"
#include "sal/space.hpp"

namespace sal {

struct RunConfig {
    StrategyKind strategy = StrategyKind::random;
    ModelKind model_kind = ModelKind::gp;
    FitConfig fit{};
    Index n0 = 1;
    Index n_queries = 0;
    std::uint64_t seed = 0;
    FailurePolicy failure_policy = FailurePolicy::abort;
    bool trace_errors = false;

    /// Checks counts and the strategy/model pairing; throws ValidationError.
    void validate() const;
};

struct FailedQuery {
    Index index = -1;
    std::string cause;
};

struct RunTrace {
    std::vector<Index> queried_indices;  // initialization first, then one per query
    Vector responses;                    // parallel to queried_indices
    std::vector<double> per_step_error;  // one per post-initialization query when traced
    std::optional<Model> final_model;
    std::uint64_t seed = 0;
    Index n0 = 0;
    std::vector<FailedQuery> failures;  // points consumed under the resample policy
};

/// Initialize, fit, then alternate select / query / refit until `n_queries`
/// labels beyond the initial design have been acquired. `pool` must be fresh
/// and is updated in place. Per-step errors need `test_set`.
RunTrace run_active_learning(const ParameterSpace& space, CandidatePool& pool, const Simulator& sim,
                             const RunConfig& config, const TestSet* test_set = nullptr);

/// Error curve of a traced run: (queries so far, error) for steps 1..n_queries.
ErrorCurve error_curve(const RunTrace& trace, std::string case_name, std::string model, StrategyKind strategy, int rep);

} // namespace sal
