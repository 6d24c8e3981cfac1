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
#include <limits>
#include <string>

#include "sal/regress.hpp"
#include "sal/space.hpp"

namespace sal {

enum class StrategyKind { random, greedy_input, greedy_output, greedy_io, variational };

/// Config/CLI token: random | gi | go | gio | variational.
std::string to_token(StrategyKind kind);
/// Report abbreviation: R | GI | GO | GIO | V.
std::string to_abbrev(StrategyKind kind);
/// Accepts the tokens above and the report abbreviations, case-insensitively.
StrategyKind parse_strategy(const std::string& token);

bool needs_model(StrategyKind kind) noexcept;
bool needs_std(StrategyKind kind) noexcept;

/// Throws ValidationError when `strategy` cannot run on models of `kind`.
void check_compatible(StrategyKind strategy, ModelKind kind);

/// Distance from a candidate to its nearest labeled input (rows of `labeled`).
template <typename DerivedC, typename DerivedL>
typename DerivedC::Scalar dist_input(const Eigen::MatrixBase<DerivedC>& candidate,
                                     const Eigen::MatrixBase<DerivedL>& labeled) {
    using Scalar = typename DerivedC::Scalar;
    if (labeled.rows() == 0) throw ValidationError("dist_input: labeled set is empty");
    if (labeled.cols() != candidate.size()) throw ValidationError("dist_input: dimension mismatch");
    Scalar best = std::numeric_limits<Scalar>::infinity();
    for (Index j = 0; j < labeled.rows(); ++j) {
        Scalar d2(0);
        for (Index k = 0; k < candidate.size(); ++k) {
            const Scalar diff = candidate(k) - labeled(j, k);
            d2 += diff * diff;
        }
        best = std::min(best, d2);
    }
    return std::sqrt(best);
}

/// Distance from a predicted response to the nearest observed response.
template <typename Scalar, typename Derived>
Scalar dist_output(Scalar predicted, const Eigen::MatrixBase<Derived>& responses) {
    if (responses.size() == 0) throw ValidationError("dist_output: labeled set is empty");
    return (responses.array() - predicted).abs().minCoeff();
}

/// What a sampler sees: the pool, the labeled data, and the current model.
struct SelectionContext {
    const CandidatePool& pool;
    const PointMatrix& labeled_inputs;
    const Vector& labeled_responses;
    const Model* model = nullptr;
};

/// Scores of every pool point for a deterministic strategy; unavailable
/// points score -inf. Higher is better.
Vector candidate_scores(StrategyKind strategy, const SelectionContext& ctx);

/// Next pool index to query. Deterministic strategies take the argmax of their
/// score with the lowest index winning ties; random draws uniformly from the
/// available indices using `seed`.
Index select_next(StrategyKind strategy, const SelectionContext& ctx, std::uint64_t seed);

} // namespace sal
