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

#include "sal/sample.hpp"

#include <algorithm>
#include <cctype>

#include "sal/rng.hpp"

namespace sal {

std::string to_token(StrategyKind kind) {
    switch (kind) {
    case StrategyKind::random: return "random";
    case StrategyKind::greedy_input: return "gi";
    case StrategyKind::greedy_output: return "go";
    case StrategyKind::greedy_io: return "gio";
    case StrategyKind::variational: return "variational";
    }
    return "?";
}

std::string to_abbrev(StrategyKind kind) {
    switch (kind) {
    case StrategyKind::random: return "R";
    case StrategyKind::greedy_input: return "GI";
    case StrategyKind::greedy_output: return "GO";
    case StrategyKind::greedy_io: return "GIO";
    case StrategyKind::variational: return "V";
    }
    return "?";
}

StrategyKind parse_strategy(const std::string& token) {
    std::string t = token;
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (t == "random" || t == "r") return StrategyKind::random;
    if (t == "gi") return StrategyKind::greedy_input;
    if (t == "go") return StrategyKind::greedy_output;
    if (t == "gio") return StrategyKind::greedy_io;
    if (t == "variational" || t == "v") return StrategyKind::variational;
    throw ValidationError("unknown strategy '" + token + "' (expected random, gi, go, gio or variational)");
}

bool needs_model(StrategyKind kind) noexcept {
    return kind == StrategyKind::greedy_output || kind == StrategyKind::greedy_io || kind == StrategyKind::variational;
}

bool needs_std(StrategyKind kind) noexcept { return kind == StrategyKind::variational; }

void check_compatible(StrategyKind strategy, ModelKind kind) {
    if (needs_std(strategy) && kind != ModelKind::gp)
        throw ValidationError("strategy '" + to_token(strategy) + "' requires a gp model, got '" + to_string(kind) + "'");
}

namespace {

std::vector<Index> available_indices(const CandidatePool& pool) {
    std::vector<Index> out;
    out.reserve(static_cast<std::size_t>(pool.available_count()));
    for (Index i = 0; i < pool.size(); ++i)
        if (pool.is_available(i)) out.push_back(i);
    return out;
}

PointMatrix gather_rows(const PointMatrix& m, const std::vector<Index>& idx) {
    PointMatrix out(static_cast<Index>(idx.size()), m.cols());
    for (std::size_t k = 0; k < idx.size(); ++k) out.row(static_cast<Index>(k)) = m.row(idx[k]);
    return out;
}

void check_context(StrategyKind strategy, const SelectionContext& ctx) {
    if (ctx.labeled_inputs.rows() != ctx.labeled_responses.size())
        throw ValidationError("selection context: labeled inputs and responses differ in length");
    if (strategy != StrategyKind::random && ctx.labeled_inputs.rows() == 0)
        throw ValidationError("strategy '" + to_token(strategy) + "' needs at least one labeled point");
    if (ctx.labeled_inputs.rows() > 0 && ctx.labeled_inputs.cols() != ctx.pool.dim())
        throw ValidationError("selection context: labeled inputs have the wrong dimension");
    if (needs_model(strategy)) {
        if (!ctx.model) throw ValidationError("strategy '" + to_token(strategy) + "' requires a fitted model");
        if (needs_std(strategy) && !ctx.model->supports_std())
            throw UnsupportedCapability("strategy 'variational' requires a model with predictive std, got '" +
                                        to_string(ctx.model->kind()) + "'");
    }
}

} // namespace

Vector candidate_scores(StrategyKind strategy, const SelectionContext& ctx) {
    if (strategy == StrategyKind::random) throw ValidationError("random sampling has no scores");
    check_context(strategy, ctx);
    const auto idx = available_indices(ctx.pool);
    Vector scores = Vector::Constant(ctx.pool.size(), -std::numeric_limits<double>::infinity());
    if (idx.empty()) return scores;

    const PointMatrix cand = gather_rows(ctx.pool.unit_points(), idx);
    Vector s(cand.rows());
    switch (strategy) {
    case StrategyKind::greedy_input:
        for (Index k = 0; k < cand.rows(); ++k) s(k) = dist_input(cand.row(k), ctx.labeled_inputs);
        break;
    case StrategyKind::greedy_output: {
        const Vector pred = ctx.model->predict(cand);
        for (Index k = 0; k < cand.rows(); ++k) s(k) = dist_output(pred(k), ctx.labeled_responses);
        break;
    }
    case StrategyKind::greedy_io: {
        const Vector pred = ctx.model->predict(cand);
        for (Index k = 0; k < cand.rows(); ++k)
            s(k) = dist_input(cand.row(k), ctx.labeled_inputs) * dist_output(pred(k), ctx.labeled_responses);
        break;
    }
    case StrategyKind::variational:
        s = ctx.model->predict_std_standardized(cand);
        break;
    case StrategyKind::random: break;
    }
    for (std::size_t k = 0; k < idx.size(); ++k) scores(idx[k]) = s(static_cast<Index>(k));
    return scores;
}

Index select_next(StrategyKind strategy, const SelectionContext& ctx, std::uint64_t seed) {
    if (ctx.pool.available_count() == 0) throw ValidationError("candidate pool is exhausted");
    if (strategy == StrategyKind::random) {
        check_context(strategy, ctx);
        const auto idx = available_indices(ctx.pool);
        Rng rng(mix_seed(seed));
        return idx[static_cast<std::size_t>(rng.below(idx.size()))];
    }
    const Vector scores = candidate_scores(strategy, ctx);
    Index best = -1;
    double best_score = -std::numeric_limits<double>::infinity();
    for (Index i = 0; i < scores.size(); ++i) {
        if (!ctx.pool.is_available(i)) continue;
        // NaN scores never win; the first available index is the fallback.
        if (best < 0 || scores(i) > best_score) {
            if (best < 0 || !std::isnan(scores(i))) {
                best = i;
                best_score = std::isnan(scores(i)) ? -std::numeric_limits<double>::infinity() : scores(i);
            }
        }
    }
    return best;
}

} // namespace sal
