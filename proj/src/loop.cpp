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

#include "sal/loop.hpp"

#include "sal/rng.hpp"

namespace sal {

void RunConfig::validate() const {
    if (n0 < 1) throw ValidationError("n0 must be >= 1");
    if (n_queries < 0) throw ValidationError("n_queries must be >= 0");
    check_compatible(strategy, model_kind);
}

namespace {

class Runner {
public:
    Runner(CandidatePool& pool, const Simulator& sim, const RunConfig& config)
        : pool_(pool), sim_(sim), config_(config), rng_(config.seed) {
        inputs_.resize(0, pool.dim());
    }

    RunTrace run(const TestSet* test_set) {
        trace_.seed = config_.seed;
        trace_.n0 = config_.n0;

        for (Index i : initial_design(pool_, config_.n0)) query(i);
        // Replacements for failed initial points continue the max-min design.
        while (labeled() < config_.n0) query(replacement_index());

        refit();
        for (Index step = 0; step < config_.n_queries; ++step) {
            const Index before = labeled();
            while (labeled() == before) {
                if (pool_.available_count() == 0) throw Error("candidate pool exhausted by failed queries");
                const SelectionContext ctx{pool_, inputs_, responses_, model_ ? &*model_ : nullptr};
                query(select_next(config_.strategy, ctx, rng_.next_u64()));
            }
            refit();
            if (config_.trace_errors) {
                const Vector pred = model_->predict(test_set->unit);
                trace_.per_step_error.push_back(average_relative_error(test_set->true_values, pred));
            }
        }
        trace_.responses = responses_;
        trace_.final_model = std::move(model_);
        return std::move(trace_);
    }

private:
    Index labeled() const { return inputs_.rows(); }

    Index replacement_index() const {
        if (pool_.available_count() == 0) throw Error("candidate pool exhausted by failed queries");
        if (labeled() > 0) {
            const SelectionContext ctx{pool_, inputs_, responses_, nullptr};
            return select_next(StrategyKind::greedy_input, ctx, 0);
        }
        Index best = -1;
        double best_d = 0.0;
        for (Index i = 0; i < pool_.size(); ++i) {
            if (!pool_.is_available(i)) continue;
            const double d = (pool_.unit_points().row(i).array() - 0.5).square().sum();
            if (best < 0 || d < best_d) {
                best = i;
                best_d = d;
            }
        }
        return best;
    }

    void query(Index i) {
        const DesignPoint p = pool_.point(i);
        double y = 0.0;
        try {
            y = sim_.evaluate(p.raw);
        } catch (const QueryFailure& e) {
            if (config_.failure_policy == FailurePolicy::abort) throw;
            pool_.exclude(i);
            trace_.failures.push_back({i, e.cause()});
            return;
        }
        pool_.mark_labeled(i);
        trace_.queried_indices.push_back(i);
        const Index n = inputs_.rows();
        inputs_.conservativeResize(n + 1, Eigen::NoChange);
        inputs_.row(n) = p.unit.transpose();
        responses_.conservativeResize(n + 1);
        responses_(n) = y;
    }

    void refit() {
        const TrainingSet ts = TrainingSet::make(inputs_, responses_);
        model_.emplace(fit(config_.model_kind, ts, config_.fit, rng_.next_u64()));
    }

    CandidatePool& pool_;
    const Simulator& sim_;
    const RunConfig& config_;
    Rng rng_;
    PointMatrix inputs_;
    Vector responses_;
    std::optional<Model> model_;
    RunTrace trace_;
};

} // namespace

RunTrace run_active_learning(const ParameterSpace& space, CandidatePool& pool, const Simulator& sim,
                             const RunConfig& config, const TestSet* test_set) {
    config.validate();
    if (space.size() != pool.dim()) throw ValidationError("pool dimension does not match the parameter space");
    if (!pool.labeled().empty()) throw ValidationError("active learning needs a fresh pool");
    if (config.n0 + config.n_queries > pool.available_count())
        throw ValidationError("budget n0 + n_queries = " + std::to_string(config.n0 + config.n_queries) +
                              " exceeds the " + std::to_string(pool.available_count()) + " available pool points");
    if (config.trace_errors) {
        if (!test_set) throw ValidationError("error tracing needs a test set");
        if (test_set->unit.cols() != space.size()) throw ValidationError("test set dimension does not match the space");
    }
    Runner runner(pool, sim, config);
    return runner.run(test_set);
}

ErrorCurve error_curve(const RunTrace& trace, std::string case_name, std::string model, StrategyKind strategy, int rep) {
    ErrorCurve c{std::move(case_name), std::move(model), to_abbrev(strategy), rep, {}};
    for (std::size_t k = 0; k < trace.per_step_error.size(); ++k)
        c.errors_by_step.emplace_back(static_cast<int>(k + 1), trace.per_step_error[k]);
    return c;
}

} // namespace sal
