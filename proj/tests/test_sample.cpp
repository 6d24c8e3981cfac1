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

#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "sal/rng.hpp"
#include "sal/sample.hpp"

using namespace sal;

namespace {

CandidatePool pool_of(std::initializer_list<std::pair<double, double>> pts) {
    PointMatrix u(static_cast<Index>(pts.size()), 2);
    Index i = 0;
    for (auto [a, b] : pts) {
        u(i, 0) = a;
        u(i, 1) = b;
        ++i;
    }
    return CandidatePool(u, u, PoolSource::grid);
}

// Linear model whose predictions are a chosen function of the first coordinate.
Model line_model(double slope, double intercept) {
    return Model(LinearModel{Vector{{slope, 0.0}}, intercept}, 2);
}

PointMatrix rows_of(const CandidatePool& pool, const std::vector<Index>& idx) {
    PointMatrix out(static_cast<Index>(idx.size()), pool.dim());
    for (std::size_t k = 0; k < idx.size(); ++k) out.row(static_cast<Index>(k)) = pool.unit_points().row(idx[k]);
    return out;
}

} // namespace

TEST_CASE("strategy tokens") {
    for (auto s : {StrategyKind::random, StrategyKind::greedy_input, StrategyKind::greedy_output, StrategyKind::greedy_io,
                   StrategyKind::variational}) {
        CHECK(parse_strategy(to_token(s)) == s);
        CHECK(parse_strategy(to_abbrev(s)) == s);
    }
    CHECK(parse_strategy("V") == StrategyKind::variational);
    CHECK(to_abbrev(StrategyKind::greedy_io) == "GIO");
    CHECK_THROWS_AS(parse_strategy("qbc"), ValidationError);
    CHECK_THROWS_AS(check_compatible(StrategyKind::variational, ModelKind::linear), ValidationError);
    CHECK_NOTHROW(check_compatible(StrategyKind::variational, ModelKind::gp));
    CHECK_NOTHROW(check_compatible(StrategyKind::greedy_io, ModelKind::forest));
}

TEST_CASE("distance examples") {
    const PointMatrix origin = PointMatrix::Zero(1, 2);
    CHECK(dist_input(Eigen::RowVector2d(0, 0), origin) == 0.0);
    CHECK(dist_input(Eigen::RowVector2d(1, 1), origin) == doctest::Approx(std::sqrt(2.0)));
    PointMatrix two(2, 2);
    two << 0, 0, 1, 1;
    CHECK(dist_input(Eigen::RowVector2d(0.1, 0), two) == doctest::Approx(0.1));
    const Vector r{{0.0, 1.0}};
    CHECK(dist_output(1.0, r) == 0.0);
    CHECK(dist_output(2.0, r) == 1.0);
    CHECK(dist_output(0.5, r) == 0.5);
    CHECK_THROWS_AS(dist_input(Eigen::RowVector2d(0, 0), PointMatrix(0, 2)), ValidationError);
}

TEST_CASE("selection examples") {
    SUBCASE("greedy input") {
        CandidatePool pool = pool_of({{0, 0}, {1, 1}, {0.5, 0.5}, {0.1, 0}});
        pool.mark_labeled(0);
        const PointMatrix li = rows_of(pool, {0});
        const Vector lr{{0.0}};
        const SelectionContext ctx{pool, li, lr, nullptr};
        CHECK(select_next(StrategyKind::greedy_input, ctx, 0) == 1);
    }
    SUBCASE("greedy output") {
        // Predictions 0.5, 2.0, 0.9 at indices 2, 3, 4 via y = x.
        CandidatePool pool = pool_of({{0, 0}, {1, 0}, {0.5, 0}, {2.0, 0}, {0.9, 0}});
        pool.mark_labeled(0);
        pool.mark_labeled(1);
        const PointMatrix li = rows_of(pool, {0, 1});
        const Vector lr{{0.0, 1.0}};
        const Model m = line_model(1.0, 0.0);
        const SelectionContext ctx{pool, li, lr, &m};
        CHECK(select_next(StrategyKind::greedy_output, ctx, 0) == 3);
    }
    SUBCASE("greedy io never picks a zero input distance") {
        CandidatePool pool = pool_of({{0, 0}, {0, 0}, {0.2, 0.3}});
        pool.mark_labeled(0);
        const PointMatrix li = rows_of(pool, {0});
        const Vector lr{{5.0}};
        const Model m = line_model(-100.0, 0.0);
        const SelectionContext ctx{pool, li, lr, &m};
        const Vector s = candidate_scores(StrategyKind::greedy_io, ctx);
        CHECK(s(1) == 0.0);
        CHECK(select_next(StrategyKind::greedy_io, ctx, 0) == 2);
    }
    SUBCASE("random with one unlabeled point") {
        CandidatePool pool = pool_of({{0, 0}, {1, 1}, {0.5, 0.5}});
        pool.mark_labeled(0);
        pool.exclude(2);
        const PointMatrix li = rows_of(pool, {0});
        const Vector lr{{0.0}};
        for (std::uint64_t seed = 0; seed < 5; ++seed)
            CHECK(select_next(StrategyKind::random, SelectionContext{pool, li, lr, nullptr}, seed) == 1);
    }
}

TEST_CASE("selection errors") {
    CandidatePool pool = pool_of({{0, 0}, {1, 1}});
    pool.mark_labeled(0);
    const PointMatrix li = rows_of(pool, {0});
    const Vector lr{{0.0}};
    CHECK_THROWS_AS(select_next(StrategyKind::greedy_output, SelectionContext{pool, li, lr, nullptr}, 0), ValidationError);
    const Model lin = line_model(1, 0);
    CHECK_THROWS_AS(select_next(StrategyKind::variational, SelectionContext{pool, li, lr, &lin}, 0),
                    UnsupportedCapability);
    pool.mark_labeled(1);
    CHECK_THROWS_AS(select_next(StrategyKind::greedy_input, SelectionContext{pool, li, lr, nullptr}, 0), ValidationError);
}

TEST_CASE("deterministic strategies match an exhaustive scan") {
    Rng rng(99);
    for (int t = 0; t < 60; ++t) {
        const Index nf = 1 + static_cast<Index>(rng.below(4));
        const Index n = 5 + static_cast<Index>(rng.below(60));
        PointMatrix u(n, nf);
        for (Index i = 0; i < n; ++i)
            for (Index k = 0; k < nf; ++k) u(i, k) = std::floor(rng.uniform() * 5.0) / 4.0;  // coarse lattice: many ties
        CandidatePool pool(u, u, PoolSource::quasirandom);
        std::vector<Index> labeled;
        const Index nl = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(std::min<Index>(n - 1, 8))));
        while (static_cast<Index>(labeled.size()) < nl) {
            const Index i = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
            if (!pool.is_available(i)) continue;
            pool.mark_labeled(i);
            labeled.push_back(i);
        }
        const PointMatrix li = rows_of(pool, labeled);
        Vector lr(nl);
        for (Index k = 0; k < nl; ++k) lr(k) = std::round(rng.uniform(-3, 3) * 2.0) / 2.0;
        const Model model(LinearModel{Vector::Constant(nf, 1.0), 0.0}, nf);
        const SelectionContext ctx{pool, li, lr, &model};

        oracle::Rows lab;
        for (Index i : labeled) lab.emplace_back(u.row(i).begin(), u.row(i).end());
        std::vector<double> resp(lr.begin(), lr.end());
        const Vector pred = model.predict(u);
        std::vector<double> gi, go, gio;
        std::vector<bool> allowed;
        for (Index i = 0; i < n; ++i) {
            const std::vector<double> p(u.row(i).begin(), u.row(i).end());
            gi.push_back(oracle::input_distance(p, lab));
            go.push_back(oracle::output_distance(pred(i), resp));
            gio.push_back(gi.back() * go.back());
            allowed.push_back(pool.is_available(i));
        }
        CHECK(select_next(StrategyKind::greedy_input, ctx, 0) == oracle::argmax_first(gi, allowed));
        CHECK(select_next(StrategyKind::greedy_output, ctx, 0) == oracle::argmax_first(go, allowed));
        CHECK(select_next(StrategyKind::greedy_io, ctx, 0) == oracle::argmax_first(gio, allowed));
    }
}

TEST_CASE("greedy io is invariant to response scale") {
    Rng rng(5);
    for (int t = 0; t < 30; ++t) {
        const Index n = 30;
        PointMatrix u(n, 2);
        for (Index i = 0; i < n; ++i) u.row(i) << rng.uniform(), rng.uniform();
        CandidatePool pool(u, u, PoolSource::quasirandom);
        for (Index i = 0; i < 4; ++i) pool.mark_labeled(i);
        const PointMatrix li = u.topRows(4);
        const Vector lr{{rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()}};
        const Vector coef{{rng.uniform(-2, 2), rng.uniform(-2, 2)}};
        const Model m(LinearModel{coef, 0.3}, 2);
        const double c = 0.5 + 4.0 * rng.uniform();
        const Model scaled(LinearModel{coef * c, 0.3 * c}, 2);
        const Vector lr_scaled = lr * c;
        CHECK(select_next(StrategyKind::greedy_io, SelectionContext{pool, li, lr, &m}, 0) ==
              select_next(StrategyKind::greedy_io, SelectionContext{pool, li, lr_scaled, &scaled}, 0));
    }
}

TEST_CASE("random selection is reproducible and covers the pool") {
    const PointMatrix u = PointMatrix::Random(20, 2).cwiseAbs();
    CandidatePool pool(u, u, PoolSource::quasirandom);
    const PointMatrix li(0, 2);
    const Vector lr(0);
    const SelectionContext ctx{pool, li, lr, nullptr};
    std::set<Index> seen;
    for (std::uint64_t s = 0; s < 400; ++s) {
        const Index a = select_next(StrategyKind::random, ctx, s);
        CHECK(a == select_next(StrategyKind::random, ctx, s));
        seen.insert(a);
    }
    CHECK(seen.size() == 20);
}

TEST_CASE("greedy input until exhaustion visits every point once") {
    const CandidatePool grid = build_pool(ParameterSpace({{"a", 0, 1, Scale::linear}, {"b", 0, 1, Scale::linear}}),
                                          GridSpec{5});
    CandidatePool pool = grid;
    pool.mark_labeled(12);
    std::vector<Index> order{12};
    while (pool.available_count() > 0) {
        const PointMatrix li = rows_of(pool, order);
        const Vector lr = Vector::Zero(static_cast<Index>(order.size()));
        const Index i = select_next(StrategyKind::greedy_input, SelectionContext{pool, li, lr, nullptr}, 0);
        pool.mark_labeled(i);
        order.push_back(i);
    }
    std::set<Index> uniq(order.begin(), order.end());
    CHECK(uniq.size() == 25);
}
