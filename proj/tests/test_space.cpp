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
#include "sal/space.hpp"

using namespace sal;

namespace {

ParameterSpace unit_square() { return ParameterSpace({{"a", 0.0, 1.0, Scale::linear}, {"b", 0.0, 1.0, Scale::linear}}); }

constexpr double kTie = 1e-12;

// First index whose score is within kTie of the maximum.
long argmax_tolerant(const std::vector<double>& score, const std::vector<bool>& allowed) {
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < score.size(); ++i)
        if (allowed[i]) top = std::max(top, score[i]);
    for (std::size_t i = 0; i < score.size(); ++i)
        if (allowed[i] && score[i] >= top - kTie) return static_cast<long>(i);
    return -1;
}

// Brute-force initial design: centroid-nearest, then repeated max-min distance.
std::vector<Index> brute_design(const CandidatePool& pool, Index n0) {
    oracle::Rows pts;
    for (Index i = 0; i < pool.size(); ++i) {
        std::vector<double> p(static_cast<std::size_t>(pool.dim()));
        for (Index k = 0; k < pool.dim(); ++k) p[static_cast<std::size_t>(k)] = pool.unit_points()(i, k);
        pts.push_back(p);
    }
    const std::vector<double> centre(static_cast<std::size_t>(pool.dim()), 0.5);
    std::vector<double> d0;
    for (const auto& p : pts) d0.push_back(-oracle::sq_dist(p, centre));
    std::vector<bool> allowed(pts.size(), true);
    std::vector<Index> out{argmax_tolerant(d0, allowed)};
    allowed[static_cast<std::size_t>(out[0])] = false;
    while (static_cast<Index>(out.size()) < n0) {
        oracle::Rows chosen;
        for (Index i : out) chosen.push_back(pts[static_cast<std::size_t>(i)]);
        std::vector<double> score;
        for (const auto& p : pts) score.push_back(oracle::input_distance(p, chosen));
        const long next = argmax_tolerant(score, allowed);
        out.push_back(next);
        allowed[static_cast<std::size_t>(next)] = false;
    }
    return out;
}

} // namespace

TEST_CASE("space validation") {
    CHECK_THROWS_AS(ParameterSpace(std::vector<DimensionSpec>{}), ValidationError);
    CHECK_THROWS_AS(ParameterSpace({{"a", 1.0, 1.0, Scale::linear}}), ValidationError);
    CHECK_THROWS_AS(ParameterSpace({{"a", 0.0, 1.0, Scale::log10}}), ValidationError);
    CHECK_THROWS_AS(ParameterSpace({{"a", 0.0, 1.0, Scale::linear}, {"a", 0.0, 2.0, Scale::linear}}), ValidationError);
}

TEST_CASE("map_point examples") {
    const ParameterSpace lin({{"x", 0.0, 1.0, Scale::linear}});
    CHECK(map_point(lin, Vector::Constant(1, 0.5), MapDirection::to_unit)(0) == 0.5);

    const ParameterSpace lg({{"re", 10.0, 1e5, Scale::log10}});
    CHECK(std::abs(map_point(lg, Vector::Constant(1, 1e3), MapDirection::to_unit)(0) - 0.5) < 1e-15);

    const ParameterSpace two({{"a", 0.0, 1.0, Scale::linear}, {"b", 2.0, 4.0, Scale::linear}});
    const Vector raw = map_point(two, Vector{{1.0, 0.0}}, MapDirection::to_raw);
    CHECK(raw(0) == 1.0);
    CHECK(raw(1) == 2.0);

    CHECK_THROWS_AS(map_point(two, Vector{{1.0}}, MapDirection::to_raw), ValidationError);
    CHECK_THROWS_AS(map_point(two, Vector{{1.5, 0.0}}, MapDirection::to_raw), ValidationError);
    CHECK_THROWS_AS(map_point(two, Vector{{0.5, 4.5}}, MapDirection::to_unit), ValidationError);
}

TEST_CASE("map_point round trip on 1000 random points") {
    const ParameterSpace space({{"a", -3.0, 7.0, Scale::linear},
                                {"re", 1.0, 100.0, Scale::log10},
                                {"big", 10.0, 1e5, Scale::log10},
                                {"c", 0.057, 0.2, Scale::linear}});
    Rng rng(42);
    for (int t = 0; t < 1000; ++t) {
        Vector u(4);
        for (Index k = 0; k < 4; ++k) u(k) = rng.uniform();
        const Vector raw = map_point(space, u, MapDirection::to_raw);
        const Vector back = map_point(space, raw, MapDirection::to_unit);
        for (Index k = 0; k < 4; ++k) REQUIRE(std::abs(back(k) - u(k)) <= 1e-12);
        const Vector raw2 = map_point(space, back, MapDirection::to_raw);
        for (Index k = 0; k < 4; ++k) REQUIRE(std::abs(raw2(k) - raw(k)) <= 1e-12 * std::abs(raw(k)));
    }
}

TEST_CASE("map_point works for float scalars") {
    const ParameterSpace space({{"a", 0.0, 2.0, Scale::linear}});
    const Eigen::VectorXf u = Eigen::VectorXf::Constant(1, 0.25f);
    const Eigen::VectorXf raw = map_point(space, u, MapDirection::to_raw);
    CHECK(raw(0) == doctest::Approx(0.5f));
}

TEST_CASE("grid pools") {
    const CandidatePool pool = build_pool(unit_square(), GridSpec{3});
    REQUIRE(pool.size() == 9);
    CHECK(pool.unit_points().row(0).isApprox(Eigen::RowVector2d(0, 0)));
    CHECK(pool.unit_points().row(8).isApprox(Eigen::RowVector2d(1, 1)));
    CHECK(pool.unit_points()(1, 1) == 0.5);  // last dimension varies fastest

    const ParameterSpace lg({{"re", 10.0, 1e5, Scale::log10}});
    const CandidatePool lp = build_pool(lg, GridSpec{5});
    const double expect[] = {10, 1e2, 1e3, 1e4, 1e5};
    for (Index i = 0; i < 5; ++i) CHECK(lp.raw_points()(i, 0) == doctest::Approx(expect[i]).epsilon(1e-14));

    const CandidatePool again = build_pool(unit_square(), GridSpec{3});
    CHECK(again.unit_points() == pool.unit_points());
    CHECK_THROWS_AS(build_pool(unit_square(), GridSpec{1}), ValidationError);
}

TEST_CASE("quasirandom pools") {
    std::vector<DimensionSpec> dims;
    for (int k = 0; k < 6; ++k) dims.push_back({"x" + std::to_string(k), 0.0, 1.0, Scale::linear});
    const ParameterSpace space(dims);
    const CandidatePool pool = build_pool(space, QuasirandomSpec{4096, 9});
    REQUIRE(pool.size() == 4096);
    CHECK(pool.unit_points().minCoeff() >= 0.0);
    CHECK(pool.unit_points().maxCoeff() <= 1.0);
    std::set<std::vector<double>> distinct;
    for (Index i = 0; i < pool.size(); ++i)
        distinct.insert(std::vector<double>(pool.unit_points().row(i).begin(), pool.unit_points().row(i).end()));
    CHECK(distinct.size() == 4096);
    CHECK(build_pool(space, QuasirandomSpec{4096, 9}).unit_points() == pool.unit_points());
    CHECK(build_pool(space, QuasirandomSpec{4096, 10}).unit_points() != pool.unit_points());
}

TEST_CASE("halton without shift matches the radical inverse") {
    const PointMatrix h = halton_points(4, 2, 0);
    // Index 1..4 in bases 2 and 3.
    CHECK(h(0, 0) == 0.5);
    CHECK(h(1, 0) == 0.25);
    CHECK(h(2, 0) == 0.75);
    CHECK(h(0, 1) == doctest::Approx(1.0 / 3));
    CHECK(h(1, 1) == doctest::Approx(2.0 / 3));
    CHECK(h(2, 1) == doctest::Approx(1.0 / 9));
}

TEST_CASE("default pool resolution") {
    CHECK(std::get<GridSpec>(default_pool_spec(2)).points_per_dim == 41);
    CHECK(std::get<GridSpec>(default_pool_spec(4)).points_per_dim == 11);
    CHECK(std::get<QuasirandomSpec>(default_pool_spec(6)).size == 4096);
}

TEST_CASE("initial design examples") {
    const CandidatePool pool = build_pool(unit_square(), GridSpec{3});
    CHECK(initial_design(pool, 1) == std::vector<Index>{4});
    CHECK(initial_design(pool, 5) == std::vector<Index>{4, 0, 2, 6, 8});

    const auto all = initial_design(pool, 9);
    std::set<Index> uniq(all.begin(), all.end());
    CHECK(uniq.size() == 9);

    CHECK_THROWS_AS(initial_design(pool, 0), ValidationError);
    CHECK_THROWS_AS(initial_design(pool, 10), ValidationError);

    // Even grid: the centroid is off-grid, the lowest of the four nearest wins.
    const CandidatePool even = build_pool(unit_square(), GridSpec{4});
    CHECK(initial_design(even, 1) == std::vector<Index>{5});
}

TEST_CASE("initial design matches brute force and nests") {
    Rng rng(3);
    for (int t = 0; t < 30; ++t) {
        const int nf = 1 + static_cast<int>(rng.below(3));
        std::vector<DimensionSpec> dims;
        for (int k = 0; k < nf; ++k) dims.push_back({"x" + std::to_string(k), 0.0, 1.0, Scale::linear});
        const ParameterSpace space(dims);
        const CandidatePool pool = t % 2 ? build_pool(space, GridSpec{3 + static_cast<int>(rng.below(4))})
                                         : build_pool(space, QuasirandomSpec{50, rng.next_u64()});
        const Index n0 = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(std::min<Index>(pool.size(), 12))));
        const auto d = initial_design(pool, n0);
        CHECK(d == brute_design(pool, n0));
        if (n0 < pool.size()) {
            const auto longer = initial_design(pool, n0 + 1);
            CHECK(std::equal(d.begin(), d.end(), longer.begin()));
        }
    }
}

TEST_CASE("pool labeling state") {
    CandidatePool pool = build_pool(unit_square(), GridSpec{3});
    pool.mark_labeled(4);
    pool.exclude(0);
    CHECK(pool.available_count() == 7);
    CHECK(pool.labeled() == std::vector<Index>{4});
    CHECK_THROWS(pool.mark_labeled(4));
    CHECK_THROWS(pool.mark_labeled(0));
    CHECK_THROWS_AS(initial_design(pool, 2), ValidationError);
}

TEST_CASE("initial count rules") {
    CHECK(default_initial_count(InitialCountRule::four_nf(), 2) == 8);
    CHECK(default_initial_count(InitialCountRule::two_nf(), 4) == 8);
    CHECK(default_initial_count(InitialCountRule::fixed(6), 6) == 6);
}
