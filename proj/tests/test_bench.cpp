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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "sal/bench.hpp"
#include "sal/rng.hpp"

using namespace sal;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("sal_bench_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::vector<ErrorCurve> sample_curves() {
    std::vector<ErrorCurve> out;
    Rng rng(4);
    for (const char* model : {"gp", "linear"})
        for (const char* strategy : {"R", "GI"})
            for (int rep = 0; rep < 3; ++rep) {
                ErrorCurve c{"mixer", model, strategy, rep, {}};
                for (int q = 1; q <= 10; ++q) c.errors_by_step.emplace_back(q, rng.uniform() / q);
                out.push_back(c);
            }
    return out;
}

} // namespace

TEST_CASE("average relative error examples") {
    const Vector t{{1.0, -2.0}};
    CHECK(average_relative_error(t, t) == 0.0);
    CHECK(average_relative_error(Vector{{2.0}}, Vector{{1.0}}) == 0.5);
    CHECK(average_relative_error(t, Vector{{2.0, -1.0}}) == 0.75);
    CHECK_THROWS_AS(average_relative_error(Vector{{0.0, 1.0}}, Vector{{0.0, 1.0}}), ValidationError);
    CHECK_THROWS_AS(average_relative_error(Vector{{1.0}}, Vector{{1.0, 2.0}}), ValidationError);
    CHECK_THROWS_AS(average_relative_error(Vector(0), Vector(0)), ValidationError);
    CHECK(average_relative_error(Eigen::VectorXf::Constant(2, 2.0f), Eigen::VectorXf::Constant(2, 1.0f)) == 0.5f);
}

TEST_CASE("average relative error matches the oracle") {
    Rng rng(10);
    for (int t = 0; t < 100; ++t) {
        const Index n = 1 + static_cast<Index>(rng.below(200));
        std::vector<double> a, b;
        for (Index i = 0; i < n; ++i) {
            a.push_back(rng.uniform(0.1, 5.0) * (rng.below(2) ? 1 : -1));
            b.push_back(a.back() + rng.uniform(-1, 1));
        }
        const double got = average_relative_error(Eigen::Map<const Vector>(a.data(), n), Eigen::Map<const Vector>(b.data(), n));
        CHECK(std::abs(got - oracle::relative_error(a, b)) <= 1e-12);
    }
}

TEST_CASE("student t quantile and cdf") {
    for (int df = 1; df <= 9; ++df) {
        CHECK(std::abs(student_t_quantile(0.975, df) - oracle::kT975[df]) <= 1e-9);
        CHECK(std::abs(student_t_cdf(oracle::kT975[df], df) - 0.975) <= 1e-12);
    }
    CHECK(student_t_quantile(0.5, 3) == 0.0);
    CHECK(student_t_quantile(0.025, 4) == doctest::Approx(-oracle::kT975[4]).epsilon(1e-12));
    CHECK(student_t_cdf(0.0, 7) == 0.5);
    CHECK(student_t_cdf(1.5, 3) == doctest::Approx(0.8847080673775886).epsilon(1e-10));
    // Large df approaches the normal quantile.
    CHECK(student_t_quantile(0.975, 1e6) == doctest::Approx(1.959963984540054).epsilon(1e-6));
    CHECK(std::abs(student_t_quantile(0.975, 9) - 2.262) < 5e-4);
    CHECK_THROWS_AS(student_t_quantile(1.0, 3), ValidationError);
    CHECK_THROWS_AS(student_t_quantile(0.9, 0), ValidationError);
}

TEST_CASE("aggregate examples") {
    const Interval flat = aggregate(std::vector<double>(10, 0.5));
    CHECK(flat.mean == 0.5);
    CHECK(flat.low == 0.5);
    CHECK(flat.high == 0.5);
    const Interval two = aggregate({0.0, 1.0});
    CHECK(two.mean == 0.5);
    CHECK(two.high - two.mean == doctest::Approx(6.353102368087352).epsilon(1e-12));
    const Interval one = aggregate({3.0});
    CHECK(one.low == 3.0);
    CHECK(one.high == 3.0);
    CHECK_THROWS_AS(aggregate({}), ValidationError);
}

TEST_CASE("aggregate matches the t-interval oracle") {
    Rng rng(21);
    for (std::size_t n = 1; n <= 10; ++n)
        for (int t = 0; t < 20; ++t) {
            std::vector<double> v;
            for (std::size_t i = 0; i < n; ++i) v.push_back(rng.uniform(0, 2));
            const Interval got = aggregate(v);
            const oracle::Interval want = oracle::t_interval(v);
            CHECK(std::abs(got.mean - want.mean) <= 1e-12);
            CHECK(std::abs(got.low - want.low) <= 1e-9);
            CHECK(std::abs(got.high - want.high) <= 1e-9);
            CHECK(got.low <= got.mean);
            CHECK(got.mean <= got.high);
        }
}

TEST_CASE("test sets") {
    const Simulator sim = builtin_analytic("mixer_2d_smooth");
    const TestSet a = build_test_set(sim.space(), sim, 100, 5);
    CHECK(a.size() == 100);
    for (Index i = 0; i < 100; ++i) {
        CHECK(a.raw(i, 0) >= 0.2);
        CHECK(a.raw(i, 0) <= 0.3);
        CHECK(a.raw(i, 1) >= 0.8);
        CHECK(a.raw(i, 1) <= 1.57);
        CHECK(a.true_values(i) == sim.evaluate(a.raw.row(i).transpose()));
    }
    const TestSet b = build_test_set(sim.space(), sim, 100, 5);
    CHECK(a.unit == b.unit);
    CHECK(build_test_set(sim.space(), sim, 100, 6).unit != a.unit);
    CHECK_THROWS_AS(build_test_set(sim.space(), sim, 0, 5), ValidationError);

    SimulatorSpec spec;
    const Simulator constant(spec, sim.space(), "c", [](const Vector&) { return 4.0; });
    const TestSet c = build_test_set(sim.space(), constant, 1, 0);
    CHECK(average_relative_error(c.true_values, Vector::Constant(1, 4.0)) == 0.0);
}

TEST_CASE("summary layout, cap and best flags") {
    std::vector<DetailRow> rows;
    for (int rep = 0; rep < 2; ++rep) {
        rows.push_back({"c", "gp", "R", rep, 5, 3e6});
        rows.push_back({"c", "gp", "GI", rep, 5, 0.2 + 0.1 * rep});
        rows.push_back({"c", "gp", "V", rep, 5, 0.1});
    }
    const auto s = summarize(rows, {5}, 100.0);
    REQUIRE(s.size() == 3);
    CHECK(s[0].strategy == "GI");
    CHECK(s[1].strategy == "R");
    CHECK(s[1].mean == 100.0);
    CHECK(s[1].ci_high == 100.0);
    CHECK(s[2].best);
    CHECK_FALSE(s[0].best);
    CHECK(s[2].ci_low == s[2].mean);
    CHECK(s[0].case_name == "c/gp");
    CHECK(s[0].n_reps == 2);
    const std::string detail = detail_csv(rows);
    CHECK(detail.find("3000000") != std::string::npos);
    CHECK_THROWS_AS(summarize(rows, {5, 10}), ValidationError);
}

TEST_CASE("reports: ordering, byte-identical regeneration, capping leaves detail alone") {
    const auto curves = sample_curves();
    const auto dir = scratch_dir("report");
    const auto summary = write_report(curves, {2, 5, 10}, dir, 100.0);
    CHECK(summary.size() == 2 * 2 * 3);
    const std::string detail_bytes = slurp(dir / "detail.csv");
    CHECK(detail_bytes.rfind("case,model,strategy,rep,queries,error\n", 0) == 0);
    CHECK(slurp(dir / "summary.csv").rfind("case,queries,strategy,mean,ci_low,ci_high,n_reps,best\n", 0) == 0);

    const auto rows = read_detail_csv(dir / "detail.csv");
    CHECK(rows.size() == curves.size() * 10);
    CHECK(std::is_sorted(rows.begin(), rows.end(), [](const DetailRow& a, const DetailRow& b) {
        return std::tie(a.case_name, a.model, a.strategy, a.rep, a.queries) <
               std::tie(b.case_name, b.model, b.strategy, b.rep, b.queries);
    }));
    CHECK(summary_csv(summarize(rows, {2, 5, 10}, 100.0)) == slurp(dir / "summary.csv"));

    const auto capped_dir = scratch_dir("report_capped");
    write_report(curves, {2, 5, 10}, capped_dir, 1e-3);
    CHECK(slurp(capped_dir / "detail.csv") == detail_bytes);
    CHECK(slurp(capped_dir / "summary.csv") != slurp(dir / "summary.csv"));
}
