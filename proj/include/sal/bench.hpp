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

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "sal/sim.hpp"
#include "sal/space.hpp"
#include "sal/types.hpp"

namespace sal {

/// Mean of |f - f*| / |f| over the test points. No flooring: a zero true value
/// is an error, not a skipped term.
template <typename DerivedT, typename DerivedP>
typename DerivedT::Scalar average_relative_error(const Eigen::MatrixBase<DerivedT>& truth,
                                                 const Eigen::MatrixBase<DerivedP>& predicted) {
    using Scalar = typename DerivedT::Scalar;
    if (truth.size() == 0) throw ValidationError("average_relative_error: empty input");
    if (truth.size() != predicted.size()) throw ValidationError("average_relative_error: length mismatch");
    Scalar sum(0);
    for (Index i = 0; i < truth.size(); ++i) {
        const Scalar f = truth(i);
        if (f == Scalar(0)) throw ValidationError("average_relative_error: true value is exactly zero");
        sum += std::abs(f - predicted(i)) / std::abs(f);
    }
    return sum / static_cast<Scalar>(truth.size());
}

/// Held-out points drawn uniformly in unit coordinates and evaluated once.
struct TestSet {
    PointMatrix unit;
    PointMatrix raw;
    Vector true_values;
    std::uint64_t seed = 0;

    Index size() const noexcept { return unit.rows(); }
};

TestSet build_test_set(const ParameterSpace& space, const Simulator& sim, Index n_e = 100, std::uint64_t seed = 0);

/// Two-sided Student-t critical value: the p-quantile with `df` degrees of freedom.
double student_t_quantile(double p, double df);

/// Student-t cumulative distribution function.
double student_t_cdf(double t, double df);

struct Interval {
    double mean = 0.0;
    double low = 0.0;
    double high = 0.0;
};

/// Sample mean with a one-sample t confidence interval (zero width for n = 1).
Interval aggregate(const std::vector<double>& values, double confidence = 0.95);

struct ErrorCurve {
    std::string case_name;
    std::string model;
    std::string strategy;  // report abbreviation (R, GI, GO, GIO, V)
    int rep = 0;
    std::vector<std::pair<int, double>> errors_by_step;  // (queries so far, error)
};

struct DetailRow {
    std::string case_name;
    std::string model;
    std::string strategy;
    int rep = 0;
    int queries = 0;
    double error = 0.0;
};

struct SummaryRow {
    std::string case_name;  // "<case>/<model>"
    int queries = 0;
    std::string strategy;
    double mean = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    int n_reps = 0;
    bool best = false;
};

/// Flattens curves into detail rows ordered by (case, model, strategy, rep, queries).
std::vector<DetailRow> detail_rows(const std::vector<ErrorCurve>& curves);

/// Table-shaped summary at the requested query marks. Means and interval
/// bounds above `cap` are reported as `cap`; `best` flags the lowest uncapped
/// mean within each (case, queries) group.
std::vector<SummaryRow> summarize(const std::vector<DetailRow>& rows, const std::vector<int>& query_marks,
                                  double cap = 100.0, double confidence = 0.95);

void write_detail_csv(const std::filesystem::path& path, const std::vector<DetailRow>& rows);
std::vector<DetailRow> read_detail_csv(const std::filesystem::path& path);
void write_summary_csv(const std::filesystem::path& path, const std::vector<SummaryRow>& rows);

std::string detail_csv(const std::vector<DetailRow>& rows);
std::string summary_csv(const std::vector<SummaryRow>& rows);

/// Writes detail.csv and summary.csv into `dir` and returns the summary rows.
std::vector<SummaryRow> write_report(const std::vector<ErrorCurve>& curves, const std::vector<int>& query_marks,
                                     const std::filesystem::path& dir, double cap = 100.0);

} // namespace sal
