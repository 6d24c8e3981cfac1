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

#include "sal/bench.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <tuple>

#include "sal/csv.hpp"
#include "sal/rng.hpp"

namespace sal {

TestSet build_test_set(const ParameterSpace& space, const Simulator& sim, Index n_e, std::uint64_t seed) {
    if (n_e < 1) throw ValidationError("test set size must be >= 1");
    if (sim.space().size() != space.size()) throw ValidationError("test set: simulator/space dimension mismatch");
    Rng rng(mix_seed(seed));
    TestSet ts;
    ts.seed = seed;
    ts.unit.resize(n_e, space.size());
    ts.raw.resize(n_e, space.size());
    ts.true_values.resize(n_e);
    for (Index i = 0; i < n_e; ++i)
        for (Index d = 0; d < space.size(); ++d) ts.unit(i, d) = rng.uniform();
    for (Index i = 0; i < n_e; ++i) {
        const Vector raw = map_point(space, ts.unit.row(i).transpose(), MapDirection::to_raw);
        ts.raw.row(i) = raw.transpose();
        ts.true_values(i) = sim.evaluate(raw);
    }
    return ts;
}

// ---------------------------------------------------------------------------
// Student-t distribution

namespace {

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIter = 500;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double dm = m;
        const double m2 = 2.0 * dm;
        double aa = dm * (b - dm) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + dm) * (qab + dm) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

double regularized_incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double front =
        std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

} // namespace

double student_t_cdf(double t, double df) {
    if (!(df > 0)) throw ValidationError("student_t_cdf: df must be > 0");
    if (t == 0.0) return 0.5;
    const double x = df / (df + t * t);
    const double tail = 0.5 * regularized_incomplete_beta(0.5 * df, 0.5, x);
    return t > 0 ? 1.0 - tail : tail;
}

double student_t_quantile(double p, double df) {
    if (!(p > 0.0 && p < 1.0)) throw ValidationError("student_t_quantile: p must lie in (0, 1)");
    if (!(df > 0)) throw ValidationError("student_t_quantile: df must be > 0");
    if (p == 0.5) return 0.0;
    if (p < 0.5) return -student_t_quantile(1.0 - p, df);
    double lo = 0.0, hi = 1.0;
    while (student_t_cdf(hi, df) < p) {
        lo = hi;
        hi *= 2.0;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (student_t_cdf(mid, df) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

Interval aggregate(const std::vector<double>& values, double confidence) {
    if (values.empty()) throw ValidationError("aggregate: no values");
    if (!(confidence > 0.0 && confidence < 1.0)) throw ValidationError("aggregate: confidence must lie in (0, 1)");
    // Identical values (including n = 1) give an exact zero-width interval,
    // free of the round-off a summed mean would introduce.
    if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); }))
        return {values.front(), values.front(), values.front()};
    const auto n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double s = std::sqrt(ss / (n - 1.0));
    const double half = student_t_quantile(0.5 * (1.0 + confidence), n - 1.0) * s / std::sqrt(n);
    return {mean, mean - half, mean + half};
}

// ---------------------------------------------------------------------------
// Reports

namespace {

auto detail_key(const DetailRow& r) { return std::tie(r.case_name, r.model, r.strategy, r.rep, r.queries); }

std::string summary_label(const std::string& case_name, const std::string& model) { return case_name + "/" + model; }

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

constexpr const char* kDetailHeader = "case,model,strategy,rep,queries,error";
constexpr const char* kSummaryHeader = "case,queries,strategy,mean,ci_low,ci_high,n_reps,best";

} // namespace

std::vector<DetailRow> detail_rows(const std::vector<ErrorCurve>& curves) {
    std::vector<DetailRow> rows;
    for (const auto& c : curves)
        for (const auto& [q, e] : c.errors_by_step) rows.push_back({c.case_name, c.model, c.strategy, c.rep, q, e});
    std::sort(rows.begin(), rows.end(), [](const DetailRow& a, const DetailRow& b) { return detail_key(a) < detail_key(b); });
    return rows;
}

std::vector<SummaryRow> summarize(const std::vector<DetailRow>& rows, const std::vector<int>& query_marks, double cap,
                                  double confidence) {
    if (query_marks.empty()) throw ValidationError("summary needs at least one query mark");
    using SeriesKey = std::tuple<std::string, std::string, std::string>;  // label, queries-less strategy
    std::map<SeriesKey, std::map<int, std::vector<std::pair<int, double>>>> series;
    for (const auto& r : rows)
        series[{summary_label(r.case_name, r.model), r.strategy, ""}][r.queries].push_back({r.rep, r.error});

    std::vector<SummaryRow> out;
    for (auto& [key, by_q] : series) {
        const auto& [label, strategy, unused] = key;
        (void)unused;
        for (int mark : query_marks) {
            auto it = by_q.find(mark);
            if (it == by_q.end())
                throw ValidationError("detail data for " + label + " strategy " + strategy + " lacks query mark " +
                                      std::to_string(mark));
            auto reps = it->second;
            std::sort(reps.begin(), reps.end());
            std::vector<double> values;
            for (const auto& [rep, e] : reps) values.push_back(e);
            const Interval iv = aggregate(values, confidence);
            SummaryRow s;
            s.case_name = label;
            s.queries = mark;
            s.strategy = strategy;
            s.mean = iv.mean;
            s.ci_low = iv.low;
            s.ci_high = iv.high;
            s.n_reps = static_cast<int>(values.size());
            out.push_back(s);
        }
    }
    std::sort(out.begin(), out.end(), [](const SummaryRow& a, const SummaryRow& b) {
        return std::tie(a.case_name, a.queries, a.strategy) < std::tie(b.case_name, b.queries, b.strategy);
    });

    // Best per (case, queries), on uncapped means; ties are all flagged.
    for (std::size_t i = 0; i < out.size();) {
        std::size_t j = i;
        double best = std::numeric_limits<double>::infinity();
        while (j < out.size() && out[j].case_name == out[i].case_name && out[j].queries == out[i].queries) {
            best = std::min(best, out[j].mean);
            ++j;
        }
        for (std::size_t k = i; k < j; ++k) out[k].best = out[k].mean == best;
        i = j;
    }
    for (auto& s : out) {
        s.mean = std::min(s.mean, cap);
        s.ci_low = std::min(s.ci_low, cap);
        s.ci_high = std::min(s.ci_high, cap);
    }
    return out;
}

std::string detail_csv(const std::vector<DetailRow>& rows) {
    std::ostringstream os;
    os << kDetailHeader << '\n';
    for (const auto& r : rows)
        os << r.case_name << ',' << r.model << ',' << r.strategy << ',' << r.rep << ',' << r.queries << ','
           << format_shortest(r.error) << '\n';
    return os.str();
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
    std::ostringstream os;
    os << kSummaryHeader << '\n';
    for (const auto& s : rows)
        os << s.case_name << ',' << s.queries << ',' << s.strategy << ',' << format_shortest(s.mean) << ','
           << format_shortest(s.ci_low) << ',' << format_shortest(s.ci_high) << ',' << s.n_reps << ','
           << (s.best ? "true" : "false") << '\n';
    return os.str();
}

void write_detail_csv(const std::filesystem::path& path, const std::vector<DetailRow>& rows) {
    write_text(path, detail_csv(rows));
}

void write_summary_csv(const std::filesystem::path& path, const std::vector<SummaryRow>& rows) {
    write_text(path, summary_csv(rows));
}

std::vector<DetailRow> read_detail_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open detail file '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line) || split_csv_line(line) != split_csv_line(kDetailHeader))
        throw ValidationError("'" + path.string() + "' does not start with the detail header");
    std::vector<DetailRow> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto cells = split_csv_line(line);
        const std::string where = path.string() + ":" + std::to_string(lineno);
        if (cells.size() != 6) throw ValidationError(where + ": expected 6 columns");
        DetailRow r;
        r.case_name = cells[0];
        r.model = cells[1];
        r.strategy = cells[2];
        r.rep = static_cast<int>(parse_real(cells[3], where));
        r.queries = static_cast<int>(parse_real(cells[4], where));
        r.error = parse_real(cells[5], where);
        rows.push_back(std::move(r));
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const DetailRow& a, const DetailRow& b) { return detail_key(a) < detail_key(b); });
    return rows;
}

std::vector<SummaryRow> write_report(const std::vector<ErrorCurve>& curves, const std::vector<int>& query_marks,
                                     const std::filesystem::path& dir, double cap) {
    const auto rows = detail_rows(curves);
    auto summary = summarize(rows, query_marks, cap);
    write_detail_csv(dir / "detail.csv", rows);
    write_summary_csv(dir / "summary.csv", summary);
    return summary;
}

} // namespace sal
