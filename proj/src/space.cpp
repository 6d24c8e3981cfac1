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

#include "sal/space.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>

#include "sal/rng.hpp"

namespace sal {

ParameterSpace::ParameterSpace(std::vector<DimensionSpec> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw ValidationError("parameter space needs at least one dimension");
    std::set<std::string> seen;
    for (const auto& d : dims_) {
        if (!seen.insert(d.name).second) throw ValidationError("duplicate dimension name '" + d.name + "'");
        if (!(std::isfinite(d.lower) && std::isfinite(d.upper)) || !(d.lower < d.upper))
            throw ValidationError("dimension '" + d.name + "': lower must be < upper");
        if (d.scale == Scale::log10 && !(d.lower > 0.0))
            throw ValidationError("dimension '" + d.name + "': log10 scale requires lower > 0");
    }
}

std::vector<std::string> ParameterSpace::names() const {
    std::vector<std::string> out;
    out.reserve(dims_.size());
    for (const auto& d : dims_) out.push_back(d.name);
    return out;
}

namespace detail {

void check_coords(const ParameterSpace& space, Index length) {
    if (length != space.size()) {
        std::ostringstream os;
        os << "dimension mismatch: got " << length << " coordinates, space has " << space.size();
        throw ValidationError(os.str());
    }
}

void throw_out_of_bounds(const ParameterSpace& space, Index dim, double value, MapDirection dir) {
    std::ostringstream os;
    os.precision(17);
    const auto& d = space[dim];
    os << "coordinate " << value << " out of bounds for dimension '" << d.name << "' ";
    if (dir == MapDirection::to_unit)
        os << "[" << d.lower << ", " << d.upper << "]";
    else
        os << "[0, 1]";
    throw ValidationError(os.str());
}

} // namespace detail

PoolSpec default_pool_spec(Index n_features, std::uint64_t seed) {
    if (n_features <= 2) return GridSpec{41};
    if (n_features <= 4) return GridSpec{11};
    return QuasirandomSpec{4096, seed};
}

CandidatePool::CandidatePool(PointMatrix unit, PointMatrix raw, PoolSource source)
    : unit_(std::move(unit)), raw_(std::move(raw)), source_(source),
      state_(static_cast<std::size_t>(unit_.rows()), State::free) {
    if (unit_.rows() != raw_.rows() || unit_.cols() != raw_.cols())
        throw ValidationError("pool unit/raw shapes differ");
    if (unit_.rows() == 0) throw ValidationError("pool is empty");
}

DesignPoint CandidatePool::point(Index i) const {
    return {unit_.row(i).transpose(), raw_.row(i).transpose()};
}

void CandidatePool::mark_labeled(Index i) {
    if (i < 0 || i >= size()) throw ValidationError("pool index out of range");
    auto& s = state_[static_cast<std::size_t>(i)];
    if (s != State::free) throw ValidationError("pool index " + std::to_string(i) + " is not available");
    s = State::labeled;
    labeled_order_.push_back(i);
}

void CandidatePool::exclude(Index i) {
    if (i < 0 || i >= size()) throw ValidationError("pool index out of range");
    auto& s = state_[static_cast<std::size_t>(i)];
    if (s != State::free) throw ValidationError("pool index " + std::to_string(i) + " is not available");
    s = State::excluded;
    ++n_excluded_;
}

namespace {

constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                           59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113};

double radical_inverse(std::uint64_t i, int base) {
    double inv = 1.0 / base;
    double f = inv;
    double r = 0.0;
    while (i > 0) {
        r += f * static_cast<double>(i % static_cast<std::uint64_t>(base));
        i /= static_cast<std::uint64_t>(base);
        f *= inv;
    }
    return r;
}

PointMatrix unit_to_raw(const ParameterSpace& space, const PointMatrix& unit) {
    PointMatrix raw(unit.rows(), unit.cols());
    for (Index r = 0; r < unit.rows(); ++r)
        raw.row(r) = map_point(space, unit.row(r).transpose(), MapDirection::to_raw).transpose();
    return raw;
}

} // namespace

PointMatrix halton_points(Index n, Index dim, std::uint64_t seed) {
    if (dim > static_cast<Index>(std::size(kPrimes)))
        throw ValidationError("quasirandom pools support at most 30 dimensions");
    Rng rng(mix_seed(seed));
    Vector shift(dim);
    for (Index d = 0; d < dim; ++d) shift(d) = seed == 0 ? 0.0 : rng.uniform();
    PointMatrix pts(n, dim);
    // Index 0 of the sequence is the origin; start at 1.
    for (Index i = 0; i < n; ++i)
        for (Index d = 0; d < dim; ++d) {
            double v = radical_inverse(static_cast<std::uint64_t>(i + 1), kPrimes[d]) + shift(d);
            pts(i, d) = v >= 1.0 ? v - 1.0 : v;
        }
    return pts;
}

CandidatePool build_pool(const ParameterSpace& space, const PoolSpec& spec) {
    const Index nf = space.size();
    if (nf < 1) throw ValidationError("parameter space is empty");

    if (const auto* grid = std::get_if<GridSpec>(&spec)) {
        const int m = grid->points_per_dim;
        if (m < 2) throw ValidationError("points_per_dim must be >= 2");
        double total = std::pow(static_cast<double>(m), static_cast<double>(nf));
        if (total > 1e6) throw ValidationError("grid pool would exceed 10^6 points");
        const Index n = static_cast<Index>(std::llround(total));
        PointMatrix unit(n, nf);
        // Row-major over dimensions: the last dimension varies fastest.
        for (Index r = 0; r < n; ++r) {
            Index rem = r;
            for (Index d = nf - 1; d >= 0; --d) {
                const Index k = rem % m;
                rem /= m;
                unit(r, d) = static_cast<double>(k) / static_cast<double>(m - 1);
            }
        }
        return CandidatePool(unit, unit_to_raw(space, unit), PoolSource::grid);
    }

    const auto& qr = std::get<QuasirandomSpec>(spec);
    if (qr.size < 1) throw ValidationError("quasirandom_size must be >= 1");
    PointMatrix unit = halton_points(qr.size, nf, qr.seed);
    return CandidatePool(unit, unit_to_raw(space, unit), PoolSource::quasirandom);
}

std::vector<Index> initial_design(const CandidatePool& pool, Index n0) {
    if (!pool.labeled().empty()) throw ValidationError("initial_design requires a pool without labels");
    if (n0 < 1 || n0 > pool.size()) throw ValidationError("n0 must lie in [1, pool size]");

    const PointMatrix& X = pool.unit_points();
    const Index n = X.rows();
    const Eigen::RowVectorXd centroid = Eigen::RowVectorXd::Constant(X.cols(), 0.5);

    std::vector<Index> order;
    order.reserve(static_cast<std::size_t>(n0));
    std::vector<bool> taken(static_cast<std::size_t>(n), false);

    // Distances within kTieTol count as equal so that symmetric grid points,
    // whose coordinates differ only by round-off, resolve to the lowest index.
    constexpr double kTieTol = 1e-12;
    Index first = 0;
    double best = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < n; ++i) {
        const double d = (X.row(i) - centroid).squaredNorm();
        if (d < best - kTieTol) {
            best = d;
            first = i;
        }
    }
    order.push_back(first);
    taken[static_cast<std::size_t>(first)] = true;

    Vector min_dist(n);
    for (Index i = 0; i < n; ++i) min_dist(i) = (X.row(i) - X.row(first)).norm();

    while (static_cast<Index>(order.size()) < n0) {
        Index pick = -1;
        double score = -1.0;
        for (Index i = 0; i < n; ++i) {
            if (taken[static_cast<std::size_t>(i)]) continue;
            if (min_dist(i) > score + kTieTol) {
                score = min_dist(i);
                pick = i;
            }
        }
        order.push_back(pick);
        taken[static_cast<std::size_t>(pick)] = true;
        for (Index i = 0; i < n; ++i) min_dist(i) = std::min(min_dist(i), (X.row(i) - X.row(pick)).norm());
    }
    return order;
}

int default_initial_count(InitialCountRule rule, int n_features) {
    switch (rule.kind) {
    case InitialCountRule::Kind::four_nf: return 4 * n_features;
    case InitialCountRule::Kind::two_nf: return 2 * n_features;
    case InitialCountRule::Kind::fixed: return rule.k;
    }
    return rule.k;
}

} // namespace sal
