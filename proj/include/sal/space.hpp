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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "sal/types.hpp"

namespace sal {

enum class Scale { linear, log10 };

struct DimensionSpec {
    std::string name;
    double lower = 0.0;
    double upper = 1.0;
    Scale scale = Scale::linear;
};

/// Ordered, validated list of bounded input dimensions.
class ParameterSpace {
public:
    ParameterSpace() = default;
    explicit ParameterSpace(std::vector<DimensionSpec> dims);

    Index size() const noexcept { return static_cast<Index>(dims_.size()); }
    const std::vector<DimensionSpec>& dims() const noexcept { return dims_; }
    const DimensionSpec& operator[](Index i) const { return dims_[static_cast<std::size_t>(i)]; }

    std::vector<std::string> names() const;

private:
    std::vector<DimensionSpec> dims_;
};

enum class MapDirection { to_unit, to_raw };

namespace detail {
void check_coords(const ParameterSpace& space, Index length);
[[noreturn]] void throw_out_of_bounds(const ParameterSpace& space, Index dim, double value, MapDirection dir);
} // namespace detail

/// Maps a coordinate vector between physical units and the unit cube.
///
/// Linear dimensions map affinely; log10 dimensions map affinely in log10 space.
/// Inputs must lie inside the box of the source representation; a tolerance of a
/// few ulps absorbs round-off from a previous mapping.
template <typename Derived>
VectorX<typename Derived::Scalar> map_point(const ParameterSpace& space,
                                            const Eigen::MatrixBase<Derived>& coords,
                                            MapDirection direction) {
    using Scalar = typename Derived::Scalar;
    detail::check_coords(space, coords.size());
    VectorX<Scalar> out(coords.size());
    for (Index i = 0; i < coords.size(); ++i) {
        const DimensionSpec& d = space[i];
        const Scalar v = coords(i);
        const bool log = d.scale == Scale::log10;
        const Scalar lo = log ? std::log10(Scalar(d.lower)) : Scalar(d.lower);
        const Scalar hi = log ? std::log10(Scalar(d.upper)) : Scalar(d.upper);
        if (direction == MapDirection::to_unit) {
            const Scalar slack = Scalar(1e-12) * (std::abs(Scalar(d.lower)) + std::abs(Scalar(d.upper)));
            if (!(v >= Scalar(d.lower) - slack && v <= Scalar(d.upper) + slack))
                detail::throw_out_of_bounds(space, i, double(v), direction);
            const Scalar t = log ? std::log10(v) : v;
            out(i) = std::clamp((t - lo) / (hi - lo), Scalar(0), Scalar(1));
        } else {
            if (!(v >= Scalar(-1e-12) && v <= Scalar(1) + Scalar(1e-12)))
                detail::throw_out_of_bounds(space, i, double(v), direction);
            const Scalar u = std::clamp(v, Scalar(0), Scalar(1));
            const Scalar t = lo + u * (hi - lo);
            Scalar raw = log ? std::pow(Scalar(10), t) : t;
            // Endpoints are reproduced exactly so bounds checks downstream never trip.
            if (u == Scalar(0)) raw = Scalar(d.lower);
            if (u == Scalar(1)) raw = Scalar(d.upper);
            out(i) = raw;
        }
    }
    return out;
}

struct DesignPoint {
    Vector unit;
    Vector raw;
};

enum class PoolSource { grid, quasirandom };

struct GridSpec {
    int points_per_dim = 11;
};

struct QuasirandomSpec {
    int size = 4096;
    std::uint64_t seed = 0;
};

using PoolSpec = std::variant<GridSpec, QuasirandomSpec>;

/// Default pool resolution: 41 per dim up to 2-D, 11 per dim for 3-4-D,
/// a 4096-point quasirandom set beyond that.
PoolSpec default_pool_spec(Index n_features, std::uint64_t seed = 0);

/// Finite ordered set of candidate design points with labeling state.
///
/// Labels are append-only. Points consumed by a failed query are excluded
/// instead of labeled and are never offered again.
class CandidatePool {
public:
    CandidatePool(PointMatrix unit, PointMatrix raw, PoolSource source);

    Index size() const noexcept { return unit_.rows(); }
    Index dim() const noexcept { return unit_.cols(); }
    PoolSource source() const noexcept { return source_; }

    const PointMatrix& unit_points() const noexcept { return unit_; }
    const PointMatrix& raw_points() const noexcept { return raw_; }
    DesignPoint point(Index i) const;

    bool is_labeled(Index i) const { return state_.at(static_cast<std::size_t>(i)) == State::labeled; }
    bool is_excluded(Index i) const { return state_.at(static_cast<std::size_t>(i)) == State::excluded; }
    bool is_available(Index i) const { return state_.at(static_cast<std::size_t>(i)) == State::free; }

    /// Labeled indices in acquisition order.
    const std::vector<Index>& labeled() const noexcept { return labeled_order_; }
    Index available_count() const noexcept { return size() - static_cast<Index>(labeled_order_.size()) - n_excluded_; }

    void mark_labeled(Index i);
    void exclude(Index i);

private:
    enum class State : std::uint8_t { free, labeled, excluded };

    PointMatrix unit_;
    PointMatrix raw_;
    PoolSource source_;
    std::vector<State> state_;
    std::vector<Index> labeled_order_;
    Index n_excluded_ = 0;
};

CandidatePool build_pool(const ParameterSpace& space, const PoolSpec& spec);

/// First `n` points of a Halton sequence (bases = first primes), rotated by a
/// seeded Cranley-Patterson shift. Rows are points in [0,1)^dim.
PointMatrix halton_points(Index n, Index dim, std::uint64_t seed);

/// Centroid-nearest point followed by greedy max-min-distance picks in unit
/// coordinates. Ties go to the lowest index.
std::vector<Index> initial_design(const CandidatePool& pool, Index n0);

struct InitialCountRule {
    enum class Kind { four_nf, two_nf, fixed } kind = Kind::four_nf;
    int k = 0;

    static InitialCountRule four_nf() { return {Kind::four_nf, 0}; }
    static InitialCountRule two_nf() { return {Kind::two_nf, 0}; }
    static InitialCountRule fixed(int k) { return {Kind::fixed, k}; }
};

int default_initial_count(InitialCountRule rule, int n_features);

} // namespace sal
