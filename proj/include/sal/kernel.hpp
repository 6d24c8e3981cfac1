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
#include <string>
#include <utility>
#include <vector>

#include "sal/types.hpp"

namespace sal {

enum class KernelKind { rbf, matern52, cubic };

std::string to_string(KernelKind kind);
KernelKind parse_kernel_kind(const std::string& token);

/// Covariance function and its hyperparameters.
///
/// rbf and matern52 use an isotropic length scale; cubic uses sigma0 only.
struct KernelConfig {
    KernelKind kind = KernelKind::matern52;
    double length_scale = 0.1;
    double sigma0 = 1.0;
    std::pair<double, double> length_scale_bounds{1e-5, 1e5};
    std::pair<double, double> sigma0_bounds{1e-5, 1e5};

    /// Throws ValidationError if a value or bound is out of range.
    void validate() const;

    /// Number of optimized hyperparameters (always 1 for the supported kernels).
    int n_hyper() const noexcept { return 1; }

    /// Hyperparameters in log space, in optimizer order.
    Vector log_hyper() const;
    void set_log_hyper(const Vector& theta);
    std::pair<Vector, Vector> log_hyper_bounds() const;
};

namespace kernel_detail {

inline double matern52_of_r(double r) {
    const double s5r = std::sqrt(5.0) * r;
    return (1.0 + s5r + 5.0 / 3.0 * r * r) * std::exp(-s5r);
}

// d k / d log(l) expressed through the scaled distance r = d / l.
inline double matern52_dlogl(double r) {
    const double s5r = std::sqrt(5.0) * r;
    return 5.0 / 3.0 * r * r * (1.0 + s5r) * std::exp(-s5r);
}

} // namespace kernel_detail

/// k(xi, xj) for the configured kernel.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar kernel_eval(const KernelConfig& config, const Eigen::MatrixBase<DerivedA>& xi,
                                      const Eigen::MatrixBase<DerivedB>& xj) {
    using Scalar = typename DerivedA::Scalar;
    if (xi.size() != xj.size()) throw ValidationError("kernel_eval: vector lengths differ");
    switch (config.kind) {
    case KernelKind::rbf: {
        if (!(config.length_scale > 0)) throw ValidationError("kernel length_scale must be > 0");
        const Scalar d2 = (xi - xj).squaredNorm() / (config.length_scale * config.length_scale);
        return std::exp(Scalar(-0.5) * d2);
    }
    case KernelKind::matern52: {
        if (!(config.length_scale > 0)) throw ValidationError("kernel length_scale must be > 0");
        const Scalar r = (xi - xj).norm() / config.length_scale;
        return kernel_detail::matern52_of_r(r);
    }
    case KernelKind::cubic: {
        const Scalar base = config.sigma0 * config.sigma0 + xi.dot(xj);
        return base * base * base;
    }
    }
    return Scalar(0);
}

/// Cross-covariance matrix K(a_i, b_j); rows of `a` and `b` are points.
Matrix cross_kernel(const KernelConfig& config, const Eigen::Ref<const PointMatrix>& a,
                    const Eigen::Ref<const PointMatrix>& b);

/// Symmetric Gram matrix of the rows of `x` (no jitter).
Matrix gram(const KernelConfig& config, const Eigen::Ref<const PointMatrix>& x);

/// Gram matrix together with dK/d(log hyperparameter) for each optimized hyperparameter.
std::pair<Matrix, std::vector<Matrix>> gram_with_gradients(const KernelConfig& config,
                                                           const Eigen::Ref<const PointMatrix>& x);

} // namespace sal
