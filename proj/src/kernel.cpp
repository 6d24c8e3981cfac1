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

#include "sal/kernel.hpp"

namespace sal {

std::string to_string(KernelKind kind) {
    switch (kind) {
    case KernelKind::rbf: return "rbf";
    case KernelKind::matern52: return "matern52";
    case KernelKind::cubic: return "cubic";
    }
    return "?";
}

KernelKind parse_kernel_kind(const std::string& token) {
    if (token == "rbf") return KernelKind::rbf;
    if (token == "matern52") return KernelKind::matern52;
    if (token == "cubic") return KernelKind::cubic;
    throw ValidationError("unknown kernel '" + token + "' (expected rbf, matern52 or cubic)");
}

void KernelConfig::validate() const {
    auto check_bounds = [](const std::pair<double, double>& b, const char* what) {
        if (!(b.first > 0 && b.first < b.second && std::isfinite(b.second)))
            throw ValidationError(std::string(what) + " bounds must be positive and ordered");
    };
    check_bounds(length_scale_bounds, "length_scale");
    check_bounds(sigma0_bounds, "sigma0");
    if (!(length_scale > 0)) throw ValidationError("kernel length_scale must be > 0");
    if (length_scale < length_scale_bounds.first || length_scale > length_scale_bounds.second)
        throw ValidationError("kernel length_scale outside its bounds");
    if (kind == KernelKind::cubic) {
        if (!(sigma0 >= 0)) throw ValidationError("kernel sigma0 must be >= 0");
        if (sigma0 < sigma0_bounds.first || sigma0 > sigma0_bounds.second)
            throw ValidationError("kernel sigma0 outside its bounds");
    }
}

Vector KernelConfig::log_hyper() const {
    Vector t(1);
    t(0) = std::log(kind == KernelKind::cubic ? sigma0 : length_scale);
    return t;
}

void KernelConfig::set_log_hyper(const Vector& theta) {
    if (kind == KernelKind::cubic)
        sigma0 = std::exp(theta(0));
    else
        length_scale = std::exp(theta(0));
}

std::pair<Vector, Vector> KernelConfig::log_hyper_bounds() const {
    const auto& b = kind == KernelKind::cubic ? sigma0_bounds : length_scale_bounds;
    Vector lo(1), hi(1);
    lo(0) = std::log(b.first);
    hi(0) = std::log(b.second);
    return {lo, hi};
}

Matrix cross_kernel(const KernelConfig& config, const Eigen::Ref<const PointMatrix>& a,
                    const Eigen::Ref<const PointMatrix>& b) {
    if (a.cols() != b.cols()) throw ValidationError("cross_kernel: dimension mismatch");
    Matrix K(a.rows(), b.rows());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < b.rows(); ++j) K(i, j) = kernel_eval(config, a.row(i), b.row(j));
    return K;
}

Matrix gram(const KernelConfig& config, const Eigen::Ref<const PointMatrix>& x) {
    const Index n = x.rows();
    Matrix K(n, n);
    for (Index i = 0; i < n; ++i) {
        K(i, i) = kernel_eval(config, x.row(i), x.row(i));
        for (Index j = 0; j < i; ++j) {
            const double v = kernel_eval(config, x.row(i), x.row(j));
            K(i, j) = v;
            K(j, i) = v;
        }
    }
    return K;
}

std::pair<Matrix, std::vector<Matrix>> gram_with_gradients(const KernelConfig& config,
                                                           const Eigen::Ref<const PointMatrix>& x) {
    const Index n = x.rows();
    Matrix K(n, n);
    Matrix dK(n, n);
    const double l = config.length_scale;
    const double s2 = config.sigma0 * config.sigma0;
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j <= i; ++j) {
            double k = 0.0;
            double g = 0.0;
            switch (config.kind) {
            case KernelKind::rbf: {
                const double d2 = (x.row(i) - x.row(j)).squaredNorm() / (l * l);
                k = std::exp(-0.5 * d2);
                g = k * d2;
                break;
            }
            case KernelKind::matern52: {
                const double r = (x.row(i) - x.row(j)).norm() / l;
                k = kernel_detail::matern52_of_r(r);
                g = kernel_detail::matern52_dlogl(r);
                break;
            }
            case KernelKind::cubic: {
                const double base = s2 + x.row(i).dot(x.row(j));
                k = base * base * base;
                g = 6.0 * s2 * base * base;
                break;
            }
            }
            K(i, j) = K(j, i) = k;
            dK(i, j) = dK(j, i) = g;
        }
    }
    return {std::move(K), std::vector<Matrix>{std::move(dK)}};
}

} // namespace sal
