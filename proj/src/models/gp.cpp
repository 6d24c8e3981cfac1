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

#include <cmath>
#include <limits>
#include <numbers>

#include "sal/regress.hpp"

namespace sal {

std::pair<Eigen::LLT<Matrix>, double> factor_with_jitter(const Matrix& K, double start, double max) {
    const Index n = K.rows();
    for (double jitter = start; jitter <= max * (1.0 + 1e-9); jitter *= 10.0) {
        Matrix Kj = K;
        Kj.diagonal().array() += jitter;
        Eigen::LLT<Matrix> llt(Kj);
        if (llt.info() == Eigen::Success && llt.matrixLLT().diagonal().minCoeff() > 0) return {std::move(llt), jitter};
    }
    throw NumericalError("kernel matrix of size " + std::to_string(n) +
                         " is not positive definite even with maximal jitter");
}

namespace {

LmlValue lml_from_factor(const Eigen::LLT<Matrix>& llt, const std::vector<Matrix>& dK, const Vector& y) {
    const Index n = y.size();
    const Vector alpha = llt.solve(y);
    LmlValue out;
    out.value = -0.5 * y.dot(alpha) - llt.matrixLLT().diagonal().array().log().sum() -
                0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
    const Matrix Kinv = llt.solve(Matrix::Identity(n, n));
    out.gradient.resize(static_cast<Index>(dK.size()));
    for (std::size_t k = 0; k < dK.size(); ++k) {
        // 0.5 * tr((alpha alpha^T - K^{-1}) dK)
        const double quad = alpha.dot(dK[k] * alpha);
        const double trace = Kinv.cwiseProduct(dK[k]).sum();
        out.gradient(static_cast<Index>(k)) = 0.5 * (quad - trace);
    }
    return out;
}

} // namespace

LmlValue gp_log_marginal_likelihood(const KernelConfig& kernel, const Eigen::Ref<const PointMatrix>& x,
                                    const Vector& y, double jitter) {
    auto [K, dK] = gram_with_gradients(kernel, x);
    K.diagonal().array() += jitter;
    Eigen::LLT<Matrix> llt(K);
    if (llt.info() != Eigen::Success) throw NumericalError("kernel matrix is not positive definite");
    return lml_from_factor(llt, dK, y);
}

GpModel fit_gp(const TrainingSet& ts, const KernelConfig& kernel, const GpOptions& options) {
    kernel.validate();
    const Vector y = ts.standardized();
    KernelConfig cfg = kernel;

    if (options.optimize && ts.size() > 1) {
        // Jitter stays fixed while optimizing; hyperparameters whose Gram matrix
        // needs more are infeasible. Only a start point that already needs more
        // raises the fixed level.
        const double fixed_jitter =
            factor_with_jitter(gram(kernel, ts.inputs), options.jitter_start, options.jitter_max).second;
        auto objective = [&](const Vector& theta, Vector& grad) -> double {
            KernelConfig trial = kernel;
            trial.set_log_hyper(theta);
            auto [K, dK] = gram_with_gradients(trial, ts.inputs);
            K.diagonal().array() += fixed_jitter;
            Eigen::LLT<Matrix> llt(K);
            if (llt.info() != Eigen::Success || !(llt.matrixLLT().diagonal().minCoeff() > 0)) {
                grad = Vector::Zero(theta.size());
                return std::numeric_limits<double>::infinity();
            }
            const LmlValue v = lml_from_factor(llt, dK, y);
            grad = -v.gradient;
            return -v.value;
        };
        const auto [lo, hi] = cfg.log_hyper_bounds();
        const auto result = minimize_bounded(objective, cfg.log_hyper(), lo, hi, options.optimizer);
        cfg.set_log_hyper(result.x);
    }

    GpModel m;
    m.kernel = cfg;
    m.inputs = ts.inputs;
    m.y_mean = ts.response_mean;
    m.y_scale = ts.scale();

    auto [K, dK] = gram_with_gradients(cfg, ts.inputs);
    auto [llt, jitter] = factor_with_jitter(K, options.jitter_start, options.jitter_max);
    m.jitter = jitter;
    m.weights = llt.solve(y);
    m.log_marginal_likelihood = lml_from_factor(llt, dK, y).value;
    m.factor = llt.matrixL();
    return m;
}

} // namespace sal
