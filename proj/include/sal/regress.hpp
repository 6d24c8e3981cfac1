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

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Cholesky>

#include "sal/kernel.hpp"
#include "sal/optim.hpp"
#include "sal/types.hpp"

namespace sal {

enum class ModelKind { linear, gp, forest, svr, mlp };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& token);

/// Inputs in unit coordinates plus responses and their summary statistics.
struct TrainingSet {
    PointMatrix inputs;
    Vector responses;
    double response_mean = 0.0;
    double response_std = 0.0;  // population std (ddof = 0)

    /// Validates shape, non-emptiness and distinct rows, then fills the statistics.
    static TrainingSet make(PointMatrix inputs, Vector responses);

    Index size() const noexcept { return inputs.rows(); }
    Index n_features() const noexcept { return inputs.cols(); }

    /// std used for standardization; 1 when all responses are equal.
    double scale() const noexcept { return response_std > 0 ? response_std : 1.0; }
    Vector standardized() const { return (responses.array() - response_mean) / scale(); }
};

struct GpOptions {
    double jitter_start = 1e-12;
    double jitter_max = 1e-6;
    bool optimize = true;
    BoundedMinimizerOptions optimizer{};
};

struct ForestOptions {
    int n_trees = 10;
    int min_samples_split = 2;
};

struct SvrOptions {
    double C = 1.0;
    double epsilon = 0.1;
    double gamma = 0.0;  // <= 0 selects 1 / (N_f * var(inputs))
    double tolerance = 1e-3;
    long max_iterations = 1000000;
};

struct MlpOptions {
    int hidden = 10;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_epsilon = 1e-8;
    double l2 = 1e-4;
    int epochs = 200;
};

struct FitConfig {
    KernelConfig kernel{};
    GpOptions gp{};
    ForestOptions forest{};
    SvrOptions svr{};
    MlpOptions mlp{};
};

// ---------------------------------------------------------------------------
// Fitted model states

struct LinearModel {
    Vector coefficients;
    double intercept = 0.0;
};

struct GpModel {
    KernelConfig kernel;
    PointMatrix inputs;
    Matrix factor;  // lower Cholesky factor of K + jitter * I
    Vector weights;  // (K + jitter * I)^{-1} standardized responses
    double jitter = 0.0;
    double log_marginal_likelihood = 0.0;
    double y_mean = 0.0;
    double y_scale = 1.0;
};

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;
    int n_samples = 0;
};

struct RegressionTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    double predict(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
    int leaf_count() const;
};

struct ForestModel {
    std::vector<RegressionTree> trees;
};

struct SvrModel {
    PointMatrix support_vectors;
    Vector coefficients;  // alpha_i - alpha_i^*
    double intercept = 0.0;
    double gamma = 1.0;
    double y_mean = 0.0;
    double y_scale = 1.0;
};

struct MlpModel {
    Matrix hidden_weights;  // hidden x N_f
    Vector hidden_bias;
    Vector output_weights;
    double output_bias = 0.0;
    double y_mean = 0.0;
    double y_scale = 1.0;
};

/// Fitted regressor of one of the five kinds. Immutable once built.
class Model {
public:
    using State = std::variant<LinearModel, GpModel, ForestModel, SvrModel, MlpModel>;

    Model(State state, Index n_features) : state_(std::move(state)), n_features_(n_features) {}

    ModelKind kind() const noexcept { return static_cast<ModelKind>(state_.index()); }
    Index n_features() const noexcept { return n_features_; }
    const State& state() const noexcept { return state_; }

    bool supports_std() const noexcept { return kind() == ModelKind::gp; }

    /// Predictive mean in response units; rows of `x` are unit-coordinate points.
    Vector predict(const Eigen::Ref<const PointMatrix>& x) const;

    /// GP predictive standard deviation in response units.
    Vector predict_std(const Eigen::Ref<const PointMatrix>& x) const;

    /// GP predictive standard deviation on the standardized response scale.
    Vector predict_std_standardized(const Eigen::Ref<const PointMatrix>& x) const;

    int num_parameters() const;

private:
    void check_dims(const Eigen::Ref<const PointMatrix>& x) const;

    State state_;
    Index n_features_;
};

Model fit(ModelKind kind, const TrainingSet& ts, const FitConfig& config, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Per-kind entry points; `fit` dispatches to these.

LinearModel fit_linear(const TrainingSet& ts);
GpModel fit_gp(const TrainingSet& ts, const KernelConfig& kernel, const GpOptions& options);
ForestModel fit_forest(const TrainingSet& ts, const ForestOptions& options, std::uint64_t seed);
SvrModel fit_svr(const TrainingSet& ts, const SvrOptions& options);
MlpModel fit_mlp(const TrainingSet& ts, const MlpOptions& options, std::uint64_t seed);

/// Log marginal likelihood of standardized responses under a zero-mean GP with
/// fixed jitter, with its gradient w.r.t. the log hyperparameters.
struct LmlValue {
    double value = 0.0;
    Vector gradient;
};

LmlValue gp_log_marginal_likelihood(const KernelConfig& kernel, const Eigen::Ref<const PointMatrix>& x,
                                    const Vector& y, double jitter);

/// Cholesky of K + jitter*I, escalating jitter x10 from `start` to `max`.
/// Returns the factor and the jitter that succeeded; throws NumericalError otherwise.
std::pair<Eigen::LLT<Matrix>, double> factor_with_jitter(const Matrix& K, double start, double max);

} // namespace sal
