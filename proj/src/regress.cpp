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

#include "sal/regress.hpp"

#include <cmath>
#include <sstream>

namespace sal {

std::string to_string(ModelKind kind) {
    switch (kind) {
    case ModelKind::linear: return "linear";
    case ModelKind::gp: return "gp";
    case ModelKind::forest: return "forest";
    case ModelKind::svr: return "svr";
    case ModelKind::mlp: return "mlp";
    }
    return "?";
}

ModelKind parse_model_kind(const std::string& token) {
    if (token == "linear") return ModelKind::linear;
    if (token == "gp") return ModelKind::gp;
    if (token == "forest") return ModelKind::forest;
    if (token == "svr") return ModelKind::svr;
    if (token == "mlp") return ModelKind::mlp;
    throw ValidationError("unknown model kind '" + token + "' (expected linear, gp, forest, svr or mlp)");
}

TrainingSet TrainingSet::make(PointMatrix inputs, Vector responses) {
    if (inputs.rows() < 1) throw ValidationError("training set is empty");
    if (inputs.rows() != responses.size()) throw ValidationError("training inputs and responses differ in length");
    if (!inputs.allFinite() || !responses.allFinite()) throw ValidationError("training data contains non-finite values");
    for (Index i = 0; i < inputs.rows(); ++i)
        for (Index j = 0; j < i; ++j)
            if (inputs.row(i) == inputs.row(j)) {
                std::ostringstream os;
                os << "training set has duplicate input rows " << j << " and " << i;
                throw ValidationError(os.str());
            }
    TrainingSet ts;
    ts.inputs = std::move(inputs);
    ts.responses = std::move(responses);
    ts.response_mean = ts.responses.mean();
    ts.response_std = std::sqrt((ts.responses.array() - ts.response_mean).square().mean());
    return ts;
}

void Model::check_dims(const Eigen::Ref<const PointMatrix>& x) const {
    if (x.cols() != n_features_) {
        std::ostringstream os;
        os << "dimension mismatch: model has " << n_features_ << " features, query has " << x.cols();
        throw ValidationError(os.str());
    }
}

namespace {

double relu(double v) { return v > 0 ? v : 0.0; }

struct Predictor {
    const Eigen::Ref<const PointMatrix>& x;

    Vector operator()(const LinearModel& m) const {
        return (x * m.coefficients).array() + m.intercept;
    }
    Vector operator()(const GpModel& m) const {
        const Matrix Ks = cross_kernel(m.kernel, x, m.inputs);
        return (Ks * m.weights).array() * m.y_scale + m.y_mean;
    }
    Vector operator()(const ForestModel& m) const {
        Vector out = Vector::Zero(x.rows());
        for (Index r = 0; r < x.rows(); ++r) {
            double s = 0.0;
            for (const auto& t : m.trees) s += t.predict(x.row(r));
            out(r) = s / static_cast<double>(m.trees.size());
        }
        return out;
    }
    Vector operator()(const SvrModel& m) const {
        Vector out(x.rows());
        for (Index r = 0; r < x.rows(); ++r) {
            double s = m.intercept;
            for (Index i = 0; i < m.support_vectors.rows(); ++i)
                s += m.coefficients(i) * std::exp(-m.gamma * (m.support_vectors.row(i) - x.row(r)).squaredNorm());
            out(r) = s * m.y_scale + m.y_mean;
        }
        return out;
    }
    Vector operator()(const MlpModel& m) const {
        Vector out(x.rows());
        for (Index r = 0; r < x.rows(); ++r) {
            const Vector h = (m.hidden_weights * x.row(r).transpose() + m.hidden_bias).unaryExpr(&relu);
            out(r) = (h.dot(m.output_weights) + m.output_bias) * m.y_scale + m.y_mean;
        }
        return out;
    }
};

} // namespace

Vector Model::predict(const Eigen::Ref<const PointMatrix>& x) const {
    check_dims(x);
    return std::visit(Predictor{x}, state_);
}

Vector Model::predict_std_standardized(const Eigen::Ref<const PointMatrix>& x) const {
    check_dims(x);
    const auto* gp = std::get_if<GpModel>(&state_);
    if (!gp) throw UnsupportedCapability("predictive standard deviation requires a gp model, got " + to_string(kind()));
    const Matrix Ks = cross_kernel(gp->kernel, gp->inputs, x);  // N_t x N_q
    const Matrix V = gp->factor.triangularView<Eigen::Lower>().solve(Ks);
    Vector out(x.rows());
    for (Index r = 0; r < x.rows(); ++r) {
        const double prior = kernel_eval(gp->kernel, x.row(r), x.row(r));
        out(r) = std::sqrt(std::max(0.0, prior - V.col(r).squaredNorm()));
    }
    return out;
}

Vector Model::predict_std(const Eigen::Ref<const PointMatrix>& x) const {
    Vector s = predict_std_standardized(x);
    return s * std::get<GpModel>(state_).y_scale;
}

int Model::num_parameters() const {
    switch (kind()) {
    case ModelKind::linear: return static_cast<int>(n_features_) + 1;
    case ModelKind::gp: {
        const auto& m = std::get<GpModel>(state_);
        return static_cast<int>(m.inputs.rows()) + m.kernel.n_hyper();
    }
    case ModelKind::forest: {
        int leaves = 0;
        for (const auto& t : std::get<ForestModel>(state_).trees) leaves += t.leaf_count();
        return leaves;
    }
    case ModelKind::svr: return static_cast<int>(std::get<SvrModel>(state_).coefficients.size()) + 1;
    case ModelKind::mlp: {
        const auto& m = std::get<MlpModel>(state_);
        const auto weights = m.hidden_weights.size() + m.output_weights.size();
        const auto biases = m.hidden_bias.size() + 1;
        return static_cast<int>(weights + biases);
    }
    }
    return 0;
}

Model fit(ModelKind kind, const TrainingSet& ts, const FitConfig& config, std::uint64_t seed) {
    if (ts.size() < 1) throw ValidationError("training set is empty");
    switch (kind) {
    case ModelKind::linear: return Model(fit_linear(ts), ts.n_features());
    case ModelKind::gp: return Model(fit_gp(ts, config.kernel, config.gp), ts.n_features());
    case ModelKind::forest: return Model(fit_forest(ts, config.forest, seed), ts.n_features());
    case ModelKind::svr: return Model(fit_svr(ts, config.svr), ts.n_features());
    case ModelKind::mlp: return Model(fit_mlp(ts, config.mlp, seed), ts.n_features());
    }
    throw ValidationError("unknown model kind");
}

} // namespace sal
