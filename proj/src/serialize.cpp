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

#include "sal/serialize.hpp"

namespace sal {

namespace {

template <typename M>
Json dense_to_json(const M& m) {
    Json data = Json::array();
    for (Index r = 0; r < m.rows(); ++r)
        for (Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Json rows_to_json(const PointMatrix& m) {
    Json out = Json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        out.push_back(std::move(row));
    }
    return out;
}

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ValidationError(std::string("missing field '") + key + "'");
    return j.at(key);
}

} // namespace

Json to_json(const Vector& v) {
    Json out = Json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

Json to_json(const Matrix& m) { return dense_to_json(m); }
Json to_json(const PointMatrix& m) { return dense_to_json(m); }

Vector vector_from_json(const Json& j) {
    if (!j.is_array()) throw ValidationError("expected an array of numbers");
    Vector v(static_cast<Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = j[i].get<double>();
    return v;
}

Matrix matrix_from_json(const Json& j) {
    const auto rows = field(j, "rows").get<Index>();
    const auto cols = field(j, "cols").get<Index>();
    const Json& data = field(j, "data");
    if (rows < 0 || cols < 0 || data.size() != static_cast<std::size_t>(rows * cols))
        throw ValidationError("matrix payload has inconsistent shape");
    Matrix m(rows, cols);
    std::size_t k = 0;
    for (Index r = 0; r < rows; ++r)
        for (Index c = 0; c < cols; ++c) m(r, c) = data[k++].get<double>();
    return m;
}

Json to_json(const KernelConfig& k) {
    return {{"kind", to_string(k.kind)},
            {"length_scale", k.length_scale},
            {"sigma0", k.sigma0},
            {"length_scale_bounds", {k.length_scale_bounds.first, k.length_scale_bounds.second}},
            {"sigma0_bounds", {k.sigma0_bounds.first, k.sigma0_bounds.second}}};
}

KernelConfig kernel_from_json(const Json& j) {
    KernelConfig k;
    k.kind = parse_kernel_kind(field(j, "kind").get<std::string>());
    k.length_scale = field(j, "length_scale").get<double>();
    k.sigma0 = field(j, "sigma0").get<double>();
    const Json& lb = field(j, "length_scale_bounds");
    const Json& sb = field(j, "sigma0_bounds");
    k.length_scale_bounds = {lb.at(0).get<double>(), lb.at(1).get<double>()};
    k.sigma0_bounds = {sb.at(0).get<double>(), sb.at(1).get<double>()};
    k.validate();
    return k;
}

Json to_json(const Model& model) {
    Json out{{"kind", to_string(model.kind())}, {"n_features", model.n_features()},
             {"num_parameters", model.num_parameters()}};
    Json state;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, LinearModel>) {
                state = {{"coefficients", to_json(s.coefficients)}, {"intercept", s.intercept}};
            } else if constexpr (std::is_same_v<T, GpModel>) {
                state = {{"kernel", to_json(s.kernel)},
                         {"inputs", to_json(s.inputs)},
                         {"factor", to_json(s.factor)},
                         {"weights", to_json(s.weights)},
                         {"jitter", s.jitter},
                         {"log_marginal_likelihood", s.log_marginal_likelihood},
                         {"y_mean", s.y_mean},
                         {"y_scale", s.y_scale}};
            } else if constexpr (std::is_same_v<T, ForestModel>) {
                Json trees = Json::array();
                for (const auto& t : s.trees) {
                    Json feature = Json::array(), threshold = Json::array(), left = Json::array(),
                         right = Json::array(), value = Json::array(), n = Json::array();
                    for (const auto& node : t.nodes) {
                        feature.push_back(node.feature);
                        threshold.push_back(node.threshold);
                        left.push_back(node.left);
                        right.push_back(node.right);
                        value.push_back(node.value);
                        n.push_back(node.n_samples);
                    }
                    trees.push_back({{"feature", feature},
                                     {"threshold", threshold},
                                     {"left", left},
                                     {"right", right},
                                     {"value", value},
                                     {"n_samples", n}});
                }
                state = {{"trees", std::move(trees)}};
            } else if constexpr (std::is_same_v<T, SvrModel>) {
                state = {{"support_vectors", to_json(s.support_vectors)},
                         {"coefficients", to_json(s.coefficients)},
                         {"intercept", s.intercept},
                         {"gamma", s.gamma},
                         {"y_mean", s.y_mean},
                         {"y_scale", s.y_scale}};
            } else {
                state = {{"hidden_weights", to_json(s.hidden_weights)},
                         {"hidden_bias", to_json(s.hidden_bias)},
                         {"output_weights", to_json(s.output_weights)},
                         {"output_bias", s.output_bias},
                         {"y_mean", s.y_mean},
                         {"y_scale", s.y_scale}};
            }
        },
        model.state());
    out["state"] = std::move(state);
    return out;
}

Model model_from_json(const Json& j) {
    const ModelKind kind = parse_model_kind(field(j, "kind").get<std::string>());
    const auto nf = field(j, "n_features").get<Index>();
    const Json& s = field(j, "state");
    switch (kind) {
    case ModelKind::linear:
        return Model(LinearModel{vector_from_json(field(s, "coefficients")), field(s, "intercept").get<double>()}, nf);
    case ModelKind::gp: {
        GpModel m;
        m.kernel = kernel_from_json(field(s, "kernel"));
        m.inputs = matrix_from_json(field(s, "inputs"));
        m.factor = matrix_from_json(field(s, "factor"));
        m.weights = vector_from_json(field(s, "weights"));
        m.jitter = field(s, "jitter").get<double>();
        m.log_marginal_likelihood = field(s, "log_marginal_likelihood").get<double>();
        m.y_mean = field(s, "y_mean").get<double>();
        m.y_scale = field(s, "y_scale").get<double>();
        return Model(std::move(m), nf);
    }
    case ModelKind::forest: {
        ForestModel m;
        for (const Json& t : field(s, "trees")) {
            RegressionTree tree;
            const Json& feature = field(t, "feature");
            for (std::size_t i = 0; i < feature.size(); ++i) {
                TreeNode node;
                node.feature = feature[i].get<int>();
                node.threshold = field(t, "threshold").at(i).get<double>();
                node.left = field(t, "left").at(i).get<int>();
                node.right = field(t, "right").at(i).get<int>();
                node.value = field(t, "value").at(i).get<double>();
                node.n_samples = field(t, "n_samples").at(i).get<int>();
                tree.nodes.push_back(node);
            }
            m.trees.push_back(std::move(tree));
        }
        return Model(std::move(m), nf);
    }
    case ModelKind::svr: {
        SvrModel m;
        m.support_vectors = matrix_from_json(field(s, "support_vectors"));
        m.coefficients = vector_from_json(field(s, "coefficients"));
        m.intercept = field(s, "intercept").get<double>();
        m.gamma = field(s, "gamma").get<double>();
        m.y_mean = field(s, "y_mean").get<double>();
        m.y_scale = field(s, "y_scale").get<double>();
        return Model(std::move(m), nf);
    }
    case ModelKind::mlp: {
        MlpModel m;
        m.hidden_weights = matrix_from_json(field(s, "hidden_weights"));
        m.hidden_bias = vector_from_json(field(s, "hidden_bias"));
        m.output_weights = vector_from_json(field(s, "output_weights"));
        m.output_bias = field(s, "output_bias").get<double>();
        m.y_mean = field(s, "y_mean").get<double>();
        m.y_scale = field(s, "y_scale").get<double>();
        return Model(std::move(m), nf);
    }
    }
    throw ValidationError("unknown model kind");
}

Json to_json(const RunTrace& trace, const CandidatePool& pool) {
    PointMatrix unit(static_cast<Index>(trace.queried_indices.size()), pool.dim());
    PointMatrix raw(unit.rows(), pool.dim());
    for (std::size_t k = 0; k < trace.queried_indices.size(); ++k) {
        unit.row(static_cast<Index>(k)) = pool.unit_points().row(trace.queried_indices[k]);
        raw.row(static_cast<Index>(k)) = pool.raw_points().row(trace.queried_indices[k]);
    }
    Json failures = Json::array();
    for (const auto& f : trace.failures) failures.push_back({{"index", f.index}, {"cause", f.cause}});
    Json out{{"seed", trace.seed},
             {"n0", trace.n0},
             {"queried_indices", trace.queried_indices},
             {"unit_points", rows_to_json(unit)},
             {"raw_points", rows_to_json(raw)},
             {"responses", to_json(trace.responses)},
             {"per_step_error", trace.per_step_error},
             {"failures", std::move(failures)}};
    out["model"] = trace.final_model ? to_json(*trace.final_model) : Json(nullptr);
    return out;
}

RunTrace trace_from_json(const Json& j) {
    RunTrace t;
    t.seed = field(j, "seed").get<std::uint64_t>();
    t.n0 = field(j, "n0").get<Index>();
    t.queried_indices = field(j, "queried_indices").get<std::vector<Index>>();
    t.responses = vector_from_json(field(j, "responses"));
    t.per_step_error = field(j, "per_step_error").get<std::vector<double>>();
    for (const Json& f : field(j, "failures"))
        t.failures.push_back({field(f, "index").get<Index>(), field(f, "cause").get<std::string>()});
    if (!field(j, "model").is_null()) t.final_model = model_from_json(j.at("model"));
    return t;
}

} // namespace sal
