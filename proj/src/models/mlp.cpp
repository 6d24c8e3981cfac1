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

#include "sal/regress.hpp"
#include "sal/rng.hpp"

namespace sal {

// One hidden ReLU layer, identity output, squared loss with an L2 penalty on
// the weights (not the biases), optimized full-batch by Adam on standardized
// responses. Initialization is uniform in +-sqrt(6 / (fan_in + fan_out)).
MlpModel fit_mlp(const TrainingSet& ts, const MlpOptions& opt, std::uint64_t seed) {
    if (opt.hidden < 1) throw ValidationError("mlp needs at least one hidden neuron");
    if (opt.epochs < 0) throw ValidationError("mlp epochs must be >= 0");
    const Index n = ts.size();
    const Index nf = ts.n_features();
    const Index h = opt.hidden;
    const double dn = static_cast<double>(n);

    Rng rng(mix_seed(seed));
    auto init = [&](Index rows, Index cols, Index fan_in, Index fan_out) {
        const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        Matrix w(rows, cols);
        for (Index c = 0; c < cols; ++c)
            for (Index r = 0; r < rows; ++r) w(r, c) = rng.uniform(-bound, bound);
        return w;
    };

    MlpModel m;
    m.y_mean = ts.response_mean;
    m.y_scale = ts.scale();
    m.hidden_weights = init(h, nf, nf, h);
    m.hidden_bias = init(h, 1, nf, h).col(0);
    m.output_weights = init(h, 1, h, 1).col(0);
    m.output_bias = init(1, 1, h, 1)(0, 0);

    const Matrix X = ts.inputs;  // n x nf
    const Vector y = ts.standardized();

    // Adam moments, one set per parameter block.
    Matrix mW1 = Matrix::Zero(h, nf), vW1 = Matrix::Zero(h, nf);
    Vector mb1 = Vector::Zero(h), vb1 = Vector::Zero(h);
    Vector mw2 = Vector::Zero(h), vw2 = Vector::Zero(h);
    double mb2 = 0.0, vb2 = 0.0;

    for (int epoch = 1; epoch <= opt.epochs; ++epoch) {
        // Forward.
        Matrix Z = X * m.hidden_weights.transpose();  // n x h
        Z.rowwise() += m.hidden_bias.transpose();
        const Matrix A = Z.cwiseMax(0.0);
        const Vector out = (A * m.output_weights).array() + m.output_bias;

        // Backward for L = 0.5/n * ||out - y||^2 + 0.5 * l2 / n * (||W1||^2 + ||w2||^2).
        const Vector delta = (out - y) / dn;
        const Vector gw2 = A.transpose() * delta + (opt.l2 / dn) * m.output_weights;
        const double gb2 = delta.sum();
        Matrix dZ = delta * m.output_weights.transpose();  // n x h
        dZ = dZ.cwiseProduct((Z.array() > 0.0).cast<double>().matrix());
        const Matrix gW1 = dZ.transpose() * X + (opt.l2 / dn) * m.hidden_weights;
        const Vector gb1 = dZ.colwise().sum().transpose();

        const double t = static_cast<double>(epoch);
        const double step = opt.learning_rate * std::sqrt(1.0 - std::pow(opt.beta2, t)) / (1.0 - std::pow(opt.beta1, t));
        auto adam = [&](auto& param, auto& mom, auto& vel, const auto& grad) {
            mom = opt.beta1 * mom + (1.0 - opt.beta1) * grad;
            vel = opt.beta2 * vel + (1.0 - opt.beta2) * grad.cwiseProduct(grad);
            param -= step * (mom.array() / (vel.array().sqrt() + opt.adam_epsilon)).matrix();
        };
        adam(m.hidden_weights, mW1, vW1, gW1);
        adam(m.hidden_bias, mb1, vb1, gb1);
        adam(m.output_weights, mw2, vw2, gw2);
        mb2 = opt.beta1 * mb2 + (1.0 - opt.beta1) * gb2;
        vb2 = opt.beta2 * vb2 + (1.0 - opt.beta2) * gb2 * gb2;
        m.output_bias -= step * mb2 / (std::sqrt(vb2) + opt.adam_epsilon);
    }
    return m;
}

} // namespace sal
