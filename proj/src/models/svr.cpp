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

#include <algorithm>
#include <cmath>
#include <limits>

#include "sal/regress.hpp"

namespace sal {

namespace {

constexpr double kTau = 1e-12;

// SMO for the epsilon-insensitive dual in the 2l-variable form
//   min 0.5 a^T Q a + p^T a,  y^T a = 0,  0 <= a <= C,
// with a = [alpha; alpha*], y = [+1; -1], p = [eps - z; eps + z] and
// Q_ij = y_i y_j K(i mod l, j mod l). Working pairs use second-order selection.
class EpsilonSvrSolver {
public:
    EpsilonSvrSolver(const Matrix& K, const Vector& z, const SvrOptions& opt)
        : K_(K), l_(z.size()), C_(opt.C), eps_(opt.tolerance), max_iter_(opt.max_iterations) {
        const Index n = 2 * l_;
        alpha_ = Vector::Zero(n);
        y_.resize(n);
        G_.resize(n);
        for (Index i = 0; i < l_; ++i) {
            y_(i) = 1.0;
            y_(i + l_) = -1.0;
            G_(i) = opt.epsilon - z(i);
            G_(i + l_) = opt.epsilon + z(i);
        }
    }

    void solve() {
        for (long iter = 0; iter < max_iter_; ++iter) {
            Index i = -1, j = -1;
            if (!select_working_set(i, j)) return;
            update_pair(i, j);
        }
    }

    /// beta_i = alpha_i - alpha_i^*.
    Vector coefficients() const { return alpha_.head(l_) - alpha_.tail(l_); }

    /// Decision offset b (the model is sum beta_i K(x_i, x) + b).
    double intercept() const {
        Index n_free = 0;
        double ub = std::numeric_limits<double>::infinity();
        double lb = -ub;
        double sum_free = 0.0;
        for (Index t = 0; t < 2 * l_; ++t) {
            const double yG = y_(t) * G_(t);
            if (at_upper(t)) {
                if (y_(t) < 0) ub = std::min(ub, yG);
                else lb = std::max(lb, yG);
            } else if (at_lower(t)) {
                if (y_(t) > 0) ub = std::min(ub, yG);
                else lb = std::max(lb, yG);
            } else {
                ++n_free;
                sum_free += yG;
            }
        }
        const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : 0.5 * (ub + lb);
        return -rho;
    }

private:
    double q(Index a, Index b) const { return y_(a) * y_(b) * K_(a % l_, b % l_); }
    double qd(Index a) const { return K_(a % l_, a % l_); }
    bool at_upper(Index t) const { return alpha_(t) >= C_; }
    bool at_lower(Index t) const { return alpha_(t) <= 0.0; }

    bool select_working_set(Index& out_i, Index& out_j) const {
        const Index n = 2 * l_;
        double gmax = -std::numeric_limits<double>::infinity();
        double gmax2 = -std::numeric_limits<double>::infinity();
        Index i = -1;
        for (Index t = 0; t < n; ++t) {
            if (y_(t) > 0) {
                if (!at_upper(t) && -G_(t) >= gmax) {
                    gmax = -G_(t);
                    i = t;
                }
            } else if (!at_lower(t) && G_(t) >= gmax) {
                gmax = G_(t);
                i = t;
            }
        }
        Index j = -1;
        double best = std::numeric_limits<double>::infinity();
        for (Index t = 0; t < n; ++t) {
            if (y_(t) > 0) {
                if (at_lower(t)) continue;
                const double diff = gmax + G_(t);
                gmax2 = std::max(gmax2, G_(t));
                if (diff > 0 && i >= 0) {
                    const double quad = std::max(qd(i) + qd(t) - 2.0 * y_(i) * q(i, t), kTau);
                    const double obj = -diff * diff / quad;
                    if (obj <= best) {
                        best = obj;
                        j = t;
                    }
                }
            } else {
                if (at_upper(t)) continue;
                const double diff = gmax - G_(t);
                gmax2 = std::max(gmax2, -G_(t));
                if (diff > 0 && i >= 0) {
                    const double quad = std::max(qd(i) + qd(t) + 2.0 * y_(i) * q(i, t), kTau);
                    const double obj = -diff * diff / quad;
                    if (obj <= best) {
                        best = obj;
                        j = t;
                    }
                }
            }
        }
        if (gmax + gmax2 < eps_ || i < 0 || j < 0) return false;
        out_i = i;
        out_j = j;
        return true;
    }

    void update_pair(Index i, Index j) {
        const double old_i = alpha_(i), old_j = alpha_(j);
        double& ai = alpha_(i);
        double& aj = alpha_(j);
        const double C = C_;
        if (y_(i) != y_(j)) {
            const double quad = std::max(qd(i) + qd(j) + 2.0 * q(i, j), kTau);
            const double delta = (-G_(i) - G_(j)) / quad;
            const double diff = ai - aj;
            ai += delta;
            aj += delta;
            if (diff > 0) {
                if (aj < 0) {
                    aj = 0;
                    ai = diff;
                }
            } else if (ai < 0) {
                ai = 0;
                aj = -diff;
            }
            if (diff > 0) {
                if (ai > C) {
                    ai = C;
                    aj = C - diff;
                }
            } else if (aj > C) {
                aj = C;
                ai = C + diff;
            }
        } else {
            const double quad = std::max(qd(i) + qd(j) - 2.0 * q(i, j), kTau);
            const double delta = (G_(i) - G_(j)) / quad;
            const double sum = ai + aj;
            ai -= delta;
            aj += delta;
            if (sum > C) {
                if (ai > C) {
                    ai = C;
                    aj = sum - C;
                }
            } else if (aj < 0) {
                aj = 0;
                ai = sum;
            }
            if (sum > C) {
                if (aj > C) {
                    aj = C;
                    ai = sum - C;
                }
            } else if (ai < 0) {
                ai = 0;
                aj = sum;
            }
        }
        const double di = ai - old_i, dj = aj - old_j;
        for (Index t = 0; t < 2 * l_; ++t) G_(t) += q(t, i) * di + q(t, j) * dj;
    }

    const Matrix& K_;
    Index l_;
    double C_;
    double eps_;
    long max_iter_;
    Vector alpha_, y_, G_;
};

} // namespace

SvrModel fit_svr(const TrainingSet& ts, const SvrOptions& options) {
    if (!(options.C > 0)) throw ValidationError("svr C must be > 0");
    if (!(options.epsilon >= 0)) throw ValidationError("svr epsilon must be >= 0");
    SvrModel m;
    m.y_mean = ts.response_mean;
    m.y_scale = ts.scale();
    if (options.gamma > 0) {
        m.gamma = options.gamma;
    } else {
        const double mean = ts.inputs.mean();
        const double var = (ts.inputs.array() - mean).square().mean();
        m.gamma = var > 0 ? 1.0 / (static_cast<double>(ts.n_features()) * var) : 1.0;
    }

    const Index n = ts.size();
    Matrix K(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j <= i; ++j)
            K(i, j) = K(j, i) = std::exp(-m.gamma * (ts.inputs.row(i) - ts.inputs.row(j)).squaredNorm());

    EpsilonSvrSolver solver(K, ts.standardized(), options);
    solver.solve();
    const Vector beta = solver.coefficients();
    m.intercept = solver.intercept();

    Index n_sv = 0;
    for (Index i = 0; i < n; ++i)
        if (beta(i) != 0.0) ++n_sv;
    m.support_vectors.resize(n_sv, ts.n_features());
    m.coefficients.resize(n_sv);
    Index k = 0;
    for (Index i = 0; i < n; ++i)
        if (beta(i) != 0.0) {
            m.support_vectors.row(k) = ts.inputs.row(i);
            m.coefficients(k) = beta(i);
            ++k;
        }
    return m;
}

} // namespace sal
