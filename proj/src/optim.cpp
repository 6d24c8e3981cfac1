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

#include "sal/optim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace sal {

namespace {

Vector project(const Vector& x, const Vector& lo, const Vector& hi) { return x.cwiseMax(lo).cwiseMin(hi); }

double projected_gradient_norm(const Vector& x, const Vector& g, const Vector& lo, const Vector& hi) {
    return (project(x - g, lo, hi) - x).lpNorm<Eigen::Infinity>();
}

} // namespace

BoundedMinimizerResult minimize_bounded(const ObjectiveWithGradient& fg, const Vector& x0, const Vector& lower,
                                        const Vector& upper, const BoundedMinimizerOptions& options) {
    const Index n = x0.size();
    if (lower.size() != n || upper.size() != n) throw ValidationError("minimize_bounded: bound sizes differ");
    if ((lower.array() > upper.array()).any()) throw ValidationError("minimize_bounded: lower > upper");

    BoundedMinimizerResult res;
    Vector x = project(x0, lower, upper);
    Vector g(n);
    double f = fg(x, g);
    res.evaluations = 1;
    if (!std::isfinite(f)) throw NumericalError("minimize_bounded: objective is not finite at the start point");

    std::deque<Vector> S, Y;
    std::deque<double> rho;

    for (int it = 0; it < options.max_iterations; ++it) {
        if (projected_gradient_norm(x, g, lower, upper) <= options.pgtol) {
            res.converged = true;
            break;
        }

        // Freeze variables pinned at a bound by the gradient.
        Eigen::Array<bool, Eigen::Dynamic, 1> free(n);
        for (Index i = 0; i < n; ++i)
            free(i) = !((x(i) <= lower(i) && g(i) > 0) || (x(i) >= upper(i) && g(i) < 0));
        auto mask = [&](Vector v) {
            for (Index i = 0; i < n; ++i)
                if (!free(i)) v(i) = 0.0;
            return v;
        };

        // Two-loop recursion on the free subspace.
        Vector q = mask(g);
        std::vector<double> alpha(S.size());
        for (std::size_t k = S.size(); k-- > 0;) {
            alpha[k] = rho[k] * mask(S[k]).dot(q);
            q -= alpha[k] * mask(Y[k]);
        }
        if (!S.empty()) {
            const Vector ys = mask(Y.back());
            const double yy = ys.squaredNorm();
            if (yy > 0) q *= mask(S.back()).dot(ys) / yy;
        }
        for (std::size_t k = 0; k < S.size(); ++k) {
            const double beta = rho[k] * mask(Y[k]).dot(q);
            q += (alpha[k] - beta) * mask(S[k]);
        }
        Vector d = -mask(q);
        if (!(d.dot(g) < 0)) {
            d = -mask(g);
            S.clear();
            Y.clear();
            rho.clear();
        }
        if (d.squaredNorm() == 0) {
            res.converged = true;
            break;
        }

        double step = 1.0;
        if (S.empty()) step = std::min(1.0, 1.0 / d.norm());

        Vector x_new(n), g_new(n);
        double f_new = f;
        bool accepted = false;
        for (int ls = 0; ls < options.max_line_search_steps; ++ls) {
            x_new = project(x + step * d, lower, upper);
            if ((x_new - x).squaredNorm() == 0) break;
            f_new = fg(x_new, g_new);
            ++res.evaluations;
            if (std::isfinite(f_new) && f_new <= f + options.armijo * g.dot(x_new - x) && f_new < f) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            res.converged = true;  // no further decrease available along the search path
            break;
        }

        const Vector s = x_new - x;
        const Vector y = g_new - g;
        const double sy = s.dot(y);
        if (sy > 1e-10 * y.squaredNorm()) {
            S.push_back(s);
            Y.push_back(y);
            rho.push_back(1.0 / sy);
            if (static_cast<int>(S.size()) > options.memory) {
                S.pop_front();
                Y.pop_front();
                rho.pop_front();
            }
        }

        const double rel = (f - f_new) / std::max({std::abs(f), std::abs(f_new), 1.0});
        x = x_new;
        g = g_new;
        f = f_new;
        res.iterations = it + 1;
        if (rel <= options.ftol) {
            res.converged = true;
            break;
        }
    }

    res.x = x;
    res.value = f;
    return res;
}

} // namespace sal
