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

#include <functional>

#include "sal/types.hpp"

namespace sal {

struct BoundedMinimizerOptions {
    int memory = 10;
    int max_iterations = 200;
    int max_line_search_steps = 40;
    double pgtol = 1e-5;  // on the infinity norm of the projected gradient
    double ftol = 2.220446049250313e-09;  // relative decrease stop, 1e7 * eps
    double armijo = 1e-4;
};

struct BoundedMinimizerResult {
    Vector x;
    double value = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
};

/// Objective returning f(x) and writing the gradient into the second argument.
/// Non-finite values are treated as "outside the feasible region" by the line search.
using ObjectiveWithGradient = std::function<double(const Vector&, Vector&)>;

/// Limited-memory quasi-Newton minimization under box constraints.
///
/// Variables sitting on a bound with the gradient pushing outward are frozen for
/// the step; the remaining ones follow the L-BFGS two-loop direction, and the
/// trial point is projected back into the box with Armijo backtracking along the
/// projected path. Every accepted step strictly decreases f, so the returned value
/// never exceeds f(x0).
BoundedMinimizerResult minimize_bounded(const ObjectiveWithGradient& fg, const Vector& x0, const Vector& lower,
                                        const Vector& upper, const BoundedMinimizerOptions& options = {});

} // namespace sal
