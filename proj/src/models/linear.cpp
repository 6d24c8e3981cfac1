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

#include <Eigen/QR>

#include "sal/regress.hpp"

namespace sal {

// Least squares on [X 1]; the minimum-norm solution covers N_t <= N_f.
LinearModel fit_linear(const TrainingSet& ts) {
    const Index n = ts.size();
    const Index nf = ts.n_features();
    Matrix A(n, nf + 1);
    A.leftCols(nf) = ts.inputs;
    A.col(nf).setOnes();
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(A);
    const Vector beta = cod.solve(ts.responses);
    LinearModel m;
    m.coefficients = beta.head(nf);
    m.intercept = beta(nf);
    return m;
}

} // namespace sal
