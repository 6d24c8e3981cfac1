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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace sal {

using Index = Eigen::Index;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Row-major storage keeps one design point per contiguous row.
template <typename Scalar>
using PointMatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Vector = VectorX<double>;
using Matrix = MatrixX<double>;
using PointMatrix = PointMatrixX<double>;

// Error hierarchy. Everything thrown by the library derives from sal::Error.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad user input: configs, out-of-range arguments, malformed files.
class ValidationError : public Error {
public:
    using Error::Error;
};

// A model was asked for something its kind cannot provide (e.g. predictive std).
class UnsupportedCapability : public Error {
public:
    using Error::Error;
};

// Factorization or solve failed after every regularization attempt.
class NumericalError : public Error {
public:
    using Error::Error;
};

// A simulator could not produce a response for the given raw point.
class QueryFailure : public Error {
public:
    QueryFailure(std::vector<double> raw_point, std::string cause)
        : Error("query failed: " + cause), raw_(std::move(raw_point)), cause_(std::move(cause)) {}

    const std::vector<double>& raw_point() const noexcept { return raw_; }
    const std::string& cause() const noexcept { return cause_; }

private:
    std::vector<double> raw_;
    std::string cause_;
};

} // namespace sal
