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

#include <json.hpp>

#include "sal/loop.hpp"
#include "sal/regress.hpp"
#include "sal/space.hpp"

namespace sal {

using Json = nlohmann::json;

Json to_json(const Vector& v);
Json to_json(const Matrix& m);
Json to_json(const PointMatrix& m);
Vector vector_from_json(const Json& j);
Matrix matrix_from_json(const Json& j);

Json to_json(const KernelConfig& k);
KernelConfig kernel_from_json(const Json& j);

/// Kind tag plus the fitted state as flat arrays.
Json to_json(const Model& model);
Model model_from_json(const Json& j);

/// Trace document: indices with their unit and raw points, responses,
/// per-step errors, failures and the final model.
Json to_json(const RunTrace& trace, const CandidatePool& pool);
RunTrace trace_from_json(const Json& j);

} // namespace sal
