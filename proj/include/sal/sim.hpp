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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sal/space.hpp"
#include "sal/types.hpp"

namespace sal {

enum class SimulatorKind { analytic, table, command };
enum class FailurePolicy { abort, resample };

std::string to_string(SimulatorKind kind);
std::string to_string(FailurePolicy policy);
FailurePolicy parse_failure_policy(const std::string& token);

struct SimulatorSpec {
    SimulatorKind kind = SimulatorKind::analytic;
    std::string analytic_name;         // analytic
    std::string table_path;            // table
    std::vector<std::string> command;  // command: executable then fixed leading arguments
    int timeout_s = 60;
    int max_processes = 1;  // concurrent child processes for command simulators
    FailurePolicy failure_policy = FailurePolicy::abort;
};

/// Black-box response f(raw). Copies share the backend.
class Simulator {
public:
    using Backend = std::function<double(const Vector& raw)>;

    Simulator(SimulatorSpec spec, ParameterSpace space, std::string response_label, Backend backend);

    /// Evaluates at a point in physical units. Throws QueryFailure when the
    /// backend cannot produce a finite response, ValidationError when the point
    /// lies outside the space.
    double evaluate(const Vector& raw) const;

    const SimulatorSpec& spec() const noexcept { return spec_; }
    const ParameterSpace& space() const noexcept { return space_; }
    const std::string& response_label() const noexcept { return label_; }

private:
    SimulatorSpec spec_;
    ParameterSpace space_;
    std::string label_;
    std::shared_ptr<const Backend> backend_;
};

struct BuiltinInfo {
    std::string name;
    std::string description;
};

/// Names and one-line descriptions of the built-in analytic stand-ins.
std::vector<BuiltinInfo> list_builtins();

/// Built-in closed-form stand-in. Throws ValidationError for unknown names.
Simulator builtin_analytic(const std::string& name);

/// Power coefficient k_p(alpha) of the inline-mixer stand-ins: log-linear in
/// alpha through the two tabulated anchors of the 2-D or 3-D setup.
double mixer_power_coefficient(double alpha, bool three_d);

/// Exact-match replay of a CSV table: header = dimension names then the response
/// label. When `space` is given, the header names must match it; otherwise the
/// space is inferred from the column ranges (linear scale).
Simulator load_table(const std::string& path, const std::optional<ParameterSpace>& space = std::nullopt);

/// External program: argv = [command..., v1, ..., vNf] with shortest round-trip
/// decimals; the first stdout line is the response.
Simulator command_simulator(const SimulatorSpec& spec, ParameterSpace space, std::string response_label);

/// Builds any simulator kind from its spec. Analytic simulators bring their own
/// space; table and command simulators need one.
Simulator make_simulator(const SimulatorSpec& spec, const std::optional<ParameterSpace>& space,
                         const std::string& response_label);

} // namespace sal
