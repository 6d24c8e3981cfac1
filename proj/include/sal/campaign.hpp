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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sal/bench.hpp"
#include "sal/loop.hpp"
#include "sal/serialize.hpp"

namespace sal {

inline constexpr const char* kToolVersion = "0.1.0";

struct CaseConfig {
    std::string name;
    SimulatorSpec simulator;  // carries the failure policy
    std::optional<ParameterSpace> space;
    std::string response_label;
    InitialCountRule n0_rule = InitialCountRule::four_nf();
    std::optional<PoolSpec> pool;  // default_pool_spec when absent
};

struct ModelConfig {
    std::string name;
    ModelKind kind = ModelKind::gp;
    FitConfig fit{};
    std::optional<std::vector<StrategyKind>> strategies;  // overrides the campaign list
};

struct CampaignConfig {
    std::vector<CaseConfig> cases;
    std::vector<ModelConfig> models;
    std::vector<StrategyKind> strategies;
    int n_queries = 20;
    int n_reps = 10;
    int n_e = 100;
    std::uint64_t base_seed = 0;
    std::string output_dir = "campaign";
    std::vector<int> query_marks{5, 10, 20};
    double cap = 100.0;
    std::filesystem::path base_dir;  // resolves relative simulator paths; not part of the experiment identity

    const std::vector<StrategyKind>& strategies_for(const ModelConfig& model) const {
        return model.strategies ? *model.strategies : strategies;
    }

    /// Fully defaulted document with sorted keys. The output directory is left
    /// out so that the hash identifies the experiment, not where it was written.
    Json canonical() const;
    /// FNV-1a 64 of canonical().dump(), as 16 hex digits.
    std::string hash() const;
};

/// Strict parse: unknown keys, wrong types and bad values raise
/// ValidationError naming the offending field. Relative table and command
/// paths resolve against `base_dir`.
CampaignConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir = {});
CampaignConfig parse_config(const std::filesystem::path& path);

/// Seed of one run: base + FNV-1a("case|model|strategy") + rep (mod 2^64).
std::uint64_t cell_seed(std::uint64_t base_seed, const std::string& case_name, const std::string& model_name,
                        StrategyKind strategy, int rep);
/// Test-set seed shared by every run of a case.
std::uint64_t test_set_seed(std::uint64_t base_seed, const std::string& case_name);
/// Seed of a case's quasirandom pool when the config leaves it unset.
std::uint64_t pool_seed(std::uint64_t base_seed, const std::string& case_name);

/// Builds simulators and pools and checks every budget without evaluating anything.
void validate_campaign(const CampaignConfig& config);

struct CellFailure {
    std::string case_name;
    std::string model;
    std::string strategy;
    int rep = 0;
    std::string message;
};

struct CampaignResult {
    std::filesystem::path dir;
    std::vector<SummaryRow> summary;
    std::size_t n_traces = 0;
    std::vector<CellFailure> failures;

    bool ok() const noexcept { return failures.empty(); }
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// Runs every (case, model, strategy, rep) cell, writes
/// runs/<case>/<model>/<strategy>/rep<k>.json, detail.csv, summary.csv and
/// manifest.json under config.output_dir, plus failures.json when any cell
/// failed. Outputs do not depend on `jobs`.
CampaignResult run_campaign(const CampaignConfig& config, int jobs = 1, const ProgressFn& progress = {});

} // namespace sal
