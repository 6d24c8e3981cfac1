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

// salbench: run, report and validate active-learning benchmark campaigns.

#include <CLI11.hpp>

#include <iostream>

#include "sal/campaign.hpp"
#include "sal/csv.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

std::vector<int> parse_marks(const std::string& text) {
    std::vector<int> marks;
    for (const auto& cell : sal::split_csv_line(text)) {
        const double v = sal::parse_real(cell, "--marks");
        if (v < 1 || v != static_cast<int>(v)) throw sal::ValidationError("--marks: '" + cell + "' is not a positive integer");
        marks.push_back(static_cast<int>(v));
    }
    if (marks.empty()) throw sal::ValidationError("--marks: no marks given");
    return marks;
}

int cmd_run(const std::string& config_path, int jobs, const std::string& out) {
    sal::CampaignConfig config = sal::parse_config(config_path);
    if (!out.empty()) config.output_dir = out;
    const auto result = sal::run_campaign(config, jobs, [](std::size_t done, std::size_t total) {
        std::cerr << "\r[" << done << "/" << total << "] runs" << std::flush;
        if (done == total) std::cerr << '\n';
    });
    std::cout << "wrote " << result.n_traces << " traces to " << result.dir.string() << '\n';
    std::cout << "config hash " << config.hash() << '\n';
    if (!result.ok()) {
        std::cerr << result.failures.size() << " run(s) failed; see " << (result.dir / "failures.json").string() << '\n';
        for (const auto& f : result.failures)
            std::cerr << "  " << f.case_name << '/' << f.model << '/' << f.strategy << "/rep" << f.rep << ": " << f.message
                      << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}

int cmd_report(const std::string& run_dir, const std::string& marks, double cap) {
    const std::filesystem::path dir(run_dir);
    const auto rows = sal::read_detail_csv(dir / "detail.csv");
    const auto summary = sal::summarize(rows, parse_marks(marks), cap);
    sal::write_summary_csv(dir / "summary.csv", summary);
    std::cout << sal::summary_csv(summary);
    return kExitOk;
}

int cmd_validate(const std::string& config_path) {
    const sal::CampaignConfig config = sal::parse_config(config_path);
    sal::validate_campaign(config);
    std::size_t runs = 0;
    for (const auto& m : config.models) runs += config.strategies_for(m).size();
    runs *= config.cases.size() * static_cast<std::size_t>(config.n_reps);
    std::cout << "ok: " << config.cases.size() << " case(s), " << config.models.size() << " model(s), " << runs
              << " run(s); config hash " << config.hash() << '\n';
    return kExitOk;
}

int cmd_list_sims() {
    for (const auto& b : sal::list_builtins()) {
        const sal::Simulator sim = sal::builtin_analytic(b.name);
        std::cout << b.name << "  (" << sim.space().size() << "-D, response " << sim.response_label() << ")\n  "
                  << b.description << '\n';
        for (const auto& d : sim.space().dims())
            std::cout << "    " << d.name << " in [" << sal::format_shortest(d.lower) << ", "
                      << sal::format_shortest(d.upper) << "]" << (d.scale == sal::Scale::log10 ? " log" : "") << '\n';
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pool-based active-learning surrogate benchmarks"};
    app.set_version_flag("--version", std::string(sal::kToolVersion));
    app.require_subcommand(1);

    std::string config_path, out, run_dir, marks = "5,10,20";
    int jobs = 1;
    double cap = 100.0;

    auto* run = app.add_subcommand("run", "Run a campaign");
    run->add_option("config", config_path, "Campaign config (JSON)")->required();
    run->add_option("--jobs,-j", jobs, "Parallel runs")->check(CLI::PositiveNumber);
    run->add_option("--out,-o", out, "Output directory (overrides output_dir)");

    auto* report = app.add_subcommand("report", "Rebuild summary.csv from a run directory's detail.csv");
    report->add_option("run-dir", run_dir, "Campaign output directory")->required();
    report->add_option("--marks", marks, "Comma-separated query marks");
    report->add_option("--cap", cap, "Cap for reported means")->check(CLI::PositiveNumber);

    auto* validate = app.add_subcommand("validate", "Check a campaign config without running it");
    validate->add_option("config", config_path, "Campaign config (JSON)")->required();

    app.add_subcommand("list-sims", "List built-in analytic simulators");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (run->parsed()) return cmd_run(config_path, jobs, out);
        if (report->parsed()) return cmd_report(run_dir, marks, cap);
        if (validate->parsed()) return cmd_validate(config_path);
        return cmd_list_sims();
    } catch (const sal::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}
