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

#include "sal/sim.hpp"

#include "sal/csv.hpp"

#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

extern char** environ;

namespace sal {

std::string to_string(SimulatorKind kind) {
    switch (kind) {
    case SimulatorKind::analytic: return "analytic";
    case SimulatorKind::table: return "table";
    case SimulatorKind::command: return "command";
    }
    return "?";
}

std::string to_string(FailurePolicy policy) { return policy == FailurePolicy::abort ? "abort" : "resample"; }

FailurePolicy parse_failure_policy(const std::string& token) {
    if (token == "abort") return FailurePolicy::abort;
    if (token == "resample") return FailurePolicy::resample;
    throw ValidationError("unknown failure policy '" + token + "' (expected abort or resample)");
}

Simulator::Simulator(SimulatorSpec spec, ParameterSpace space, std::string response_label, Backend backend)
    : spec_(std::move(spec)), space_(std::move(space)), label_(std::move(response_label)),
      backend_(std::make_shared<const Backend>(std::move(backend))) {}

double Simulator::evaluate(const Vector& raw) const {
    // Validates length and bounds; throws ValidationError.
    (void)map_point(space_, raw, MapDirection::to_unit);
    const double v = (*backend_)(raw);
    if (!std::isfinite(v)) {
        std::vector<double> p(raw.data(), raw.data() + raw.size());
        throw QueryFailure(std::move(p), "non-finite response");
    }
    return v;
}

// ---------------------------------------------------------------------------
// Built-in analytic stand-ins

namespace {

double mixer_log_kp(double alpha, bool three_d) {
    constexpr double a0 = 0.057, a1 = 0.2;
    const double k0 = three_d ? 3030.0 : 2950.0;
    const double k1 = three_d ? 1800.0 : 1690.0;
    const double t = (alpha - a0) / (a1 - a0);
    return std::log10(k0) + t * (std::log10(k1) - std::log10(k0));
}

// Shear-thinning correction; identically zero for Newtonian fluids (n = 1) so
// the tabulated k_p anchors hold for any blade count.
double mixer_log_fluid_factor(double n, double blades) {
    return (1.0 - n) * (0.3 + 0.2 * std::log10(blades / 2.0));
}

DimensionSpec lin(std::string name, double lo, double hi) { return {std::move(name), lo, hi, Scale::linear}; }
DimensionSpec lg(std::string name, double lo, double hi) { return {std::move(name), lo, hi, Scale::log10}; }

struct Builtin {
    const char* name;
    const char* description;
    std::vector<DimensionSpec> dims;
    const char* label;
    std::function<double(const Vector&)> f;
};

std::vector<Builtin> builtins() {
    std::vector<Builtin> out;

    // log10 c_v = -0.6 - 1.4 (L/D / 0.3)^2 sin(theta)^1.5 + 0.15 cos(3 theta)
    out.push_back({"mixer_2d_smooth",
                   "static mixer stand-in: smooth log10 c_v over blade length L_D and angle theta",
                   {lin("L_D", 0.2, 0.3), lin("theta", 0.8, 1.57)},
                   "log c_v",
                   [](const Vector& x) {
                       const double ld = x(0), th = x(1);
                       return -0.6 - 1.4 * (ld / 0.3) * (ld / 0.3) * std::pow(std::sin(th), 1.5) +
                              0.15 * std::cos(3.0 * th);
                   }});

    // dP/(rho U^2) = 0.005 + 0.02 (1 - beta) s_D + 4 max(0, 0.5 - beta)^2 / beta^2 (1 + 0.6 exp(-4 s_D))
    // For beta >= 0.5 the response stays inside [0.005, 0.015].
    out.push_back({"orifice_2d_plateau",
                   "orifice stand-in: pressure-loss coefficient with a near-zero plateau for area_ratio >= 0.5",
                   {lin("area_ratio", 0.2, 0.8), lin("s_D", 0.1, 1.0)},
                   "dP/(rho U^2)",
                   [](const Vector& x) {
                       const double beta = x(0), s = x(1);
                       const double jet = std::max(0.0, 0.5 - beta);
                       return 0.005 + 0.02 * (1.0 - beta) * s +
                              4.0 * jet * jet / (beta * beta) * (1.0 + 0.6 * std::exp(-4.0 * s));
                   }});

    // log10 N_p,2D = log10 k_p(alpha) + (1 - n)(0.3 + 0.2 log10(N_b / 2)) - log10 Re
    out.push_back({"inline_mixer_2d",
                   "2-D inline mixer stand-in: log10 N_p,2D = log10(k_p(alpha) h(n, N_b) / Re)",
                   {lg("Re", 1.0, 100.0), lin("alpha", 0.057, 0.2), lin("n", 0.4, 1.0), lin("N_b", 2.0, 8.0)},
                   "log N_p,2D",
                   [](const Vector& x) {
                       return mixer_log_kp(x(1), false) + mixer_log_fluid_factor(x(2), x(3)) - std::log10(x(0));
                   }});

    // As the 2-D mixer with the 3-D anchors, plus an axial-flow term
    // 0.1 log10(1 + Re_ax / 10) and a finite-length end effect 0.04 / Le_D.
    out.push_back({"inline_mixer_6d",
                   "3-D inline mixer stand-in: 2-D form with 3-D anchors plus axial-flow and end-effect terms",
                   {lg("Re", 1.0, 100.0), lin("alpha", 0.057, 0.2), lin("n", 0.4, 1.0), lin("N_b", 2.0, 8.0),
                    lg("Re_ax", 1.0, 100.0), lin("Le_D", 0.5, 2.0)},
                   "log N_p,2D",
                   [](const Vector& x) {
                       return mixer_log_kp(x(1), true) + mixer_log_fluid_factor(x(2), x(3)) - std::log10(x(0)) +
                              0.1 * std::log10(1.0 + x(4) / 10.0) + 0.04 / x(5);
                   }});

    // 1.5 + three Gaussian bumps of different height and width.
    out.push_back({"multimodal_2d",
                   "multimodal test surface: offset plus three Gaussian bumps on the unit square",
                   {lin("x1", 0.0, 1.0), lin("x2", 0.0, 1.0)},
                   "f",
                   [](const Vector& x) {
                       auto bump = [&](double cx, double cy, double w) {
                           const double dx = x(0) - cx, dy = x(1) - cy;
                           return std::exp(-(dx * dx + dy * dy) / w);
                       };
                       return 1.5 + 1.0 * bump(0.25, 0.3, 0.02) + 0.8 * bump(0.72, 0.68, 0.015) +
                              0.5 * bump(0.2, 0.8, 0.01);
                   }});
    return out;
}

} // namespace

double mixer_power_coefficient(double alpha, bool three_d) { return std::pow(10.0, mixer_log_kp(alpha, three_d)); }

std::vector<BuiltinInfo> list_builtins() {
    std::vector<BuiltinInfo> out;
    for (const auto& b : builtins()) out.push_back({b.name, b.description});
    return out;
}

Simulator builtin_analytic(const std::string& name) {
    for (auto& b : builtins()) {
        if (name != b.name) continue;
        SimulatorSpec spec;
        spec.kind = SimulatorKind::analytic;
        spec.analytic_name = name;
        return Simulator(spec, ParameterSpace(b.dims), b.label, b.f);
    }
    throw ValidationError("unknown analytic simulator '" + name + "'");
}

// ---------------------------------------------------------------------------
// Table replay

namespace {

std::string table_key(const Vector& raw) {
    std::string key;
    char buf[40];
    for (Index i = 0; i < raw.size(); ++i) {
        double v = raw(i);
        if (v == 0.0) v = 0.0;  // folds -0
        std::snprintf(buf, sizeof(buf), "%.11e", v);
        if (i) key += ',';
        key += buf;
    }
    return key;
}

} // namespace

Simulator load_table(const std::string& path, const std::optional<ParameterSpace>& space) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open table '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("table '" + path + "' is empty");
    const auto header = split_csv_line(line);
    if (header.size() < 2) throw ValidationError("table '" + path + "': header needs at least one input and a response");
    const std::size_t nf = header.size() - 1;

    if (space) {
        const auto names = space->names();
        if (names.size() != nf || !std::equal(names.begin(), names.end(), header.begin()))
            throw ValidationError("table '" + path + "': header does not match the declared space");
    }

    std::map<std::string, double> rows;
    std::vector<Vector> points;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto cells = split_csv_line(line);
        const std::string where = path + ":" + std::to_string(lineno);
        if (cells.size() != header.size()) throw ValidationError(where + ": expected " + std::to_string(header.size()) + " columns");
        Vector raw(static_cast<Index>(nf));
        for (std::size_t k = 0; k < nf; ++k) raw(static_cast<Index>(k)) = parse_real(cells[k], where);
        const double f = parse_real(cells[nf], where);
        const auto key = table_key(raw);
        auto [it, inserted] = rows.emplace(key, f);
        if (!inserted && it->second != f) throw ValidationError(where + ": duplicate coordinates with a conflicting response");
        if (inserted) points.push_back(raw);
    }
    if (rows.empty()) throw ValidationError("table '" + path + "' has no rows");

    ParameterSpace sp;
    if (space) {
        sp = *space;
    } else {
        std::vector<DimensionSpec> dims;
        for (std::size_t k = 0; k < nf; ++k) {
            double lo = points.front()(static_cast<Index>(k)), hi = lo;
            for (const auto& p : points) {
                lo = std::min(lo, p(static_cast<Index>(k)));
                hi = std::max(hi, p(static_cast<Index>(k)));
            }
            if (!(lo < hi)) throw ValidationError("table '" + path + "': column '" + header[k] + "' is constant");
            dims.push_back({header[k], lo, hi, Scale::linear});
        }
        sp = ParameterSpace(std::move(dims));
    }

    SimulatorSpec spec;
    spec.kind = SimulatorKind::table;
    spec.table_path = path;
    auto table = std::make_shared<const std::map<std::string, double>>(std::move(rows));
    return Simulator(spec, sp, header.back(), [table](const Vector& raw) {
        const auto it = table->find(table_key(raw));
        if (it == table->end()) throw QueryFailure(std::vector<double>(raw.data(), raw.data() + raw.size()), "table miss");
        return it->second;
    });
}

// ---------------------------------------------------------------------------
// External command

namespace {

class ProcessGate {
public:
    explicit ProcessGate(int slots) : free_(std::max(1, slots)) {}

    void acquire() {
        std::unique_lock lock(m_);
        cv_.wait(lock, [&] { return free_ > 0; });
        --free_;
    }
    void release() {
        {
            std::lock_guard lock(m_);
            ++free_;
        }
        cv_.notify_one();
    }

private:
    std::mutex m_;
    std::condition_variable cv_;
    int free_;
};

struct ProcessResult {
    int exit_code = -1;
    bool timed_out = false;
    std::string out;
    std::string err;
};

ProcessResult run_process(const std::vector<std::string>& argv, int timeout_s) {
    int out_pipe[2], err_pipe[2];
    if (pipe(out_pipe) != 0) throw Error(std::string("pipe: ") + std::strerror(errno));
    if (pipe(err_pipe) != 0) {
        close(out_pipe[0]);
        close(out_pipe[1]);
        throw Error(std::string("pipe: ") + std::strerror(errno));
    }

    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_addclose(&actions, out_pipe[0]);
    posix_spawn_file_actions_addclose(&actions, err_pipe[0]);
    posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);
    posix_spawn_file_actions_adddup2(&actions, err_pipe[1], STDERR_FILENO);
    posix_spawn_file_actions_addclose(&actions, out_pipe[1]);
    posix_spawn_file_actions_addclose(&actions, err_pipe[1]);

    std::vector<char*> cargv;
    for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
    cargv.push_back(nullptr);

    pid_t pid = 0;
    const int rc = posix_spawnp(&pid, cargv[0], &actions, nullptr, cargv.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    close(out_pipe[1]);
    close(err_pipe[1]);

    ProcessResult res;
    if (rc != 0) {
        close(out_pipe[0]);
        close(err_pipe[0]);
        res.err = std::string("spawn failed: ") + std::strerror(rc);
        return res;
    }

    const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(timeout_s);
    pollfd fds[2] = {{out_pipe[0], POLLIN, 0}, {err_pipe[0], POLLIN, 0}};
    int open_fds = 2;
    char buf[4096];
    while (open_fds > 0) {
        const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
        if (left.count() <= 0) {
            res.timed_out = true;
            break;
        }
        const int pr = poll(fds, 2, static_cast<int>(std::min<long long>(left.count(), 1000)));
        if (pr < 0) {
            if (errno == EINTR) continue;
            break;
        }
        for (int k = 0; k < 2; ++k) {
            if (fds[k].fd < 0 || !(fds[k].revents & (POLLIN | POLLHUP | POLLERR))) continue;
            const ssize_t n = read(fds[k].fd, buf, sizeof(buf));
            if (n > 0) {
                (k == 0 ? res.out : res.err).append(buf, static_cast<std::size_t>(n));
            } else {
                close(fds[k].fd);
                fds[k].fd = -1;
                --open_fds;
            }
        }
    }
    for (auto& f : fds)
        if (f.fd >= 0) close(f.fd);

    int status = 0;
    if (res.timed_out) {
        kill(pid, SIGKILL);
        waitpid(pid, &status, 0);
        return res;
    }
    // Pipes closed; the child may still be running if it detached its output.
    for (;;) {
        const pid_t w = waitpid(pid, &status, WNOHANG);
        if (w == pid) break;
        if (w < 0 && errno != EINTR) break;
        if (std::chrono::steady_clock::now() >= deadline) {
            kill(pid, SIGKILL);
            waitpid(pid, &status, 0);
            res.timed_out = true;
            return res;
        }
        usleep(1000);
    }
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + (WIFSIGNALED(status) ? WTERMSIG(status) : 0);
    return res;
}

} // namespace

Simulator command_simulator(const SimulatorSpec& spec, ParameterSpace space, std::string response_label) {
    if (spec.command.empty() || spec.command.front().empty()) throw ValidationError("command simulator needs an executable");
    if (spec.timeout_s <= 0) throw ValidationError("command timeout_s must be > 0");
    auto gate = std::make_shared<ProcessGate>(spec.max_processes);
    const auto prefix = spec.command;
    const int timeout = spec.timeout_s;
    SimulatorSpec s = spec;
    s.kind = SimulatorKind::command;
    return Simulator(s, std::move(space), std::move(response_label), [gate, prefix, timeout](const Vector& raw) {
        std::vector<std::string> argv = prefix;
        for (Index i = 0; i < raw.size(); ++i) argv.push_back(format_shortest(raw(i)));
        std::vector<double> point(raw.data(), raw.data() + raw.size());

        gate->acquire();
        ProcessResult r;
        try {
            r = run_process(argv, timeout);
        } catch (...) {
            gate->release();
            throw;
        }
        gate->release();

        auto stderr_tail = [&] {
            std::string e = r.err.size() > 500 ? r.err.substr(r.err.size() - 500) : r.err;
            return e.empty() ? std::string() : "; stderr: " + e;
        };
        if (r.timed_out) throw QueryFailure(point, "timeout after " + std::to_string(timeout) + " s" + stderr_tail());
        if (r.exit_code != 0) throw QueryFailure(point, "exit code " + std::to_string(r.exit_code) + stderr_tail());
        std::string first = r.out.substr(0, r.out.find('\n'));
        const auto b = first.find_first_not_of(" \t\r");
        const auto e = first.find_last_not_of(" \t\r");
        first = b == std::string::npos ? std::string() : first.substr(b, e - b + 1);
        try {
            return parse_real(first, "command output");
        } catch (const ValidationError&) {
            throw QueryFailure(point, "unparseable output '" + first + "'" + stderr_tail());
        }
    });
}

Simulator make_simulator(const SimulatorSpec& spec, const std::optional<ParameterSpace>& space,
                         const std::string& response_label) {
    switch (spec.kind) {
    case SimulatorKind::analytic:
    case SimulatorKind::table: {
        if (spec.kind == SimulatorKind::analytic && space)
            throw ValidationError("analytic simulators define their own space");
        const Simulator sim = spec.kind == SimulatorKind::analytic ? builtin_analytic(spec.analytic_name)
                                                                   : load_table(spec.table_path, space);
        SimulatorSpec s = sim.spec();
        s.failure_policy = spec.failure_policy;
        s.timeout_s = spec.timeout_s;
        return Simulator(s, sim.space(), response_label.empty() ? sim.response_label() : response_label,
                         [sim](const Vector& raw) { return sim.evaluate(raw); });
    }
    case SimulatorKind::command: {
        if (!space) throw ValidationError("command simulators need a declared space");
        return command_simulator(spec, *space, response_label.empty() ? std::string("f") : response_label);
    }
    }
    throw ValidationError("unknown simulator kind");
}

} // namespace sal
