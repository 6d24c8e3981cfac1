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

#include "sal/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "sal/rng.hpp"

namespace sal {

// ---------------------------------------------------------------------------
// Strict JSON reading

namespace {

std::string join_path(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string index_path(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ValidationError((path.empty() ? std::string("config") : path) + ": " + what);
}

void check_object(const Json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) fail(path, "expected an object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
            fail(join_path(path, key), "unknown key '" + key + "'");
    }
}

const Json* find(const Json& j, const char* key) {
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

const Json& require(const Json& j, const char* key, const std::string& path) {
    const Json* v = find(j, key);
    if (!v) fail(join_path(path, key), "required field is missing");
    return *v;
}

std::string as_string(const Json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

double as_number(const Json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

long long as_integer(const Json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(INT32_MAX))
        fail(path, "integer out of range");
    return j.get<long long>();
}

int as_int_at_least(const Json& j, const std::string& path, int min) {
    const long long v = as_integer(j, path);
    if (v < min || v > INT32_MAX) fail(path, "must be an integer >= " + std::to_string(min));
    return static_cast<int>(v);
}

bool as_bool(const Json& j, const std::string& path) {
    if (!j.is_boolean()) fail(path, "expected true or false");
    return j.get<bool>();
}

template <typename F>
auto wrap(const std::string& path, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ValidationError& e) {
        fail(path, e.what());
    }
}

bool safe_name(const std::string& s) {
    if (s.empty() || s == "." || s == "..") return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_' || c == '-' || c == '.';
    });
}

std::string scale_token(Scale s) { return s == Scale::log10 ? "log" : "linear"; }

Scale parse_scale(const Json& j, const std::string& path) {
    const std::string t = as_string(j, path);
    if (t == "linear") return Scale::linear;
    if (t == "log" || t == "log10") return Scale::log10;
    fail(path, "unknown scale '" + t + "' (expected linear or log)");
}

ParameterSpace parse_space(const Json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of dimensions");
    std::vector<DimensionSpec> dims;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string p = index_path(path, i);
        check_object(j[i], p, {"name", "lower", "upper", "scale"});
        DimensionSpec d;
        d.name = as_string(require(j[i], "name", p), join_path(p, "name"));
        d.lower = as_number(require(j[i], "lower", p), join_path(p, "lower"));
        d.upper = as_number(require(j[i], "upper", p), join_path(p, "upper"));
        if (const Json* s = find(j[i], "scale")) d.scale = parse_scale(*s, join_path(p, "scale"));
        dims.push_back(std::move(d));
    }
    return wrap(path, [&] { return ParameterSpace(std::move(dims)); });
}

Json space_json(const ParameterSpace& space) {
    Json out = Json::array();
    for (const auto& d : space.dims())
        out.push_back({{"name", d.name}, {"lower", d.lower}, {"upper", d.upper}, {"scale", scale_token(d.scale)}});
    return out;
}

SimulatorSpec parse_simulator(const Json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    const std::string kind = as_string(require(j, "kind", path), join_path(path, "kind"));
    SimulatorSpec spec;
    if (kind == "analytic") {
        check_object(j, path, {"kind", "name"});
        spec.kind = SimulatorKind::analytic;
        spec.analytic_name = as_string(require(j, "name", path), join_path(path, "name"));
        const auto names = list_builtins();
        if (std::none_of(names.begin(), names.end(), [&](const BuiltinInfo& b) { return b.name == spec.analytic_name; }))
            fail(join_path(path, "name"), "unknown builtin simulator '" + spec.analytic_name + "'");
    } else if (kind == "table") {
        check_object(j, path, {"kind", "path"});
        spec.kind = SimulatorKind::table;
        spec.table_path = as_string(require(j, "path", path), join_path(path, "path"));
    } else if (kind == "command") {
        check_object(j, path, {"kind", "command", "timeout_s", "max_processes"});
        spec.kind = SimulatorKind::command;
        const Json& cmd = require(j, "command", path);
        const std::string cp = join_path(path, "command");
        if (!cmd.is_array() || cmd.empty()) fail(cp, "expected a non-empty array of strings");
        for (std::size_t i = 0; i < cmd.size(); ++i) spec.command.push_back(as_string(cmd[i], index_path(cp, i)));
        if (const Json* t = find(j, "timeout_s")) spec.timeout_s = as_int_at_least(*t, join_path(path, "timeout_s"), 1);
        if (const Json* m = find(j, "max_processes"))
            spec.max_processes = as_int_at_least(*m, join_path(path, "max_processes"), 1);
    } else {
        fail(join_path(path, "kind"), "unknown simulator kind '" + kind + "' (expected analytic, table or command)");
    }
    return spec;
}

Json simulator_json(const SimulatorSpec& s) {
    switch (s.kind) {
    case SimulatorKind::analytic: return {{"kind", "analytic"}, {"name", s.analytic_name}};
    case SimulatorKind::table: return {{"kind", "table"}, {"path", s.table_path}};
    case SimulatorKind::command:
        return {{"kind", "command"}, {"command", s.command}, {"timeout_s", s.timeout_s}, {"max_processes", s.max_processes}};
    }
    return nullptr;
}

InitialCountRule parse_n0_rule(const Json& j, const std::string& path) {
    if (j.is_string()) {
        const std::string t = j.get<std::string>();
        if (t == "four_nf") return InitialCountRule::four_nf();
        if (t == "two_nf") return InitialCountRule::two_nf();
        fail(path, "unknown rule '" + t + "' (expected four_nf, two_nf or a positive integer)");
    }
    return InitialCountRule::fixed(as_int_at_least(j, path, 1));
}

Json n0_rule_json(const InitialCountRule& r) {
    switch (r.kind) {
    case InitialCountRule::Kind::four_nf: return "four_nf";
    case InitialCountRule::Kind::two_nf: return "two_nf";
    case InitialCountRule::Kind::fixed: return r.k;
    }
    return nullptr;
}

PoolSpec parse_pool(const Json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    const std::string kind = as_string(require(j, "kind", path), join_path(path, "kind"));
    if (kind == "grid") {
        check_object(j, path, {"kind", "points_per_dim"});
        GridSpec g;
        if (const Json* m = find(j, "points_per_dim")) g.points_per_dim = as_int_at_least(*m, join_path(path, "points_per_dim"), 2);
        return g;
    }
    if (kind == "quasirandom") {
        check_object(j, path, {"kind", "size", "seed"});
        QuasirandomSpec q;
        if (const Json* n = find(j, "size")) q.size = as_int_at_least(*n, join_path(path, "size"), 1);
        if (const Json* s = find(j, "seed")) q.seed = static_cast<std::uint64_t>(as_int_at_least(*s, join_path(path, "seed"), 0));
        return q;
    }
    fail(join_path(path, "kind"), "unknown pool kind '" + kind + "' (expected grid or quasirandom)");
}

Json pool_json(const PoolSpec& p) {
    if (const auto* g = std::get_if<GridSpec>(&p)) return {{"kind", "grid"}, {"points_per_dim", g->points_per_dim}};
    const auto& q = std::get<QuasirandomSpec>(p);
    return {{"kind", "quasirandom"}, {"size", q.size}, {"seed", q.seed}};
}

CaseConfig parse_case(const Json& j, const std::string& path) {
    check_object(j, path, {"name", "simulator", "space", "response_label", "n0_rule", "pool", "failure_policy"});
    CaseConfig c;
    c.name = as_string(require(j, "name", path), join_path(path, "name"));
    if (!safe_name(c.name)) fail(join_path(path, "name"), "names may use letters, digits, '_', '-' and '.' only");
    c.simulator = parse_simulator(require(j, "simulator", path), join_path(path, "simulator"));
    if (const Json* s = find(j, "space")) c.space = parse_space(*s, join_path(path, "space"));
    if (const Json* l = find(j, "response_label")) c.response_label = as_string(*l, join_path(path, "response_label"));
    if (const Json* r = find(j, "n0_rule")) c.n0_rule = parse_n0_rule(*r, join_path(path, "n0_rule"));
    if (const Json* p = find(j, "pool")) c.pool = parse_pool(*p, join_path(path, "pool"));
    if (const Json* f = find(j, "failure_policy")) {
        const std::string fp = join_path(path, "failure_policy");
        c.simulator.failure_policy = wrap(fp, [&] { return parse_failure_policy(as_string(*f, fp)); });
    }
    if (c.simulator.kind == SimulatorKind::analytic && c.space)
        fail(join_path(path, "space"), "analytic simulators define their own space");
    if (c.simulator.kind == SimulatorKind::command && !c.space)
        fail(join_path(path, "space"), "command simulators need an explicit space");
    return c;
}

KernelConfig parse_kernel(const Json& j, const std::string& path) {
    KernelConfig k;
    if (j.is_string()) {
        k.kind = wrap(path, [&] { return parse_kernel_kind(j.get<std::string>()); });
        return k;
    }
    check_object(j, path, {"kind", "length_scale", "sigma0", "length_scale_bounds", "sigma0_bounds"});
    if (const Json* v = find(j, "kind")) {
        const std::string p = join_path(path, "kind");
        k.kind = wrap(p, [&] { return parse_kernel_kind(as_string(*v, p)); });
    }
    if (const Json* v = find(j, "length_scale")) k.length_scale = as_number(*v, join_path(path, "length_scale"));
    if (const Json* v = find(j, "sigma0")) k.sigma0 = as_number(*v, join_path(path, "sigma0"));
    auto bounds = [&](const char* key, std::pair<double, double>& out) {
        const Json* v = find(j, key);
        if (!v) return;
        const std::string p = join_path(path, key);
        if (!v->is_array() || v->size() != 2) fail(p, "expected [lower, upper]");
        out = {as_number((*v)[0], index_path(p, 0)), as_number((*v)[1], index_path(p, 1))};
    };
    bounds("length_scale_bounds", k.length_scale_bounds);
    bounds("sigma0_bounds", k.sigma0_bounds);
    wrap(path, [&] { k.validate(); });
    return k;
}

std::vector<StrategyKind> parse_strategies(const Json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of strategies");
    std::vector<StrategyKind> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string p = index_path(path, i);
        const StrategyKind s = wrap(p, [&] { return parse_strategy(as_string(j[i], p)); });
        if (std::find(out.begin(), out.end(), s) != out.end()) fail(p, "duplicate strategy '" + to_token(s) + "'");
        out.push_back(s);
    }
    return out;
}

Json strategies_json(const std::vector<StrategyKind>& s) {
    Json out = Json::array();
    for (auto k : s) out.push_back(to_token(k));
    return out;
}

ModelConfig parse_model(const Json& j, const std::string& path) {
    if (j.is_string()) {
        ModelConfig m;
        m.kind = wrap(path, [&] { return parse_model_kind(j.get<std::string>()); });
        m.name = to_string(m.kind);
        return m;
    }
    if (!j.is_object()) fail(path, "expected a model kind or an object");
    ModelConfig m;
    const std::string kp = join_path(path, "kind");
    m.kind = wrap(kp, [&] { return parse_model_kind(as_string(require(j, "kind", path), kp)); });
    switch (m.kind) {
    case ModelKind::linear: check_object(j, path, {"kind", "name", "strategies"}); break;
    case ModelKind::gp: check_object(j, path, {"kind", "name", "strategies", "kernel", "optimize"}); break;
    case ModelKind::forest: check_object(j, path, {"kind", "name", "strategies", "n_trees", "min_samples_split"}); break;
    case ModelKind::svr: check_object(j, path, {"kind", "name", "strategies", "C", "epsilon", "gamma"}); break;
    case ModelKind::mlp:
        check_object(j, path, {"kind", "name", "strategies", "hidden", "epochs", "learning_rate", "l2"});
        break;
    }
    m.name = to_string(m.kind);
    if (const Json* n = find(j, "name")) {
        m.name = as_string(*n, join_path(path, "name"));
        if (!safe_name(m.name)) fail(join_path(path, "name"), "names may use letters, digits, '_', '-' and '.' only");
    }
    if (const Json* s = find(j, "strategies")) m.strategies = parse_strategies(*s, join_path(path, "strategies"));
    auto positive = [&](const char* key, double& out) {
        if (const Json* v = find(j, key)) {
            out = as_number(*v, join_path(path, key));
            if (!(out > 0)) fail(join_path(path, key), "must be > 0");
        }
    };
    if (const Json* k = find(j, "kernel")) m.fit.kernel = parse_kernel(*k, join_path(path, "kernel"));
    if (const Json* o = find(j, "optimize")) m.fit.gp.optimize = as_bool(*o, join_path(path, "optimize"));
    if (const Json* v = find(j, "n_trees")) m.fit.forest.n_trees = as_int_at_least(*v, join_path(path, "n_trees"), 1);
    if (const Json* v = find(j, "min_samples_split"))
        m.fit.forest.min_samples_split = as_int_at_least(*v, join_path(path, "min_samples_split"), 2);
    positive("C", m.fit.svr.C);
    if (const Json* v = find(j, "epsilon")) {
        m.fit.svr.epsilon = as_number(*v, join_path(path, "epsilon"));
        if (!(m.fit.svr.epsilon >= 0)) fail(join_path(path, "epsilon"), "must be >= 0");
    }
    positive("gamma", m.fit.svr.gamma);
    if (const Json* v = find(j, "hidden")) m.fit.mlp.hidden = as_int_at_least(*v, join_path(path, "hidden"), 1);
    if (const Json* v = find(j, "epochs")) m.fit.mlp.epochs = as_int_at_least(*v, join_path(path, "epochs"), 1);
    positive("learning_rate", m.fit.mlp.learning_rate);
    if (const Json* v = find(j, "l2")) {
        m.fit.mlp.l2 = as_number(*v, join_path(path, "l2"));
        if (!(m.fit.mlp.l2 >= 0)) fail(join_path(path, "l2"), "must be >= 0");
    }
    return m;
}

Json model_json(const ModelConfig& m) {
    Json out{{"kind", to_string(m.kind)}, {"name", m.name}};
    out["strategies"] = m.strategies ? strategies_json(*m.strategies) : Json(nullptr);
    switch (m.kind) {
    case ModelKind::linear: break;
    case ModelKind::gp:
        out["kernel"] = to_json(m.fit.kernel);
        out["optimize"] = m.fit.gp.optimize;
        break;
    case ModelKind::forest:
        out["n_trees"] = m.fit.forest.n_trees;
        out["min_samples_split"] = m.fit.forest.min_samples_split;
        break;
    case ModelKind::svr:
        out["C"] = m.fit.svr.C;
        out["epsilon"] = m.fit.svr.epsilon;
        out["gamma"] = m.fit.svr.gamma;
        break;
    case ModelKind::mlp:
        out["hidden"] = m.fit.mlp.hidden;
        out["epochs"] = m.fit.mlp.epochs;
        out["learning_rate"] = m.fit.mlp.learning_rate;
        out["l2"] = m.fit.mlp.l2;
        break;
    }
    return out;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

} // namespace

CampaignConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    check_object(j, "", {"cases", "models", "strategies", "n_queries", "n_reps", "n_e", "base_seed", "output_dir",
                         "query_marks", "cap"});
    CampaignConfig c;
    c.base_dir = base_dir;

    const Json& cases = require(j, "cases", "");
    if (!cases.is_array() || cases.empty()) fail("cases", "expected a non-empty array");
    std::set<std::string> names;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        c.cases.push_back(parse_case(cases[i], index_path("cases", i)));
        if (!names.insert(c.cases.back().name).second)
            fail(index_path("cases", i) + ".name", "duplicate case name '" + c.cases.back().name + "'");
    }

    const Json& models = require(j, "models", "");
    if (!models.is_array() || models.empty()) fail("models", "expected a non-empty array");
    names.clear();
    for (std::size_t i = 0; i < models.size(); ++i) {
        c.models.push_back(parse_model(models[i], index_path("models", i)));
        if (!names.insert(c.models.back().name).second)
            fail(index_path("models", i) + ".name", "duplicate model name '" + c.models.back().name + "'");
    }

    if (const Json* s = find(j, "strategies")) c.strategies = parse_strategies(*s, "strategies");
    c.n_queries = as_int_at_least(require(j, "n_queries", ""), "n_queries", 1);
    if (const Json* v = find(j, "n_reps")) c.n_reps = as_int_at_least(*v, "n_reps", 1);
    if (const Json* v = find(j, "n_e")) c.n_e = as_int_at_least(*v, "n_e", 1);
    if (const Json* v = find(j, "base_seed")) {
        if (!v->is_number_unsigned()) fail("base_seed", "expected a non-negative integer");
        c.base_seed = v->get<std::uint64_t>();
    }
    if (const Json* v = find(j, "output_dir")) c.output_dir = as_string(*v, "output_dir");
    if (const Json* v = find(j, "cap")) {
        c.cap = as_number(*v, "cap");
        if (!(c.cap > 0)) fail("cap", "must be > 0");
    }
    if (const Json* v = find(j, "query_marks")) {
        if (!v->is_array() || v->empty()) fail("query_marks", "expected a non-empty array of integers");
        c.query_marks.clear();
        for (std::size_t i = 0; i < v->size(); ++i) {
            const std::string p = index_path("query_marks", i);
            const int q = as_int_at_least((*v)[i], p, 1);
            if (q > c.n_queries) fail(p, "mark " + std::to_string(q) + " exceeds n_queries");
            if (!c.query_marks.empty() && q <= c.query_marks.back()) fail(p, "marks must be strictly increasing");
            c.query_marks.push_back(q);
        }
    } else {
        // Default marks beyond the budget are dropped; a short budget reports its last step.
        std::erase_if(c.query_marks, [&](int q) { return q > c.n_queries; });
        if (c.query_marks.empty()) c.query_marks.push_back(c.n_queries);
    }

    for (std::size_t i = 0; i < c.models.size(); ++i) {
        const ModelConfig& m = c.models[i];
        if (!m.strategies && c.strategies.empty())
            fail(index_path("models", i), "no strategies: set 'strategies' at the top level or on the model");
        const auto& list = c.strategies_for(m);
        for (std::size_t k = 0; k < list.size(); ++k) {
            const std::string p = m.strategies ? index_path(index_path("models", i) + ".strategies", k)
                                               : index_path("strategies", k);
            wrap(p, [&] { check_compatible(list[k], m.kind); });
        }
    }
    return c;
}

CampaignConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open config '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path.parent_path());
}

Json CampaignConfig::canonical() const {
    Json out;
    Json cs = Json::array();
    for (const auto& c : cases) {
        Json cj{{"name", c.name},
                {"simulator", simulator_json(c.simulator)},
                {"response_label", c.response_label},
                {"n0_rule", n0_rule_json(c.n0_rule)},
                {"failure_policy", to_string(c.simulator.failure_policy)}};
        cj["space"] = c.space ? space_json(*c.space) : Json(nullptr);
        cj["pool"] = c.pool ? pool_json(*c.pool) : Json(nullptr);
        cs.push_back(std::move(cj));
    }
    Json ms = Json::array();
    for (const auto& m : models) ms.push_back(model_json(m));
    out["cases"] = std::move(cs);
    out["models"] = std::move(ms);
    out["strategies"] = strategies_json(strategies);
    out["n_queries"] = n_queries;
    out["n_reps"] = n_reps;
    out["n_e"] = n_e;
    out["base_seed"] = base_seed;
    out["query_marks"] = query_marks;
    out["cap"] = cap;
    return out;
}

std::string CampaignConfig::hash() const { return hex64(fnv1a64(canonical().dump())); }

std::uint64_t cell_seed(std::uint64_t base_seed, const std::string& case_name, const std::string& model_name,
                        StrategyKind strategy, int rep) {
    return base_seed + fnv1a64(case_name + "|" + model_name + "|" + to_token(strategy)) + static_cast<std::uint64_t>(rep);
}

std::uint64_t test_set_seed(std::uint64_t base_seed, const std::string& case_name) {
    return base_seed + fnv1a64("test|" + case_name);
}

std::uint64_t pool_seed(std::uint64_t base_seed, const std::string& case_name) {
    return base_seed + fnv1a64("pool|" + case_name);
}

// ---------------------------------------------------------------------------
// Execution

namespace {

struct PreparedCase {
    const CaseConfig* config = nullptr;
    std::optional<Simulator> sim;
    std::optional<CandidatePool> pool;  // fresh template, copied per run
    Index n0 = 0;
    std::optional<TestSet> test_set;
    std::string failure;  // test-set construction error, if any
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

std::vector<PreparedCase> prepare(const CampaignConfig& config) {
    std::vector<PreparedCase> out;
    for (std::size_t i = 0; i < config.cases.size(); ++i) {
        const CaseConfig& c = config.cases[i];
        const std::string path = index_path("cases", i);
        PreparedCase pc;
        pc.config = &c;
        SimulatorSpec spec = c.simulator;
        if (spec.kind == SimulatorKind::table) spec.table_path = resolve(config.base_dir, spec.table_path).string();
        if (spec.kind == SimulatorKind::command && spec.command[0].find('/') != std::string::npos)
            spec.command[0] = resolve(config.base_dir, spec.command[0]).string();
        pc.sim = wrap(path + ".simulator", [&] { return make_simulator(spec, c.space, c.response_label); });
        const ParameterSpace& space = pc.sim->space();
        PoolSpec ps = c.pool ? *c.pool : default_pool_spec(space.size(), pool_seed(config.base_seed, c.name));
        pc.pool = wrap(path + ".pool", [&] { return build_pool(space, ps); });
        pc.n0 = default_initial_count(c.n0_rule, static_cast<int>(space.size()));
        if (pc.n0 + config.n_queries > pc.pool->size())
            fail(path, "n0 + n_queries = " + std::to_string(pc.n0 + config.n_queries) + " exceeds the pool size " +
                           std::to_string(pc.pool->size()));
        out.push_back(std::move(pc));
    }
    return out;
}

struct Cell {
    std::size_t case_index = 0;
    std::size_t model_index = 0;
    StrategyKind strategy = StrategyKind::random;
    int rep = 0;
    std::uint64_t seed = 0;
};

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

} // namespace

void validate_campaign(const CampaignConfig& config) { (void)prepare(config); }

CampaignResult run_campaign(const CampaignConfig& config, int jobs, const ProgressFn& progress) {
    std::vector<PreparedCase> cases = prepare(config);
    const std::filesystem::path dir(config.output_dir);

    std::vector<Cell> cells;
    for (std::size_t ci = 0; ci < config.cases.size(); ++ci)
        for (std::size_t mi = 0; mi < config.models.size(); ++mi)
            for (StrategyKind s : config.strategies_for(config.models[mi]))
                for (int rep = 0; rep < config.n_reps; ++rep)
                    cells.push_back({ci, mi, s, rep,
                                     cell_seed(config.base_seed, config.cases[ci].name, config.models[mi].name, s, rep)});

    for (auto& pc : cases) {
        try {
            pc.test_set = build_test_set(pc.sim->space(), *pc.sim, config.n_e, test_set_seed(config.base_seed, pc.config->name));
        } catch (const QueryFailure& e) {
            pc.failure = std::string("test set: ") + e.what();
        }
    }

    std::vector<std::optional<ErrorCurve>> curves(cells.size());
    std::vector<std::optional<CellFailure>> failures(cells.size());
    std::mutex write_mutex;
    std::atomic<std::size_t> next{0}, done{0};

    auto work = [&] {
        for (std::size_t k = next++; k < cells.size(); k = next++) {
            const Cell& cell = cells[k];
            const PreparedCase& pc = cases[cell.case_index];
            const ModelConfig& mc = config.models[cell.model_index];
            try {
                if (!pc.failure.empty()) throw Error(pc.failure);
                RunConfig rc;
                rc.strategy = cell.strategy;
                rc.model_kind = mc.kind;
                rc.fit = mc.fit;
                rc.n0 = pc.n0;
                rc.n_queries = config.n_queries;
                rc.seed = cell.seed;
                rc.failure_policy = pc.config->simulator.failure_policy;
                rc.trace_errors = true;
                CandidatePool pool = *pc.pool;
                const RunTrace trace = run_active_learning(pc.sim->space(), pool, *pc.sim, rc, &*pc.test_set);
                Json doc = to_json(trace, pool);
                doc["cell"] = {{"case", pc.config->name},
                               {"model", mc.name},
                               {"strategy", to_token(cell.strategy)},
                               {"rep", cell.rep}};
                const auto path = dir / "runs" / pc.config->name / mc.name / to_token(cell.strategy) /
                                  ("rep" + std::to_string(cell.rep) + ".json");
                {
                    std::lock_guard lock(write_mutex);
                    write_file(path, doc.dump(1) + "\n");
                }
                curves[k] = error_curve(trace, pc.config->name, mc.name, cell.strategy, cell.rep);
            } catch (const std::exception& e) {
                failures[k] = CellFailure{pc.config->name, mc.name, to_token(cell.strategy), cell.rep, e.what()};
            }
            const std::size_t n = ++done;
            if (progress) {
                std::lock_guard lock(write_mutex);
                progress(n, cells.size());
            }
        }
    };
    const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(cells.size())));
    if (n_threads == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    CampaignResult result;
    result.dir = dir;
    std::vector<ErrorCurve> ok;
    for (auto& c : curves)
        if (c) ok.push_back(std::move(*c));
    result.n_traces = ok.size();
    for (auto& f : failures)
        if (f) result.failures.push_back(std::move(*f));
    result.summary = write_report(ok, config.query_marks, dir, config.cap);

    Json seeds = Json::array();
    for (const Cell& cell : cells)
        seeds.push_back({{"case", config.cases[cell.case_index].name},
                         {"model", config.models[cell.model_index].name},
                         {"strategy", to_token(cell.strategy)},
                         {"rep", cell.rep},
                         {"seed", cell.seed}});
    Json test_seeds = Json::object();
    for (const auto& c : config.cases) test_seeds[c.name] = test_set_seed(config.base_seed, c.name);
    Json manifest{{"tool", "salbench"},
                  {"tool_version", kToolVersion},
                  {"config_hash", config.hash()},
                  {"config", config.canonical()},
                  {"test_set_seeds", test_seeds},
                  {"run_seeds", seeds},
                  {"n_traces", result.n_traces},
                  {"n_failures", result.failures.size()}};
    write_file(dir / "manifest.json", manifest.dump(1) + "\n");

    const auto failures_path = dir / "failures.json";
    if (result.failures.empty()) {
        std::filesystem::remove(failures_path);
    } else {
        Json fj = Json::array();
        for (const auto& f : result.failures)
            fj.push_back({{"case", f.case_name}, {"model", f.model}, {"strategy", f.strategy}, {"rep", f.rep},
                          {"error", f.message}});
        write_file(failures_path, fj.dump(1) + "\n");
    }
    return result;
}

} // namespace sal
