#include "currl/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace currl {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& constraint) {
    throw ConfigError("config field `" + field + "`: " + constraint);
}

void expect_keys(const json& j, const std::string& where,
                 const std::set<std::string>& known) {
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) {
            throw ConfigError("config: unknown field `" +
                              (where.empty() ? key : where + "." + key) + "`");
        }
    }
}

template <typename T>
T get_or(const json& j, const std::string& field, T fallback) {
    if (!j.contains(field)) {
        return fallback;
    }
    try {
        return j.at(field).get<T>();
    } catch (const json::exception&) {
        fail(field, "has the wrong type");
    }
}

StopRule parse_stop_rule(const json& j, const std::string& field) {
    if (j.is_string()) {
        if (j.get<std::string>() == "until_convergence") {
            return StopRule::until_convergence();
        }
        fail(field, "must be \"until_convergence\" or an object like {\"fixed_steps\": n}");
    }
    if (j.is_object() && j.size() == 1) {
        const auto& [key, value] = *j.items().begin();
        if (!value.is_number_unsigned()) {
            fail(field, "step/episode count must be a non-negative integer");
        }
        const auto n = value.get<std::uint64_t>();
        if (key == "fixed_steps") return StopRule::fixed_steps(n);
        if (key == "step_budget") return StopRule::step_budget(n);
        if (key == "fixed_episodes") return StopRule::fixed_episodes(n);
    }
    fail(field, "must be \"until_convergence\", {\"fixed_steps\": n}, "
                "{\"step_budget\": n} or {\"fixed_episodes\": n}");
}

json stop_rule_to_json(const StopRule& rule) {
    switch (rule.kind) {
        case StopRule::Kind::UntilConvergence: return "until_convergence";
        case StopRule::Kind::FixedSteps: return json{{"fixed_steps", rule.limit}};
        case StopRule::Kind::StepBudget: return json{{"step_budget", rule.limit}};
        case StopRule::Kind::FixedEpisodes: return json{{"fixed_episodes", rule.limit}};
    }
    return nullptr;
}

AgentConfig parse_agent(const json& j) {
    expect_keys(j, "agent",
                {"alpha", "gamma", "epsilon0", "epsilon_decay", "epsilon_floor",
                 "convergence_window", "convergence_delta"});
    AgentConfig agent;
    agent.alpha = get_or(j, "alpha", agent.alpha);
    agent.gamma = get_or(j, "gamma", agent.gamma);
    agent.epsilon0 = get_or(j, "epsilon0", agent.epsilon0);
    agent.epsilon_decay = get_or(j, "epsilon_decay", agent.epsilon_decay);
    agent.epsilon_floor = get_or(j, "epsilon_floor", agent.epsilon_floor);
    agent.convergence_window = get_or(j, "convergence_window", agent.convergence_window);
    agent.convergence_delta = get_or(j, "convergence_delta", agent.convergence_delta);
    try {
        agent.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config field `agent`: ") + e.what());
    }
    return agent;
}

SourceSpec parse_source(const json& j, int index) {
    const std::string where = "sources[" + std::to_string(index) + "]";
    expect_keys(j, where, {"layout", "shrink", "start"});
    SourceSpec spec;
    int forms = 0;
    if (j.contains("layout")) {
        spec.layout_path = j.at("layout").get<std::string>();
        ++forms;
    }
    if (j.contains("shrink")) {
        const auto v = j.at("shrink").get<std::vector<int>>();
        if (v.size() != 4) {
            fail(where + ".shrink", "must be [top, left, bottom, right]");
        }
        spec.shrink = std::array<int, 4>{v[0], v[1], v[2], v[3]};
        ++forms;
    }
    if (j.contains("start")) {
        const auto v = j.at("start").get<std::vector<int>>();
        if (v.size() != 2) {
            fail(where + ".start", "must be [row, col]");
        }
        spec.start = Cell{v[0], v[1]};
        ++forms;
    }
    if (forms != 1) {
        fail(where, "must define exactly one of layout, shrink, start");
    }
    return spec;
}

CartPoleSetup parse_cartpole(const json& j) {
    expect_keys(j, "cartpole",
                {"target", "sources", "cart_mass", "pole_mass", "pole_half_length",
                 "force_magnitude", "gravity", "dt", "step_cap", "bins"});
    CartPoleSetup setup;
    const auto parse_task = [](const json& t, const std::string& where) {
        expect_keys(t, where, {"x_bound", "angle_deg"});
        CartPoleTaskSpec spec;
        if (!t.contains("x_bound") || !t.contains("angle_deg")) {
            fail(where, "needs x_bound and angle_deg");
        }
        spec.x_bound = t.at("x_bound").get<double>();
        spec.angle_deg = t.at("angle_deg").get<double>();
        return spec;
    };
    if (!j.contains("target")) {
        fail("cartpole.target", "is required");
    }
    setup.target = parse_task(j.at("target"), "cartpole.target");
    if (j.contains("sources")) {
        int i = 0;
        for (const auto& t : j.at("sources")) {
            setup.sources.push_back(
                parse_task(t, "cartpole.sources[" + std::to_string(i++) + "]"));
        }
    }
    setup.cart_mass = get_or(j, "cart_mass", setup.cart_mass);
    setup.pole_mass = get_or(j, "pole_mass", setup.pole_mass);
    setup.pole_half_length = get_or(j, "pole_half_length", setup.pole_half_length);
    setup.force_magnitude = get_or(j, "force_magnitude", setup.force_magnitude);
    setup.gravity = get_or(j, "gravity", setup.gravity);
    setup.dt = get_or(j, "dt", setup.dt);
    setup.step_cap = get_or(j, "step_cap", setup.step_cap);
    if (j.contains("bins")) {
        const auto v = j.at("bins").get<std::vector<int>>();
        if (v.size() != 4) {
            fail("cartpole.bins", "must be [x, v, theta, omega] bin counts");
        }
        setup.bins = {v[0], v[1], v[2], v[3]};
    }
    return setup;
}

ActiveSettings parse_active(const json& j) {
    expect_keys(j, "active",
                {"measure_budget", "pair_budget", "prune_value", "diversity_threshold",
                 "feature_epsilon"});
    ActiveSettings settings;
    settings.measure_budget = get_or(j, "measure_budget", settings.measure_budget);
    if (settings.measure_budget < 1) {
        fail("active.measure_budget", "must be >= 1");
    }
    if (j.contains("pair_budget")) {
        settings.pair_budget = j.at("pair_budget").get<int>();
    }
    if (j.contains("prune_value") && !j.at("prune_value").is_null()) {
        settings.prune_value = j.at("prune_value").get<double>();
    }
    if (j.contains("diversity_threshold") && !j.at("diversity_threshold").is_null()) {
        settings.diversity_threshold = j.at("diversity_threshold").get<double>();
    }
    settings.feature_epsilon = get_or(j, "feature_epsilon", settings.feature_epsilon);
    if (settings.feature_epsilon <= 0.0) {
        fail("active.feature_epsilon", "must be positive");
    }
    return settings;
}

}  // namespace

std::string_view domain_name(Domain d) {
    switch (d) {
        case Domain::Maze: return "maze";
        case Domain::GridWorld: return "gridworld";
        case Domain::CartPole: return "cartpole";
    }
    return "unknown";
}

bool operator==(const StopRule& a, const StopRule& b) {
    return a.kind == b.kind && a.limit == b.limit;
}

bool operator==(const AgentConfig& a, const AgentConfig& b) {
    return a.alpha == b.alpha && a.gamma == b.gamma && a.epsilon0 == b.epsilon0 &&
           a.epsilon_decay == b.epsilon_decay && a.epsilon_floor == b.epsilon_floor &&
           a.convergence_window == b.convergence_window &&
           a.convergence_delta == b.convergence_delta;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path.parent_path());
}

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::filesystem::path& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    expect_keys(j, "",
                {"domain", "selectors", "selector", "target_layout", "sources",
                 "cartpole", "agent", "probe_steps", "measure_steps", "probe_train_cap",
                 "stage_stop", "target_stop", "total_budget", "active", "episode_budget",
                 "n_runs", "master_seed", "out_dir", "jobs", "permutation",
                 "enumerate_cap", "dump_transfer_matrices"});

    ExperimentConfig config;
    config.base_dir = base_dir;

    if (!j.contains("domain")) {
        fail("domain", "is required (maze, gridworld or cartpole)");
    }
    const auto domain = j.at("domain").get<std::string>();
    if (domain == "maze") {
        config.domain = Domain::Maze;
    } else if (domain == "gridworld") {
        config.domain = Domain::GridWorld;
    } else if (domain == "cartpole") {
        config.domain = Domain::CartPole;
    } else {
        fail("domain", "must be maze, gridworld or cartpole");
    }

    config.selectors.clear();
    if (j.contains("selector") && j.contains("selectors")) {
        fail("selector", "give either `selector` or `selectors`, not both");
    }
    std::vector<std::string> names;
    if (j.contains("selector")) {
        names.push_back(j.at("selector").get<std::string>());
    } else if (j.contains("selectors")) {
        names = j.at("selectors").get<std::vector<std::string>>();
    } else {
        names = {"baseline"};
    }
    for (const auto& name : names) {
        const auto kind = selector_from_name(name);
        if (!kind) {
            fail("selectors", "unknown selector `" + name + "`");
        }
        config.selectors.push_back(*kind);
    }
    if (config.selectors.empty()) {
        fail("selectors", "must name at least one selector");
    }

    if (config.domain != Domain::CartPole) {
        if (!j.contains("target_layout")) {
            fail("target_layout", "is required for grid domains");
        }
        config.target_layout = j.at("target_layout").get<std::string>();
        if (j.contains("sources")) {
            int i = 0;
            for (const auto& s : j.at("sources")) {
                config.sources.push_back(parse_source(s, i++));
            }
        }
    } else {
        if (!j.contains("cartpole")) {
            fail("cartpole", "is required for the cartpole domain");
        }
        config.cartpole = parse_cartpole(j.at("cartpole"));
    }

    if (j.contains("agent")) {
        config.agent = parse_agent(j.at("agent"));
    }
    config.probe_steps = get_or<std::uint64_t>(j, "probe_steps", config.probe_steps);
    config.measure_steps = get_or<std::uint64_t>(j, "measure_steps", config.measure_steps);
    config.probe_train_cap =
        get_or<std::uint64_t>(j, "probe_train_cap", config.probe_train_cap);
    if (j.contains("stage_stop")) {
        config.stage_stop = parse_stop_rule(j.at("stage_stop"), "stage_stop");
    }
    if (j.contains("target_stop")) {
        config.target_stop = parse_stop_rule(j.at("target_stop"), "target_stop");
    }
    if (j.contains("total_budget") && !j.at("total_budget").is_null()) {
        config.total_budget = j.at("total_budget").get<std::uint64_t>();
        if (*config.total_budget == 0) {
            fail("total_budget", "must be positive (or null for unbounded)");
        }
    }
    if (j.contains("active")) {
        config.active = parse_active(j.at("active"));
    }
    config.episode_budget = get_or<std::uint64_t>(j, "episode_budget", config.episode_budget);
    config.n_runs = get_or(j, "n_runs", config.n_runs);
    if (config.n_runs < 1) {
        fail("n_runs", "must be >= 1");
    }
    config.master_seed = get_or<std::uint64_t>(j, "master_seed", config.master_seed);
    config.out_dir = get_or<std::string>(j, "out_dir", config.out_dir);
    config.jobs = get_or(j, "jobs", config.jobs);
    if (config.jobs < 0) {
        fail("jobs", "must be >= 0 (0 = all hardware threads)");
    }
    if (j.contains("permutation")) {
        config.permutation = j.at("permutation").get<std::vector<TaskId>>();
    }
    config.enumerate_cap = get_or(j, "enumerate_cap", config.enumerate_cap);
    config.dump_transfer_matrices =
        get_or(j, "dump_transfer_matrices", config.dump_transfer_matrices);

    const int task_count = config.domain == Domain::CartPole
                               ? static_cast<int>(config.cartpole.sources.size())
                               : static_cast<int>(config.sources.size());
    for (TaskId t : config.permutation) {
        if (t < 0 || t >= task_count) {
            fail("permutation", "task index out of range");
        }
    }
    for (SelectorKind kind : config.selectors) {
        if (kind == SelectorKind::Fixed &&
            static_cast<int>(config.permutation.size()) != task_count) {
            fail("permutation", "the fixed selector needs a full permutation of the tasks");
        }
    }
    return config;
}

std::string serialize_config(const ExperimentConfig& config) {
    json j;
    j["domain"] = std::string(domain_name(config.domain));
    std::vector<std::string> names;
    for (SelectorKind kind : config.selectors) {
        names.emplace_back(selector_name(kind));
    }
    j["selectors"] = names;
    if (config.domain != Domain::CartPole) {
        j["target_layout"] = config.target_layout;
        json sources = json::array();
        for (const SourceSpec& s : config.sources) {
            json e = json::object();
            if (s.layout_path) e["layout"] = *s.layout_path;
            if (s.shrink) e["shrink"] = std::vector<int>(s.shrink->begin(), s.shrink->end());
            if (s.start) e["start"] = std::vector<int>{s.start->row, s.start->col};
            sources.push_back(e);
        }
        j["sources"] = sources;
    } else {
        json cp;
        cp["target"] = {{"x_bound", config.cartpole.target.x_bound},
                        {"angle_deg", config.cartpole.target.angle_deg}};
        json sources = json::array();
        for (const CartPoleTaskSpec& s : config.cartpole.sources) {
            sources.push_back({{"x_bound", s.x_bound}, {"angle_deg", s.angle_deg}});
        }
        cp["sources"] = sources;
        cp["cart_mass"] = config.cartpole.cart_mass;
        cp["pole_mass"] = config.cartpole.pole_mass;
        cp["pole_half_length"] = config.cartpole.pole_half_length;
        cp["force_magnitude"] = config.cartpole.force_magnitude;
        cp["gravity"] = config.cartpole.gravity;
        cp["dt"] = config.cartpole.dt;
        cp["step_cap"] = config.cartpole.step_cap;
        cp["bins"] = std::vector<int>(config.cartpole.bins.begin(), config.cartpole.bins.end());
        j["cartpole"] = cp;
    }
    j["agent"] = {{"alpha", config.agent.alpha},
                  {"gamma", config.agent.gamma},
                  {"epsilon0", config.agent.epsilon0},
                  {"epsilon_decay", config.agent.epsilon_decay},
                  {"epsilon_floor", config.agent.epsilon_floor},
                  {"convergence_window", config.agent.convergence_window},
                  {"convergence_delta", config.agent.convergence_delta}};
    j["probe_steps"] = config.probe_steps;
    j["measure_steps"] = config.measure_steps;
    j["probe_train_cap"] = config.probe_train_cap;
    j["stage_stop"] = stop_rule_to_json(config.stage_stop);
    j["target_stop"] = stop_rule_to_json(config.target_stop);
    if (config.total_budget) {
        j["total_budget"] = *config.total_budget;
    }
    json active;
    active["measure_budget"] = config.active.measure_budget;
    if (config.active.pair_budget) active["pair_budget"] = *config.active.pair_budget;
    if (config.active.prune_value) active["prune_value"] = *config.active.prune_value;
    if (config.active.diversity_threshold) {
        active["diversity_threshold"] = *config.active.diversity_threshold;
    }
    active["feature_epsilon"] = config.active.feature_epsilon;
    j["active"] = active;
    j["episode_budget"] = config.episode_budget;
    j["n_runs"] = config.n_runs;
    j["master_seed"] = config.master_seed;
    j["out_dir"] = config.out_dir;
    j["jobs"] = config.jobs;
    if (!config.permutation.empty()) {
        j["permutation"] = config.permutation;
    }
    j["enumerate_cap"] = config.enumerate_cap;
    j["dump_transfer_matrices"] = config.dump_transfer_matrices;
    return j.dump(2) + "\n";
}

std::filesystem::path resolve_path(const ExperimentConfig& config,
                                   const std::string& path) {
    const std::filesystem::path p(path);
    return p.is_absolute() ? p : config.base_dir / p;
}

}  // namespace currl
