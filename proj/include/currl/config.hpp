#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "currl/agent.hpp"
#include "currl/cartpole.hpp"
#include "currl/grid.hpp"
#include "currl/selectors.hpp"

namespace currl {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class Domain { Maze, GridWorld, CartPole };

std::string_view domain_name(Domain d);

// How one training task is derived for the grid domains: an explicit layout
// file, a rectangular shrink of the target maze, or a moved start cell.
struct SourceSpec {
    std::optional<std::string> layout_path;
    std::optional<std::array<int, 4>> shrink;  // top, left, bottom, right
    std::optional<Cell> start;

    friend bool operator==(const SourceSpec&, const SourceSpec&) = default;
};

struct CartPoleTaskSpec {
    double x_bound = 2.4;
    double angle_deg = 30.0;

    friend bool operator==(const CartPoleTaskSpec&, const CartPoleTaskSpec&) = default;
};

struct CartPoleSetup {
    CartPoleTaskSpec target;
    std::vector<CartPoleTaskSpec> sources;
    double cart_mass = 1.0;
    double pole_mass = 0.1;
    double pole_half_length = 0.5;
    double force_magnitude = 10.0;
    double gravity = 9.8;
    double dt = 0.02;
    int step_cap = 500;
    std::array<int, 4> bins{6, 6, 12, 6};

    friend bool operator==(const CartPoleSetup&, const CartPoleSetup&) = default;
};

struct ActiveSettings {
    int measure_budget = 1;              // b: probes per Active-RMGS step
    std::optional<int> pair_budget;      // p: pairs Active-LTMS measures (default: all)
    std::optional<double> prune_value;   // rho
    std::optional<double> diversity_threshold;
    double feature_epsilon = 1e-6;

    friend bool operator==(const ActiveSettings&, const ActiveSettings&) = default;
};

struct ExperimentConfig {
    Domain domain = Domain::Maze;
    std::vector<SelectorKind> selectors{SelectorKind::Baseline};
    std::string target_layout;       // grid domains: path to the layout file
    std::vector<SourceSpec> sources; // grid domains
    CartPoleSetup cartpole;          // cart-pole domain

    AgentConfig agent;
    std::uint64_t probe_steps = 200;
    std::uint64_t measure_steps = 300;
    std::uint64_t probe_train_cap = 20000;
    StopRule stage_stop = StopRule::until_convergence();
    StopRule target_stop = StopRule::until_convergence();
    std::optional<std::uint64_t> total_budget;
    ActiveSettings active;
    std::uint64_t episode_budget = 220;

    int n_runs = 30;
    std::uint64_t master_seed = 1;
    std::string out_dir = "out";
    int jobs = 1;  // 0 = all hardware threads
    std::vector<TaskId> permutation;  // for the fixed selector
    int enumerate_cap = 6;            // refuse enumeration beyond this many tasks
    bool dump_transfer_matrices = false;

    std::filesystem::path base_dir;  // directory the config was loaded from

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

bool operator==(const StopRule& a, const StopRule& b);
bool operator==(const AgentConfig& a, const AgentConfig& b);

// Parses and validates a JSON experiment config. Unknown fields are errors;
// messages name the offending field and the violated constraint.
ExperimentConfig parse_config(const std::filesystem::path& path);
ExperimentConfig parse_config_text(const std::string& text,
                                   const std::filesystem::path& base_dir);
std::string serialize_config(const ExperimentConfig& config);

// Resolves a possibly relative path against the config's directory.
std::filesystem::path resolve_path(const ExperimentConfig& config, const std::string& path);

}  // namespace currl
