#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "currl/agent.hpp"
#include "currl/selectors.hpp"

namespace currl {

// Step accounting for one run. Every environment step lands in exactly one
// bucket: preprocessing, per-stage selection or training, or the target
// phase. g() is the curriculum overhead spent before target training.
struct BudgetLedger {
    std::optional<std::uint64_t> total_budget;
    std::uint64_t preprocess_tau = 0;
    std::vector<std::uint64_t> select_taus;  // one per selector decision
    std::vector<std::uint64_t> train_taus;   // one per trained stage
    std::uint64_t target_steps = 0;

    std::uint64_t g() const {
        std::uint64_t total = preprocess_tau;
        for (std::uint64_t t : select_taus) total += t;
        for (std::uint64_t t : train_taus) total += t;
        return total;
    }
    std::uint64_t grand_total() const { return g() + target_steps; }
};

struct StageLog {
    TaskId task = -1;
    bool skipped = false;
    std::uint64_t select_tau = 0;
    std::uint64_t train_steps = 0;
    double train_reward = 0.0;
    std::vector<EpisodeStat> episodes;
};

struct RunResult {
    Agent agent;
    std::vector<TaskId> curriculum;  // trained tasks, in order (skips excluded)
    std::vector<StageLog> stages;    // every decision, including skips
    BudgetLedger ledger;
    TrainResult target;              // target-phase reward/steps/episode trace
    bool budget_exhausted = false;

    // Total steps until the target-task convergence criterion fired.
    std::optional<std::uint64_t> time_to_threshold() const {
        if (!target.converged) {
            return std::nullopt;
        }
        return ledger.g() + target.steps_at_convergence;
    }
};

struct RunPlan {
    StopRule stage_stop = StopRule::until_convergence();
    StopRule target_stop = StopRule::until_convergence();
    std::optional<std::uint64_t> total_budget;  // T; empty = unbounded
};

// The curriculum driver: preprocess, loop of select-and-train over the
// training tasks, then train on the target with whatever budget remains.
// `selector` may be null for the plain baseline (target training only).
// The agent's Q table is carried across stages through transfer_q, and
// exploration restarts at epsilon0 whenever training switches task.
RunResult run_active_simulators(Agent agent,
                                const std::vector<const Environment*>& tasks,
                                const Environment& target, TaskSelector* selector,
                                const RunPlan& plan, const Rng& run_rng);

struct TotalReward {
    double value = 0.0;
    bool truncated = false;  // fewer target episodes existed than asked for
};

// Reward accumulated over the first `episode_budget` target-phase episodes.
TotalReward total_reward(const RunResult& result, std::uint64_t episode_budget);

}  // namespace currl
