#include "currl/orchestrator.hpp"

#include <algorithm>
#include <stdexcept>

namespace currl {

namespace {

// Stream keys for the phases of one run. Training streams are keyed by
// (stage, task), so two selectors that arrive at the same curriculum train
// through identical randomness.
constexpr std::uint64_t kPreprocessSalt = 0;
constexpr std::uint64_t kSelectSalt = 1;
constexpr std::uint64_t kTrainSalt = 2;
constexpr std::uint64_t kTargetSalt = 3;

StopRule cap_stop(StopRule stop, std::uint64_t remaining) {
    switch (stop.kind) {
        case StopRule::Kind::UntilConvergence:
            return StopRule::step_budget(remaining);
        case StopRule::Kind::FixedSteps:
            return StopRule::fixed_steps(std::min(stop.limit, remaining));
        case StopRule::Kind::StepBudget:
            return StopRule::step_budget(std::min(stop.limit, remaining));
        case StopRule::Kind::FixedEpisodes:
            throw std::invalid_argument(
                "orchestrator: episode-limited training cannot honor a step budget");
    }
    return stop;
}

}  // namespace

RunResult run_active_simulators(Agent agent,
                                const std::vector<const Environment*>& tasks,
                                const Environment& target, TaskSelector* selector,
                                const RunPlan& plan, const Rng& run_rng) {
    if (plan.total_budget && *plan.total_budget == 0) {
        throw std::invalid_argument("orchestrator: total budget must be positive");
    }

    RunResult result{std::move(agent), {}, {}, {}, {}, false};
    result.ledger.total_budget = plan.total_budget;
    const std::uint64_t budget = plan.total_budget.value_or(kUnbounded);
    const auto remaining_budget = [&] { return budget - result.ledger.g(); };

    auto target_env = target.clone();
    const Environment* current_env = target_env.get();

    std::vector<TaskId> remaining;
    std::vector<std::unique_ptr<Environment>> stage_envs;
    if (selector != nullptr) {
        for (std::size_t t = 0; t < tasks.size(); ++t) {
            remaining.push_back(static_cast<TaskId>(t));
        }
    }

    if (selector != nullptr && !remaining.empty()) {
        Rng pre_rng = run_rng.child({kPreprocessSalt});
        result.ledger.preprocess_tau =
            selector->preprocess(result.agent, *current_env, pre_rng, remaining_budget());
    }

    std::uint64_t round = 0;
    while (selector != nullptr && !remaining.empty()) {
        if (remaining_budget() == 0) {
            result.budget_exhausted = true;
            break;
        }
        Rng select_rng = run_rng.child({kSelectSalt, round});
        const SelectResult picked = selector->select(result.agent, *current_env,
                                                     remaining, select_rng,
                                                     remaining_budget());
        result.ledger.select_taus.push_back(picked.tau);
        remaining.erase(std::remove(remaining.begin(), remaining.end(), picked.task),
                        remaining.end());

        StageLog stage;
        stage.task = picked.task;
        stage.select_tau = picked.tau;
        stage.skipped = picked.skip;
        if (!picked.skip) {
            if (remaining_budget() == 0) {
                result.budget_exhausted = true;
                result.stages.push_back(stage);
                break;
            }
            stage_envs.push_back(tasks[picked.task]->clone());
            Environment& env = *stage_envs.back();
            result.agent.rebase(*current_env, env);
            result.agent.reset_epsilon();
            current_env = &env;
            Rng train_rng = run_rng.child(
                {kTrainSalt, round, static_cast<std::uint64_t>(picked.task)});
            const StopRule stop = plan.total_budget
                                      ? cap_stop(plan.stage_stop, remaining_budget())
                                      : plan.stage_stop;
            TrainResult train = tlearn(result.agent, env, stop, train_rng);
            stage.train_steps = train.steps;
            stage.train_reward = train.reward;
            stage.episodes = std::move(train.episodes);
            result.ledger.train_taus.push_back(train.steps);
            result.curriculum.push_back(picked.task);
        }
        result.stages.push_back(std::move(stage));
        ++round;
    }

    if (remaining_budget() == 0 && plan.total_budget) {
        result.budget_exhausted = true;
        return result;
    }

    result.agent.rebase(*current_env, *target_env);
    result.agent.reset_epsilon();
    Rng target_rng = run_rng.child({kTargetSalt});
    const StopRule stop = plan.total_budget
                              ? cap_stop(plan.target_stop, remaining_budget())
                              : plan.target_stop;
    result.target = tlearn(result.agent, *target_env, stop, target_rng);
    result.ledger.target_steps = result.target.steps;
    return result;
}

TotalReward total_reward(const RunResult& result, std::uint64_t episode_budget) {
    TotalReward out;
    const auto& episodes = result.target.episodes;
    if (episode_budget > episodes.size()) {
        out.truncated = true;
    }
    const std::size_t n = std::min<std::size_t>(episode_budget, episodes.size());
    for (std::size_t i = 0; i < n; ++i) {
        out.value += episodes[i].reward;
    }
    return out;
}

}  // namespace currl
