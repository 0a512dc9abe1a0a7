#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "currl/mdp.hpp"

namespace currl {

struct AgentConfig {
    double alpha = 0.6;          // learning rate, (0, 1]
    double gamma = 0.9;          // discount, (0, 1)
    double epsilon0 = 1.0;       // initial exploration rate, [0, 1]
    double epsilon_decay = 0.99; // per-episode multiplicative decay, (0, 1]
    double epsilon_floor = 0.01;
    int convergence_window = 5;
    double convergence_delta = 1e-4;  // on per-episode max |dQ|

    void validate() const;
};

// Dense action-value table. Unvisited entries stay at the initialization
// value (0), which is what Q-function transfer relies on.
class QTable {
public:
    QTable(int state_count, int action_count, double init = 0.0);

    int state_count() const { return state_count_; }
    int action_count() const { return action_count_; }

    double at(StateId s, ActionId a) const { return values_[index(s, a)]; }
    double& at(StateId s, ActionId a) { return values_[index(s, a)]; }

    double max_value(StateId s) const;
    ActionId greedy_action(StateId s) const;  // ties break to the lowest action
    double max_abs_value() const;
    bool any_nonzero() const;

    friend bool operator==(const QTable&, const QTable&) = default;

private:
    std::size_t index(StateId s, ActionId a) const {
        return static_cast<std::size_t>(s) * action_count_ + a;
    }

    int state_count_;
    int action_count_;
    std::vector<double> values_;
};

// CSV with header `state,action,value`, for inspection and test fixtures.
void write_qtable_csv(std::ostream& out, const QTable& table);
QTable read_qtable_csv(std::istream& in);

// Declares convergence once the last `window` completed episodes each had
// max |dQ| below delta while actually collecting reward. The reward
// requirement keeps reward-free episodes (an undiscovered goal, a blind
// region of the state space) from counting as "values did not change":
// without it a run can stall for a few episodes early on and stop with an
// untrained table.
class ConvergenceMonitor {
public:
    ConvergenceMonitor(int window, double delta) : window_(window), delta_(delta) {}

    void reset() { stable_run_ = 0; }
    void record_episode(double max_abs_dq, double episode_reward) {
        stable_run_ = (max_abs_dq < delta_ && episode_reward > 0.0) ? stable_run_ + 1 : 0;
    }
    bool window_stable() const { return stable_run_ >= window_; }

private:
    int window_;
    double delta_;
    int stable_run_ = 0;
};

// Tabular Q-learning agent with epsilon-greedy exploration. A plain value
// type: copying an Agent is the cloning primitive the selectors use to
// probe tasks without disturbing the original.
class Agent {
public:
    Agent(int state_count, int action_count, AgentConfig config);

    const QTable& q() const { return q_; }
    QTable& q() { return q_; }
    const AgentConfig& config() const { return config_; }

    double epsilon() const { return epsilon_; }
    void reset_epsilon() { epsilon_ = config_.epsilon0; }
    void set_epsilon(double epsilon) { epsilon_ = epsilon; }
    void decay_epsilon(double floor) {
        epsilon_ = std::max(floor, epsilon_ * config_.epsilon_decay);
    }

    std::uint64_t total_steps() const { return total_steps_; }

    // Epsilon-greedy: with probability epsilon a uniform action, otherwise
    // the greedy action (ties to the lowest index).
    ActionId select_action(StateId s, Rng& rng) const;

    // One Q-learning backup; returns |dQ|. Terminal transitions do not
    // bootstrap from the successor state.
    double update(const Transition& t);

    // Replaces the Q table with its transfer onto `to`'s state space.
    void rebase(const Environment& from, const Environment& to);

private:
    QTable q_;
    AgentConfig config_;
    double epsilon_;
    std::uint64_t total_steps_ = 0;
};

// Copies Q values for every state whose canonical label exists in both
// tasks; everything else starts back at 0. Action counts must match.
QTable transfer_q(const QTable& source, const Environment& source_env,
                  const Environment& target_env);

struct StopRule {
    enum class Kind {
        UntilConvergence,  // run until the convergence monitor fires
        FixedSteps,        // exactly n steps, cutting mid-episode
        StepBudget,        // until convergence, but never beyond n steps
        FixedEpisodes,     // exactly n completed episodes
    };
    Kind kind = Kind::UntilConvergence;
    std::uint64_t limit = 0;

    static StopRule until_convergence() { return {Kind::UntilConvergence, 0}; }
    static StopRule fixed_steps(std::uint64_t n) { return {Kind::FixedSteps, n}; }
    static StopRule step_budget(std::uint64_t n) { return {Kind::StepBudget, n}; }
    static StopRule fixed_episodes(std::uint64_t n) { return {Kind::FixedEpisodes, n}; }
};

struct EpisodeStat {
    double reward = 0.0;
    int steps = 0;
    double max_abs_dq = 0.0;
    bool complete = true;  // false when a step budget cut the episode short
};

struct TrainResult {
    double reward = 0.0;
    std::uint64_t steps = 0;
    bool converged = false;
    std::uint64_t steps_at_convergence = 0;
    std::vector<EpisodeStat> episodes;
};

// Trains `agent` on `env` until the stop rule fires; returns the reward
// accumulated and the exact number of steps used. A converged table takes
// exactly zero-magnitude updates on revisits, so the exploration floor can
// stay positive without keeping the convergence window from filling.
TrainResult tlearn(Agent& agent, Environment& env, StopRule stop, Rng& rng);

// Probes how much reward the agent's current knowledge earns on `task`
// over `eval_steps` steps of training. Takes the agent by value: the probe
// runs on a clone and never alters the original. The task is probed on a
// private copy as well.
TrainResult evaluate_task(Agent clone, const Environment& clone_env,
                          const Environment& task, std::uint64_t eval_steps, Rng& rng);

struct ProbeResult {
    double reward = 0.0;       // reward accumulated on task_j
    std::uint64_t steps = 0;   // total steps the whole probe consumed
};

// Inter-task transferability probe: a clone trains on task_i until
// convergence (capped at train_cap steps), transfers its Q function to
// task_j, then trains there for measure_steps. Returns the reward earned
// on task_j and the total step cost of the probe.
ProbeResult transfer_measure(Agent clone, const Environment& clone_env,
                             const Environment& task_i, const Environment& task_j,
                             std::uint64_t measure_steps, std::uint64_t train_cap,
                             Rng& rng);

}  // namespace currl
