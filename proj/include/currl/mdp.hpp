#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "currl/rng.hpp"

namespace currl {

using StateId = int;
using ActionId = int;

// Raised when a caller breaks an interface precondition (bad state/action,
// stepping a finished episode, ...).
struct ContractViolation : std::logic_error {
    explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

struct Transition {
    StateId state = 0;
    ActionId action = 0;
    double reward = 0.0;
    StateId next_state = 0;
    bool terminal = false;
};

struct EpisodeTrace {
    std::vector<Transition> transitions;
    double total_reward = 0.0;

    std::size_t steps() const { return transitions.size(); }
};

// Episodic MDP with a discrete state/action space and a hard per-episode
// step cap. The base class owns episode/lifetime step accounting and cap
// enforcement; concrete environments implement the dynamics.
//
// One environment instance runs one episode at a time: reset(), then step()
// until the returned transition is terminal.
class Environment {
public:
    virtual ~Environment() = default;

    virtual int state_count() const = 0;
    virtual int action_count() const = 0;
    virtual int step_cap() const = 0;

    StateId reset(Rng& rng) {
        episode_steps_ = 0;
        active_ = true;
        return do_reset(rng);
    }

    Transition step(StateId s, ActionId a, Rng& rng) {
        if (!active_) {
            throw ContractViolation("step: episode is not active (reset required)");
        }
        if (s < 0 || s >= state_count()) {
            throw ContractViolation("step: state " + std::to_string(s) + " out of range");
        }
        if (a < 0 || a >= action_count()) {
            throw ContractViolation("step: action " + std::to_string(a) + " out of range");
        }
        Transition t = do_step(s, a, rng);
        ++episode_steps_;
        ++lifetime_steps_;
        if (episode_steps_ >= step_cap()) {
            t.terminal = true;
        }
        if (t.terminal) {
            active_ = false;
        }
        return t;
    }

    // Canonical per-state label, stable across tasks of the same family
    // (grid coordinates for grid tasks, discretizer cell for cart-pole).
    // Q-function transfer matches states through these keys.
    virtual std::uint64_t state_key(StateId s) const = 0;

    virtual std::unique_ptr<Environment> clone() const = 0;

    int episode_steps() const { return episode_steps_; }
    bool episode_active() const { return active_; }

    // Total steps ever taken on this instance; the budget ledger is
    // cross-checked against these counters.
    std::uint64_t lifetime_steps() const { return lifetime_steps_; }

protected:
    virtual StateId do_reset(Rng& rng) = 0;
    virtual Transition do_step(StateId s, ActionId a, Rng& rng) = 0;

private:
    int episode_steps_ = 0;
    bool active_ = false;
    std::uint64_t lifetime_steps_ = 0;
};

using PolicyFn = std::function<ActionId(StateId, Rng&)>;

// Runs one full episode under `policy`, from reset until the terminal step
// (the step cap guarantees termination).
EpisodeTrace run_episode(Environment& env, const PolicyFn& policy, Rng& rng);

}  // namespace currl
