#pragma once

#include <memory>
#include <vector>

#include "currl/grid.hpp"
#include "currl/mdp.hpp"

namespace currl {

// Shared dynamics for the grid tasks: 4 actions (up/down/left/right),
// moving into a wall or off the grid leaves the state unchanged, reaching
// the goal yields reward +1 and ends the episode, every other step yields 0.
class GridEnv : public Environment {
public:
    static constexpr int kUp = 0;
    static constexpr int kDown = 1;
    static constexpr int kLeft = 2;
    static constexpr int kRight = 3;

    struct Outcome {
        StateId next_state;
        double reward;
        bool terminal;
    };

    int state_count() const final { return layout_.width * layout_.height; }
    int action_count() const final { return 4; }

    const GridLayout& layout() const { return layout_; }
    StateId state_of(Cell c) const { return layout_.index_of(c); }
    Cell cell_of(StateId s) const { return layout_.cell_at(s); }
    StateId goal_state() const { return layout_.index_of(layout_.goal); }

    // Deterministic transition function, with no episode bookkeeping; this
    // is what dynamic-programming oracles iterate over.
    Outcome peek(StateId s, ActionId a) const;

    std::uint64_t state_key(StateId s) const final {
        const Cell c = cell_of(s);
        return (static_cast<std::uint64_t>(c.row) << 21) | static_cast<std::uint64_t>(c.col);
    }

protected:
    explicit GridEnv(GridLayout layout);
    Transition do_step(StateId s, ActionId a, Rng& rng) final;

private:
    GridLayout layout_;
};

// Goal-search maze: episodes start from a uniformly random feasible
// non-goal cell and are capped at 200 steps.
class MazeEnv final : public GridEnv {
public:
    static constexpr int kStepCap = 200;

    explicit MazeEnv(GridLayout layout);

    int step_cap() const override { return kStepCap; }
    std::unique_ptr<Environment> clone() const override {
        return std::make_unique<MazeEnv>(*this);
    }

protected:
    StateId do_reset(Rng& rng) override;

private:
    std::vector<StateId> start_states_;  // feasible non-goal cells
};

// Fixed-start grid world: episodes start from the layout's start cell and
// are capped at 500 steps.
class GridWorldEnv final : public GridEnv {
public:
    static constexpr int kStepCap = 500;

    explicit GridWorldEnv(GridLayout layout);

    int step_cap() const override { return kStepCap; }
    std::unique_ptr<Environment> clone() const override {
        return std::make_unique<GridWorldEnv>(*this);
    }

protected:
    StateId do_reset(Rng& rng) override;

private:
    StateId start_state_;
};

}  // namespace currl
