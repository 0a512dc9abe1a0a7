#include "currl/grid_env.hpp"

namespace currl {

GridEnv::GridEnv(GridLayout layout) : layout_(std::move(layout)) {}

GridEnv::Outcome GridEnv::peek(StateId s, ActionId a) const {
    const Cell from = cell_of(s);
    if (!layout_.is_feasible(from)) {
        throw ContractViolation("peek: state is a blocked cell");
    }
    if (from == layout_.goal) {
        throw ContractViolation("peek: episode already ended at the goal");
    }
    Cell to = from;
    switch (a) {
        case kUp: --to.row; break;
        case kDown: ++to.row; break;
        case kLeft: --to.col; break;
        case kRight: ++to.col; break;
        default: throw ContractViolation("peek: unknown action");
    }
    if (!layout_.is_feasible(to)) {
        to = from;  // wall and boundary collisions are no-ops
    }
    const bool at_goal = (to == layout_.goal);
    return Outcome{state_of(to), at_goal ? 1.0 : 0.0, at_goal};
}

Transition GridEnv::do_step(StateId s, ActionId a, Rng& /*rng*/) {
    const Outcome o = peek(s, a);
    return Transition{s, a, o.reward, o.next_state, o.terminal};
}

MazeEnv::MazeEnv(GridLayout layout) : GridEnv(std::move(layout)) {
    for (const Cell& c : this->layout().feasible_cells()) {
        if (c != this->layout().goal) {
            start_states_.push_back(state_of(c));
        }
    }
    // validate_layout guarantees at least one non-goal feasible cell
}

StateId MazeEnv::do_reset(Rng& rng) {
    return start_states_[static_cast<std::size_t>(rng.uniform_int(
        static_cast<int>(start_states_.size())))];
}

GridWorldEnv::GridWorldEnv(GridLayout layout) : GridEnv(std::move(layout)) {
    if (!this->layout().start) {
        throw std::invalid_argument("grid world layout needs a start cell");
    }
    start_state_ = state_of(*this->layout().start);
}

StateId GridWorldEnv::do_reset(Rng& /*rng*/) {
    return start_state_;
}

}  // namespace currl
