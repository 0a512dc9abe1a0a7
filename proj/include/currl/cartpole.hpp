#pragma once

#include <array>
#include <memory>

#include "currl/mdp.hpp"

namespace currl {

// Classic cart-pole balancing task. Continuous state (x, v, theta, omega),
// two actions (push left / push right), +1 reward per step; the episode
// ends when the cart leaves [-x_bound, x_bound], the pole leaves
// [-angle_bound, angle_bound], or the step cap is hit.
struct CartPoleParams {
    double x_bound = 2.4;           // m
    double angle_bound = 0.5235987755982988;  // rad (30 degrees)
    double cart_mass = 1.0;         // kg
    double pole_mass = 0.1;         // kg
    double pole_half_length = 0.5;  // m
    double force_magnitude = 10.0;  // N
    double gravity = 9.8;           // m/s^2
    double dt = 0.02;               // s
    int step_cap = 500;

    void validate() const;
};

// Uniform binning of the continuous state; the bin index is the task's
// discrete StateId. Values outside a clip range fall into the edge bins.
struct DiscretizerSpec {
    std::array<int, 4> bins{6, 6, 12, 6};     // x, v, theta, omega
    std::array<double, 4> lo{-2.4, -3.0, -0.5235987755982988, -3.5};
    std::array<double, 4> hi{2.4, 3.0, 0.5235987755982988, 3.5};

    // Default binning scaled to a task's own bounds: x in [-X, X], theta in
    // [-Theta, Theta], velocities clipped to fixed ranges.
    static DiscretizerSpec defaults_for(const CartPoleParams& params);

    void validate() const;
    int state_count() const { return bins[0] * bins[1] * bins[2] * bins[3]; }
    StateId index_of(const std::array<double, 4>& state) const;
};

class CartPoleEnv final : public Environment {
public:
    static constexpr ActionId kLeft = 0;
    static constexpr ActionId kRight = 1;

    CartPoleEnv(CartPoleParams params, DiscretizerSpec disc);

    int state_count() const override { return disc_.state_count(); }
    int action_count() const override { return 2; }
    int step_cap() const override { return params_.step_cap; }

    // Discretizer cells act as the canonical cross-task labels: tasks of
    // this family share bin counts, so cell i maps to cell i.
    std::uint64_t state_key(StateId s) const override {
        return static_cast<std::uint64_t>(s);
    }

    std::unique_ptr<Environment> clone() const override {
        return std::make_unique<CartPoleEnv>(*this);
    }

    const CartPoleParams& params() const { return params_; }
    const DiscretizerSpec& discretizer() const { return disc_; }

    // Test hooks around the internal continuous state.
    std::array<double, 4> continuous_state() const { return state_; }
    void set_continuous_state(const std::array<double, 4>& state) { state_ = state; }
    StateId current_discrete_state() const { return disc_.index_of(state_); }

protected:
    StateId do_reset(Rng& rng) override;
    Transition do_step(StateId s, ActionId a, Rng& rng) override;

private:
    CartPoleParams params_;
    DiscretizerSpec disc_;
    std::array<double, 4> state_{0.0, 0.0, 0.0, 0.0};
};

}  // namespace currl
