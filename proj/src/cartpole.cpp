#include "currl/cartpole.hpp"

#include <cmath>
#include <stdexcept>

namespace currl {

void CartPoleParams::validate() const {
    if (x_bound <= 0.0) {
        throw std::invalid_argument("cartpole: x_bound must be positive");
    }
    if (angle_bound <= 0.0 || angle_bound >= M_PI / 2.0) {
        throw std::invalid_argument("cartpole: angle_bound must be in (0, pi/2)");
    }
    if (dt <= 0.0) {
        throw std::invalid_argument("cartpole: dt must be positive");
    }
    if (step_cap < 1) {
        throw std::invalid_argument("cartpole: step_cap must be >= 1");
    }
    if (cart_mass <= 0.0 || pole_mass < 0.0 || pole_half_length <= 0.0) {
        throw std::invalid_argument("cartpole: masses and pole length must be positive");
    }
}

DiscretizerSpec DiscretizerSpec::defaults_for(const CartPoleParams& params) {
    DiscretizerSpec spec;
    spec.lo = {-params.x_bound, -3.0, -params.angle_bound, -3.5};
    spec.hi = {params.x_bound, 3.0, params.angle_bound, 3.5};
    return spec;
}

void DiscretizerSpec::validate() const {
    for (int i = 0; i < 4; ++i) {
        if (bins[i] < 1) {
            throw std::invalid_argument("discretizer: every bin count must be >= 1");
        }
        if (!(lo[i] < hi[i])) {
            throw std::invalid_argument("discretizer: clip range must be non-empty");
        }
    }
}

StateId DiscretizerSpec::index_of(const std::array<double, 4>& state) const {
    int index = 0;
    for (int i = 0; i < 4; ++i) {
        double v = state[i];
        if (v < lo[i]) v = lo[i];
        if (v > hi[i]) v = hi[i];
        int b = static_cast<int>((v - lo[i]) / (hi[i] - lo[i]) * bins[i]);
        if (b >= bins[i]) b = bins[i] - 1;  // v == hi lands in the top bin
        index = index * bins[i] + b;
    }
    return index;
}

CartPoleEnv::CartPoleEnv(CartPoleParams params, DiscretizerSpec disc)
    : params_(params), disc_(disc) {
    params_.validate();
    disc_.validate();
}

StateId CartPoleEnv::do_reset(Rng& rng) {
    for (double& v : state_) {
        v = rng.uniform(-0.05, 0.05);
    }
    return disc_.index_of(state_);
}

Transition CartPoleEnv::do_step(StateId s, ActionId a, Rng& /*rng*/) {
    if (s != disc_.index_of(state_)) {
        throw ContractViolation("cartpole: state does not match the environment's state");
    }
    const double force = (a == kRight) ? params_.force_magnitude : -params_.force_magnitude;
    const double total_mass = params_.cart_mass + params_.pole_mass;
    const double pole_mass_length = params_.pole_mass * params_.pole_half_length;

    double x = state_[0];
    double v = state_[1];
    double theta = state_[2];
    double omega = state_[3];

    const double cos_t = std::cos(theta);
    const double sin_t = std::sin(theta);
    const double temp = (force + pole_mass_length * omega * omega * sin_t) / total_mass;
    const double theta_acc =
        (params_.gravity * sin_t - cos_t * temp) /
        (params_.pole_half_length * (4.0 / 3.0 - params_.pole_mass * cos_t * cos_t / total_mass));
    const double x_acc = temp - pole_mass_length * theta_acc * cos_t / total_mass;

    x += params_.dt * v;
    v += params_.dt * x_acc;
    theta += params_.dt * omega;
    omega += params_.dt * theta_acc;

    state_ = {x, v, theta, omega};
    const bool out_of_bounds =
        x < -params_.x_bound || x > params_.x_bound ||
        theta < -params_.angle_bound || theta > params_.angle_bound;
    return Transition{s, a, 1.0, disc_.index_of(state_), out_of_bounds};
}

}  // namespace currl
