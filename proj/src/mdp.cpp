#include "currl/mdp.hpp"

namespace currl {

EpisodeTrace run_episode(Environment& env, const PolicyFn& policy, Rng& rng) {
    EpisodeTrace trace;
    StateId s = env.reset(rng);
    while (true) {
        const ActionId a = policy(s, rng);
        const Transition t = env.step(s, a, rng);
        trace.transitions.push_back(t);
        trace.total_reward += t.reward;
        if (t.terminal) {
            break;
        }
        s = t.next_state;
    }
    return trace;
}

}  // namespace currl
