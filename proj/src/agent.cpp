#include "currl/agent.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace currl {

void AgentConfig::validate() const {
    if (alpha <= 0.0 || alpha > 1.0) {
        throw std::invalid_argument("agent: alpha must be in (0, 1]");
    }
    if (gamma <= 0.0 || gamma >= 1.0) {
        throw std::invalid_argument("agent: gamma must be in (0, 1)");
    }
    if (epsilon0 < 0.0 || epsilon0 > 1.0) {
        throw std::invalid_argument("agent: epsilon0 must be in [0, 1]");
    }
    if (epsilon_decay <= 0.0 || epsilon_decay > 1.0) {
        throw std::invalid_argument("agent: epsilon_decay must be in (0, 1]");
    }
    if (epsilon_floor < 0.0 || epsilon_floor > 1.0) {
        throw std::invalid_argument("agent: epsilon_floor must be in [0, 1]");
    }
    if (convergence_window < 1) {
        throw std::invalid_argument("agent: convergence_window must be >= 1");
    }
    if (convergence_delta <= 0.0) {
        throw std::invalid_argument("agent: convergence_delta must be positive");
    }
}

QTable::QTable(int state_count, int action_count, double init)
    : state_count_(state_count),
      action_count_(action_count),
      values_(static_cast<std::size_t>(state_count) * action_count, init) {
    if (state_count < 1 || action_count < 1) {
        throw std::invalid_argument("qtable: state and action counts must be >= 1");
    }
}

double QTable::max_value(StateId s) const {
    double best = at(s, 0);
    for (ActionId a = 1; a < action_count_; ++a) {
        best = std::max(best, at(s, a));
    }
    return best;
}

ActionId QTable::greedy_action(StateId s) const {
    ActionId best = 0;
    for (ActionId a = 1; a < action_count_; ++a) {
        if (at(s, a) > at(s, best)) {
            best = a;
        }
    }
    return best;
}

double QTable::max_abs_value() const {
    double m = 0.0;
    for (double v : values_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

bool QTable::any_nonzero() const {
    return std::any_of(values_.begin(), values_.end(), [](double v) { return v != 0.0; });
}

void write_qtable_csv(std::ostream& out, const QTable& table) {
    out << "state,action,value\n";
    for (StateId s = 0; s < table.state_count(); ++s) {
        for (ActionId a = 0; a < table.action_count(); ++a) {
            char buf[32];
            const int n = std::snprintf(buf, sizeof buf, "%.17g", table.at(s, a));
            out << s << ',' << a << ',';
            out.write(buf, n);
            out << '\n';
        }
    }
}

QTable read_qtable_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "state,action,value") {
        throw std::runtime_error("qtable csv: missing `state,action,value` header");
    }
    struct Row {
        StateId s;
        ActionId a;
        double v;
    };
    std::vector<Row> rows;
    int max_state = -1;
    int max_action = -1;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        Row r{};
        char comma1 = 0, comma2 = 0;
        std::istringstream ls(line);
        if (!(ls >> r.s >> comma1 >> r.a >> comma2 >> r.v) || comma1 != ',' || comma2 != ',') {
            throw std::runtime_error("qtable csv: malformed row: " + line);
        }
        max_state = std::max(max_state, r.s);
        max_action = std::max(max_action, r.a);
        rows.push_back(r);
    }
    if (rows.empty()) {
        throw std::runtime_error("qtable csv: no rows");
    }
    QTable table(max_state + 1, max_action + 1);
    for (const Row& r : rows) {
        table.at(r.s, r.a) = r.v;
    }
    return table;
}

Agent::Agent(int state_count, int action_count, AgentConfig config)
    : q_(state_count, action_count), config_(config), epsilon_(config.epsilon0) {
    config_.validate();
}

ActionId Agent::select_action(StateId s, Rng& rng) const {
    if (epsilon_ > 0.0 && rng.chance(epsilon_)) {
        return rng.uniform_int(q_.action_count());
    }
    return q_.greedy_action(s);
}

double Agent::update(const Transition& t) {
    const double bootstrap = t.terminal ? 0.0 : config_.gamma * q_.max_value(t.next_state);
    const double delta = config_.alpha * (t.reward + bootstrap - q_.at(t.state, t.action));
    q_.at(t.state, t.action) += delta;
    ++total_steps_;
    return std::abs(delta);
}

void Agent::rebase(const Environment& from, const Environment& to) {
    q_ = transfer_q(q_, from, to);
}

QTable transfer_q(const QTable& source, const Environment& source_env,
                  const Environment& target_env) {
    if (source_env.action_count() != target_env.action_count()) {
        throw std::invalid_argument("transfer_q: action counts differ");
    }
    if (source.state_count() != source_env.state_count() ||
        source.action_count() != source_env.action_count()) {
        throw std::invalid_argument("transfer_q: table shape does not match the source task");
    }
    std::unordered_map<std::uint64_t, StateId> source_by_key;
    source_by_key.reserve(static_cast<std::size_t>(source_env.state_count()));
    for (StateId s = 0; s < source_env.state_count(); ++s) {
        source_by_key.emplace(source_env.state_key(s), s);
    }
    QTable out(target_env.state_count(), target_env.action_count());
    for (StateId ts = 0; ts < target_env.state_count(); ++ts) {
        const auto it = source_by_key.find(target_env.state_key(ts));
        if (it == source_by_key.end()) {
            continue;
        }
        for (ActionId a = 0; a < out.action_count(); ++a) {
            out.at(ts, a) = source.at(it->second, a);
        }
    }
    return out;
}

namespace {

bool step_limited(StopRule::Kind k) {
    return k == StopRule::Kind::FixedSteps || k == StopRule::Kind::StepBudget;
}

bool convergence_aware(StopRule::Kind k) {
    return k == StopRule::Kind::UntilConvergence || k == StopRule::Kind::StepBudget;
}

}  // namespace

TrainResult tlearn(Agent& agent, Environment& env, StopRule stop, Rng& rng) {
    TrainResult result;
    if (stop.kind != StopRule::Kind::UntilConvergence && stop.limit == 0) {
        return result;
    }

    const double floor = agent.config().epsilon_floor;
    ConvergenceMonitor monitor(agent.config().convergence_window,
                               agent.config().convergence_delta);

    while (true) {
        StateId s = env.reset(rng);
        EpisodeStat episode;
        bool cut_short = false;
        while (true) {
            if (step_limited(stop.kind) && result.steps >= stop.limit) {
                cut_short = true;
                break;
            }
            const ActionId a = agent.select_action(s, rng);
            const Transition t = env.step(s, a, rng);
            const double dq = agent.update(t);
            episode.max_abs_dq = std::max(episode.max_abs_dq, dq);
            episode.reward += t.reward;
            ++episode.steps;
            ++result.steps;
            if (t.terminal) {
                break;
            }
            s = t.next_state;
        }
        episode.complete = !cut_short;
        result.reward += episode.reward;
        if (episode.steps > 0 || !cut_short) {
            result.episodes.push_back(episode);
        }
        if (cut_short) {
            break;
        }

        monitor.record_episode(episode.max_abs_dq, episode.reward);
        agent.decay_epsilon(floor);

        if (convergence_aware(stop.kind) && monitor.window_stable()) {
            result.converged = true;
            result.steps_at_convergence = result.steps;
            break;
        }
        if (step_limited(stop.kind) && result.steps >= stop.limit) {
            break;
        }
        if (stop.kind == StopRule::Kind::FixedEpisodes &&
            result.episodes.size() >= stop.limit) {
            break;
        }
    }
    return result;
}

TrainResult evaluate_task(Agent clone, const Environment& clone_env,
                          const Environment& task, std::uint64_t eval_steps, Rng& rng) {
    const auto probe_env = task.clone();
    clone.rebase(clone_env, *probe_env);
    return tlearn(clone, *probe_env, StopRule::fixed_steps(eval_steps), rng);
}

ProbeResult transfer_measure(Agent clone, const Environment& clone_env,
                             const Environment& task_i, const Environment& task_j,
                             std::uint64_t measure_steps, std::uint64_t train_cap,
                             Rng& rng) {
    const auto env_i = task_i.clone();
    const auto env_j = task_j.clone();
    clone.rebase(clone_env, *env_i);
    const TrainResult train = tlearn(clone, *env_i, StopRule::step_budget(train_cap), rng);
    // Measure at the exploration floor: the probe gauges what transferred,
    // and leftover exploration from the task_i phase would only add noise.
    clone.set_epsilon(clone.config().epsilon_floor);
    clone.rebase(*env_i, *env_j);
    const TrainResult measure =
        tlearn(clone, *env_j, StopRule::fixed_steps(measure_steps), rng);
    return ProbeResult{measure.reward, train.steps + measure.steps};
}

}  // namespace currl
