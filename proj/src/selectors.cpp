#include "currl/selectors.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

namespace currl {

namespace {

// Probe streams are keyed by what is being probed, not by probe order, so
// reordering the measurements (as the active variants do) cannot change any
// individual measurement.
Rng probe_rng(const Rng& round, TaskId t) {
    return round.child({static_cast<std::uint64_t>(t)});
}

Rng pair_rng(const Rng& round, int i, int j) {
    return round.child({static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j)});
}

}  // namespace

std::string_view selector_name(SelectorKind kind) {
    switch (kind) {
        case SelectorKind::Baseline: return "baseline";
        case SelectorKind::Rmgs: return "rmgs";
        case SelectorKind::Ltms: return "ltms";
        case SelectorKind::ActiveRmgs: return "active_rmgs";
        case SelectorKind::ActiveLtms: return "active_ltms";
        case SelectorKind::Fixed: return "fixed";
    }
    return "unknown";
}

std::optional<SelectorKind> selector_from_name(std::string_view name) {
    if (name == "baseline") return SelectorKind::Baseline;
    if (name == "rmgs") return SelectorKind::Rmgs;
    if (name == "ltms") return SelectorKind::Ltms;
    if (name == "active_rmgs") return SelectorKind::ActiveRmgs;
    if (name == "active_ltms") return SelectorKind::ActiveLtms;
    if (name == "fixed") return SelectorKind::Fixed;
    return std::nullopt;
}

void write_transfer_matrix_csv(std::ostream& out, const TransferMatrix& matrix) {
    out << "from,to,value,provenance\n";
    for (int i = 0; i < matrix.task_count; ++i) {
        for (int j = 0; j <= matrix.task_count; ++j) {
            const Provenance p = matrix.provenance_at(i, j);
            if (p == Provenance::Unused) {
                continue;
            }
            char buf[32];
            const int n = std::snprintf(buf, sizeof buf, "%.17g", matrix.at(i, j));
            out << i << ',' << (j == matrix.target_column() ? std::string("target")
                                                            : std::to_string(j))
                << ',';
            out.write(buf, n);
            out << ',' << (p == Provenance::Measured ? "measured" : "predicted") << '\n';
        }
    }
}

std::vector<TaskId> ltms_chain(const TransferMatrix& matrix) {
    std::vector<TaskId> remaining(matrix.task_count);
    for (int i = 0; i < matrix.task_count; ++i) {
        remaining[i] = i;
    }
    std::vector<TaskId> reversed;
    int anchor = matrix.target_column();
    while (!remaining.empty()) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < remaining.size(); ++k) {
            if (matrix.at(remaining[k], anchor) > matrix.at(remaining[best], anchor)) {
                best = k;
            }
        }
        anchor = remaining[best];
        reversed.push_back(remaining[best]);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
    }
    std::reverse(reversed.begin(), reversed.end());
    return reversed;
}

Eigen::VectorXd pair_feature(const Eigen::VectorXd& f_i, const Eigen::VectorXd& f_j,
                             double eps) {
    if (eps <= 0.0) {
        throw std::invalid_argument("pair_feature: eps must be positive");
    }
    if (f_i.size() != f_j.size()) {
        throw std::invalid_argument("pair_feature: dimension mismatch");
    }
    Eigen::VectorXd out(f_i.size() + 1);
    out(0) = 1.0;
    for (Eigen::Index k = 0; k < f_i.size(); ++k) {
        out(k + 1) = (f_i(k) - f_j(k)) / std::max(f_i(k), eps);
    }
    return out;
}

double maze_task_feature(const GridLayout& task_i, const GridLayout& task_j) {
    std::unordered_set<std::uint64_t> other;
    for (const Cell& c : task_j.feasible_cells()) {
        other.insert((static_cast<std::uint64_t>(c.row) << 21) |
                     static_cast<std::uint64_t>(c.col));
    }
    const auto own = task_i.feasible_cells();
    std::size_t overlap = 0;
    for (const Cell& c : own) {
        overlap += other.count((static_cast<std::uint64_t>(c.row) << 21) |
                               static_cast<std::uint64_t>(c.col));
    }
    return static_cast<double>(overlap) / static_cast<double>(own.size());
}

double gridworld_task_feature(const GridLayout& task_i, const GridLayout& task_j) {
    const auto start_distance = [](const GridLayout& layout) {
        if (!layout.start) {
            throw std::invalid_argument("gridworld_task_feature: layout has no start");
        }
        const auto d = bfs_distance(layout, *layout.start, layout.goal);
        if (!d) {
            throw std::invalid_argument("gridworld_task_feature: goal unreachable from start");
        }
        return static_cast<double>(*d);
    };
    return start_distance(task_i) - start_distance(task_j);
}

Eigen::VectorXd sequence_feature(const std::vector<TaskId>& sequence,
                                 const std::vector<Eigen::VectorXd>& raw) {
    if (sequence.empty()) {
        throw std::invalid_argument("sequence_feature: empty sequence");
    }
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(raw[sequence.front()].size());
    for (TaskId t : sequence) {
        sum += raw[t];
    }
    return sum / static_cast<double>(sequence.size());
}

Eigen::VectorXd sequence_task_feature(const Eigen::VectorXd& f_seq,
                                      const Eigen::VectorXd& f_j, double eps) {
    return pair_feature(f_seq, f_j, eps);
}

double diversity_score(const Eigen::VectorXd& f_task,
                       const std::vector<Eigen::VectorXd>& members) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& m : members) {
        best = std::min(best, (f_task - m).norm());
    }
    return best;
}

bool diversity_keep(const Eigen::VectorXd& f_task,
                    const std::vector<Eigen::VectorXd>& members, double threshold) {
    return members.empty() || diversity_score(f_task, members) > threshold;
}

TaskFeatures TaskFeatures::from_raw(std::vector<Eigen::VectorXd> raw, double eps) {
    TaskFeatures features;
    features.raw = std::move(raw);
    features.resize_pairs();
    const int k = features.task_count();
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j <= k; ++j) {
            if (i == j) {
                continue;
            }
            features.pair(i, j) = pair_feature(features.raw[i], features.raw[j], eps);
        }
    }
    return features;
}

SelectResult RmgsSelector::select(const Agent& agent, const Environment& agent_env,
                                  const std::vector<TaskId>& remaining, Rng& rng,
                                  std::uint64_t tau_cap) {
    if (remaining.empty()) {
        throw std::logic_error("rmgs: no tasks left to select from");
    }
    SelectResult result;
    double best_reward = -std::numeric_limits<double>::infinity();
    for (TaskId t : remaining) {
        const std::uint64_t allowed = std::min(settings_.eval_steps, tau_cap - result.tau);
        Rng probe = probe_rng(rng, t);
        const TrainResult probe_result =
            evaluate_task(agent, agent_env, task(t), allowed, probe);
        result.tau += probe_result.steps;
        if (probe_result.reward > best_reward) {
            best_reward = probe_result.reward;
            result.task = t;
        }
    }
    return result;
}

SelectResult ChainSelector::select(const Agent& /*agent*/, const Environment& /*agent_env*/,
                                   const std::vector<TaskId>& /*remaining*/, Rng& /*rng*/,
                                   std::uint64_t /*tau_cap*/) {
    if (plan_.empty()) {
        plan_ = ltms_chain(matrix_);
    }
    if (next_ >= plan_.size()) {
        throw std::logic_error("chain selector: plan exhausted");
    }
    return SelectResult{plan_[next_++], false, 0};
}

std::uint64_t LtmsSelector::preprocess(const Agent& agent, const Environment& agent_env,
                                       Rng& rng, std::uint64_t tau_cap) {
    const int k = task_count();
    matrix_ = TransferMatrix(k);
    std::uint64_t spent = 0;
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j <= k; ++j) {
            if (i == j) {
                continue;
            }
            const Environment& to = (j == k) ? target() : task(j);
            const std::uint64_t rem = tau_cap - spent;
            const std::uint64_t train_cap = std::min(settings_.probe_train_cap, rem);
            const std::uint64_t measure =
                std::min(settings_.measure_steps, rem - train_cap);
            Rng probe = pair_rng(rng, i, j);
            const ProbeResult r = transfer_measure(agent, agent_env, task(i), to,
                                                   measure, train_cap, probe);
            spent += r.steps;
            matrix_.set(i, j, r.reward, Provenance::Measured);
        }
    }
    return spent;
}

std::uint64_t ActiveLtmsSelector::preprocess(const Agent& agent,
                                             const Environment& agent_env, Rng& rng,
                                             std::uint64_t tau_cap) {
    const int k = task_count();
    matrix_ = TransferMatrix(k);

    struct PairCandidate {
        int i;
        int j;
        Eigen::VectorXd v;
        bool measured = false;
    };
    std::vector<PairCandidate> candidates;
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j <= k; ++j) {
            if (i != j) {
                candidates.push_back({i, j, features_.pair(i, j)});
            }
        }
    }
    const int dim = candidates.empty() ? 1 : static_cast<int>(candidates[0].v.size());
    if (pair_budget_ < dim || pair_budget_ > static_cast<int>(candidates.size())) {
        throw std::invalid_argument(
            "active ltms: pair budget must lie in [feature dimension, pair count]");
    }

    active::DesignState design(dim);
    std::uint64_t spent = 0;
    for (int m = 0; m < pair_budget_; ++m) {
        // The target column is measured first: those pairs anchor the
        // backward chain, and source tasks are subsets of the target, so
        // their pair features coincide and a fit cannot rank them.
        std::size_t pick = candidates.size();
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            if (!candidates[c].measured && candidates[c].j == k) {
                pick = c;
                break;
            }
        }
        if (pick == candidates.size() && design.gram_inverse_ready()) {
            std::vector<active::Candidate> open;
            std::vector<std::size_t> open_index;
            for (std::size_t c = 0; c < candidates.size(); ++c) {
                if (!candidates[c].measured) {
                    open.push_back({candidates[c].v, static_cast<int>(c)});
                    open_index.push_back(c);
                }
            }
            pick = open_index[active::select_sample(design.gram_inverse(), open)];
        } else if (pick == candidates.size()) {
            double best_norm = -1.0;
            for (std::size_t c = 0; c < candidates.size(); ++c) {
                if (!candidates[c].measured && candidates[c].v.norm() > best_norm) {
                    best_norm = candidates[c].v.norm();
                    pick = c;
                }
            }
        }
        PairCandidate& chosen = candidates[pick];
        const Environment& to = (chosen.j == k) ? target() : task(chosen.j);
        const std::uint64_t rem = tau_cap - spent;
        const std::uint64_t train_cap = std::min(settings_.probe_train_cap, rem);
        const std::uint64_t measure = std::min(settings_.measure_steps, rem - train_cap);
        Rng probe = pair_rng(rng, chosen.i, chosen.j);
        const ProbeResult r = transfer_measure(agent, agent_env, task(chosen.i), to,
                                               measure, train_cap, probe);
        spent += r.steps;
        chosen.measured = true;
        matrix_.set(chosen.i, chosen.j, r.reward, Provenance::Measured);
        design.add(chosen.v, r.reward);
    }

    Eigen::VectorXd theta;
    if (design.gram_inverse_ready()) {
        theta = design.theta();
    } else {
        theta = design.theta_ridge(ridge_lambda_);
        matrix_.ridge_fallback = true;
    }
    for (const PairCandidate& c : candidates) {
        if (!c.measured) {
            matrix_.set(c.i, c.j, active::predict(theta, c.v), Provenance::Predicted);
        }
    }
    return spent;
}

SelectResult ActiveRmgsSelector::select(const Agent& agent, const Environment& agent_env,
                                        const std::vector<TaskId>& remaining, Rng& rng,
                                        std::uint64_t tau_cap) {
    if (remaining.empty()) {
        throw std::logic_error("active rmgs: no tasks left to select from");
    }

    // Cold start: no sequence to build features from yet, so the first pick
    // is plain reward-greedy over everything.
    if (curriculum_.empty()) {
        SelectResult result;
        double best_reward = -std::numeric_limits<double>::infinity();
        for (TaskId t : remaining) {
            const std::uint64_t allowed = std::min(settings_.eval_steps, tau_cap - result.tau);
            Rng probe = probe_rng(rng, t);
            const TrainResult r = evaluate_task(agent, agent_env, task(t), allowed, probe);
            result.tau += r.steps;
            if (r.reward > best_reward) {
                best_reward = r.reward;
                result.task = t;
            }
        }
        curriculum_.push_back(result.task);
        return result;
    }

    // Redundant tasks (too close to what the curriculum already covers) are
    // dropped before any measuring.
    if (diversity_threshold_) {
        std::vector<Eigen::VectorXd> member_features;
        for (TaskId t : curriculum_) {
            member_features.push_back(features_.raw[t]);
        }
        for (TaskId t : remaining) {
            if (!diversity_keep(features_.raw[t], member_features, *diversity_threshold_)) {
                return SelectResult{t, true, 0};
            }
        }
    }

    const Eigen::VectorXd f_seq = sequence_feature(curriculum_, features_.raw);
    struct Entry {
        TaskId t;
        Eigen::VectorXd v;
        bool measured = false;
        double value = 0.0;
    };
    std::vector<Entry> entries;
    for (TaskId t : remaining) {
        entries.push_back({t, sequence_task_feature(f_seq, features_.raw[t], feature_eps_)});
    }

    SelectResult result;
    const int to_measure = std::min<int>(measure_budget_, static_cast<int>(entries.size()));
    for (int m = 0; m < to_measure; ++m) {
        std::size_t pick = entries.size();
        if (design_.gram_inverse_ready()) {
            std::vector<active::Candidate> open;
            std::vector<std::size_t> open_index;
            for (std::size_t c = 0; c < entries.size(); ++c) {
                if (!entries[c].measured) {
                    open.push_back({entries[c].v, entries[c].t});
                    open_index.push_back(c);
                }
            }
            pick = open_index[active::select_sample(design_.gram_inverse(), open)];
        } else {
            double best_norm = -1.0;
            for (std::size_t c = 0; c < entries.size(); ++c) {
                if (!entries[c].measured && entries[c].v.norm() > best_norm) {
                    best_norm = entries[c].v.norm();
                    pick = c;
                }
            }
        }
        Entry& chosen = entries[pick];
        const std::uint64_t allowed = std::min(settings_.eval_steps, tau_cap - result.tau);
        Rng probe = probe_rng(rng, chosen.t);
        const TrainResult r = evaluate_task(agent, agent_env, task(chosen.t), allowed, probe);
        result.tau += r.steps;
        chosen.measured = true;
        chosen.value = r.reward;
        design_.add(chosen.v, r.reward);
    }

    // Predict the unmeasured candidates from the regression fit.
    if (to_measure < static_cast<int>(entries.size())) {
        Eigen::VectorXd theta;
        if (design_.gram_inverse_ready()) {
            theta = design_.theta();
        } else {
            theta = design_.theta_ridge(ridge_lambda_);
            used_ridge_ = true;
        }
        for (Entry& e : entries) {
            if (!e.measured) {
                e.value = active::predict(theta, e.v);
            }
        }
    }

    std::size_t best = 0;
    for (std::size_t c = 1; c < entries.size(); ++c) {
        if (entries[c].value > entries[best].value) {
            best = c;
        }
    }
    result.task = entries[best].t;
    if (prune_value_ && entries[best].value < *prune_value_) {
        result.skip = true;
        return result;
    }
    curriculum_.push_back(result.task);
    return result;
}

SelectResult FixedSelector::select(const Agent& /*agent*/, const Environment& /*agent_env*/,
                                   const std::vector<TaskId>& remaining, Rng& /*rng*/,
                                   std::uint64_t /*tau_cap*/) {
    if (next_ >= order_.size()) {
        throw std::logic_error("fixed selector: permutation exhausted");
    }
    const TaskId t = order_[next_++];
    if (std::find(remaining.begin(), remaining.end(), t) == remaining.end()) {
        throw std::logic_error("fixed selector: task already consumed");
    }
    return SelectResult{t, false, 0};
}

}  // namespace currl
