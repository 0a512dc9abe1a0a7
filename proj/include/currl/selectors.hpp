#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "currl/active_regression.hpp"
#include "currl/agent.hpp"
#include "currl/grid.hpp"

namespace currl {

using TaskId = int;

inline constexpr std::uint64_t kUnbounded = std::numeric_limits<std::uint64_t>::max();

enum class SelectorKind { Baseline, Rmgs, Ltms, ActiveRmgs, ActiveLtms, Fixed };

std::string_view selector_name(SelectorKind kind);
std::optional<SelectorKind> selector_from_name(std::string_view name);

enum class Provenance { Unused, Measured, Predicted };

// K x (K+1) inter-task transferability rewards; column K is the target
// task, diagonal entries are unused.
struct TransferMatrix {
    int task_count = 0;
    std::vector<double> values;
    std::vector<Provenance> provenance;
    bool ridge_fallback = false;  // set when predictions came from the ridge fit

    TransferMatrix() = default;
    explicit TransferMatrix(int k)
        : task_count(k),
          values(static_cast<std::size_t>(k) * (k + 1), 0.0),
          provenance(static_cast<std::size_t>(k) * (k + 1), Provenance::Unused) {}

    int target_column() const { return task_count; }
    double at(int i, int j) const { return values[index(i, j)]; }
    double& at(int i, int j) { return values[index(i, j)]; }
    Provenance provenance_at(int i, int j) const { return provenance[index(i, j)]; }
    void set(int i, int j, double value, Provenance p) {
        values[index(i, j)] = value;
        provenance[index(i, j)] = p;
    }

private:
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i) * (task_count + 1) + j;
    }
};

// CSV dump `from,to,value,provenance` (unused entries omitted).
void write_transfer_matrix_csv(std::ostream& out, const TransferMatrix& matrix);

// Backward greedy curriculum: anchor at the target column, repeatedly pick
// the unchosen task with the best transfer into the previously chosen one,
// then reverse into forward order. Consumes every task exactly once.
std::vector<TaskId> ltms_chain(const TransferMatrix& matrix);

// ---- Task features ----------------------------------------------------

// Relative difference feature for a task pair, with a leading bias:
// [1, (f_i - f_j) / max(f_i, eps) componentwise].
Eigen::VectorXd pair_feature(const Eigen::VectorXd& f_i, const Eigen::VectorXd& f_j,
                             double eps);

// Share of task_i's feasible cells that also appear in task_j, matched by
// grid coordinates.
double maze_task_feature(const GridLayout& task_i, const GridLayout& task_j);

// Difference of start-to-goal shortest-path distances.
double gridworld_task_feature(const GridLayout& task_i, const GridLayout& task_j);

// Componentwise mean of the member tasks' raw features.
Eigen::VectorXd sequence_feature(const std::vector<TaskId>& sequence,
                                 const std::vector<Eigen::VectorXd>& raw);

// pair_feature with the sequence standing in for the first task.
Eigen::VectorXd sequence_task_feature(const Eigen::VectorXd& f_seq,
                                      const Eigen::VectorXd& f_j, double eps);

// Minimum Euclidean distance between f_task and the member features;
// infinity for an empty sequence.
double diversity_score(const Eigen::VectorXd& f_task,
                       const std::vector<Eigen::VectorXd>& members);
bool diversity_keep(const Eigen::VectorXd& f_task,
                    const std::vector<Eigen::VectorXd>& members, double threshold);

// Raw per-task feature vectors (target last) plus the bias-augmented pair
// vectors the active selectors regress on.
struct TaskFeatures {
    std::vector<Eigen::VectorXd> raw;    // size K+1
    std::vector<Eigen::VectorXd> pairs;  // row-major (i, j), i < K, j <= K

    int task_count() const { return raw.empty() ? 0 : static_cast<int>(raw.size()) - 1; }
    const Eigen::VectorXd& pair(int i, int j) const {
        return pairs[static_cast<std::size_t>(i) * (task_count() + 1) + j];
    }
    Eigen::VectorXd& pair(int i, int j) {
        return pairs[static_cast<std::size_t>(i) * (task_count() + 1) + j];
    }
    void resize_pairs() {
        pairs.assign(static_cast<std::size_t>(task_count()) * (task_count() + 1),
                     Eigen::VectorXd());
    }

    // Generic construction of all pair vectors from the raw features.
    static TaskFeatures from_raw(std::vector<Eigen::VectorXd> raw, double eps);
};

// ---- Selectors ---------------------------------------------------------

struct ProbeSettings {
    std::uint64_t eval_steps = 200;       // reward-probe length
    std::uint64_t measure_steps = 300;    // transfer-probe length on task_j
    std::uint64_t probe_train_cap = 20000;  // cap on a probe's task_i training
};

struct SelectResult {
    TaskId task = -1;
    bool skip = false;       // remove the task without training on it
    std::uint64_t tau = 0;   // env steps the selection consumed
};

// One SelectNextTaskToLearn strategy. The orchestrator owns the loop; a
// selector only answers "which task next, at what step cost". Probes always
// run on clones of the agent and of the task environments.
class TaskSelector {
public:
    TaskSelector(std::vector<const Environment*> tasks, const Environment* target)
        : tasks_(std::move(tasks)), target_(target) {}
    virtual ~TaskSelector() = default;

    virtual std::uint64_t preprocess(const Agent& /*agent*/,
                                     const Environment& /*agent_env*/, Rng& /*rng*/,
                                     std::uint64_t /*tau_cap*/) {
        return 0;
    }

    virtual SelectResult select(const Agent& agent, const Environment& agent_env,
                                const std::vector<TaskId>& remaining, Rng& rng,
                                std::uint64_t tau_cap) = 0;

    int task_count() const { return static_cast<int>(tasks_.size()); }

protected:
    const Environment& task(TaskId t) const { return *tasks_[t]; }
    const Environment& target() const { return *target_; }

private:
    std::vector<const Environment*> tasks_;
    const Environment* target_;
};

// Greedy on probe rewards: evaluates every remaining task with a clone and
// picks the one where the clone collected the most reward.
class RmgsSelector final : public TaskSelector {
public:
    RmgsSelector(std::vector<const Environment*> tasks, const Environment* target,
                 ProbeSettings settings)
        : TaskSelector(std::move(tasks), target), settings_(settings) {}

    SelectResult select(const Agent& agent, const Environment& agent_env,
                        const std::vector<TaskId>& remaining, Rng& rng,
                        std::uint64_t tau_cap) override;

private:
    ProbeSettings settings_;
};

// Shared plan serving for the chain-based selectors: preprocess builds the
// transferability matrix, the chain is computed once from it, and select()
// hands out the next element at zero cost.
class ChainSelector : public TaskSelector {
public:
    using TaskSelector::TaskSelector;

    SelectResult select(const Agent& agent, const Environment& agent_env,
                        const std::vector<TaskId>& remaining, Rng& rng,
                        std::uint64_t tau_cap) final;

    const TransferMatrix& matrix() const { return matrix_; }
    const std::vector<TaskId>& plan() const { return plan_; }

protected:
    TransferMatrix matrix_;

private:
    std::vector<TaskId> plan_;
    std::size_t next_ = 0;
};

// Measures the full transferability matrix with clone probes.
class LtmsSelector final : public ChainSelector {
public:
    LtmsSelector(std::vector<const Environment*> tasks, const Environment* target,
                 ProbeSettings settings)
        : ChainSelector(std::move(tasks), target), settings_(settings) {}

    std::uint64_t preprocess(const Agent& agent, const Environment& agent_env, Rng& rng,
                             std::uint64_t tau_cap) override;

private:
    ProbeSettings settings_;
};

// Measures only `pair_budget` A-optimally chosen pairs and predicts the
// rest from the pair-feature regression.
class ActiveLtmsSelector final : public ChainSelector {
public:
    ActiveLtmsSelector(std::vector<const Environment*> tasks, const Environment* target,
                       ProbeSettings settings, TaskFeatures features, int pair_budget,
                       double ridge_lambda = 1e-6)
        : ChainSelector(std::move(tasks), target),
          settings_(settings),
          features_(std::move(features)),
          pair_budget_(pair_budget),
          ridge_lambda_(ridge_lambda) {}

    std::uint64_t preprocess(const Agent& agent, const Environment& agent_env, Rng& rng,
                             std::uint64_t tau_cap) override;

private:
    ProbeSettings settings_;
    TaskFeatures features_;
    int pair_budget_;
    double ridge_lambda_;
};

// Reward-greedy selection with regression over sequence-task features: at
// each step only `measure_budget` tasks are probed (picked A-optimally),
// the rest are predicted, and tasks whose value falls below `prune_value`
// are skipped instead of trained.
class ActiveRmgsSelector final : public TaskSelector {
public:
    ActiveRmgsSelector(std::vector<const Environment*> tasks, const Environment* target,
                       ProbeSettings settings, TaskFeatures features, int measure_budget,
                       std::optional<double> prune_value = std::nullopt,
                       std::optional<double> diversity_threshold = std::nullopt,
                       double feature_eps = 1e-6, double ridge_lambda = 1e-6)
        : TaskSelector(std::move(tasks), target),
          settings_(settings),
          features_(std::move(features)),
          design_(features_.raw.empty() ? 1 : static_cast<int>(features_.raw[0].size()) + 1),
          measure_budget_(measure_budget),
          prune_value_(prune_value),
          diversity_threshold_(diversity_threshold),
          feature_eps_(feature_eps),
          ridge_lambda_(ridge_lambda) {}

    SelectResult select(const Agent& agent, const Environment& agent_env,
                        const std::vector<TaskId>& remaining, Rng& rng,
                        std::uint64_t tau_cap) override;

    bool used_ridge_fallback() const { return used_ridge_; }

private:
    ProbeSettings settings_;
    TaskFeatures features_;
    active::DesignState design_;
    int measure_budget_;
    std::optional<double> prune_value_;
    std::optional<double> diversity_threshold_;
    double feature_eps_;
    double ridge_lambda_;
    std::vector<TaskId> curriculum_;
    bool used_ridge_ = false;
};

// Serves a caller-supplied permutation; used by the curriculum enumerator.
class FixedSelector final : public TaskSelector {
public:
    FixedSelector(std::vector<const Environment*> tasks, const Environment* target,
                  std::vector<TaskId> order)
        : TaskSelector(std::move(tasks), target), order_(std::move(order)) {}

    SelectResult select(const Agent& agent, const Environment& agent_env,
                        const std::vector<TaskId>& remaining, Rng& rng,
                        std::uint64_t tau_cap) override;

private:
    std::vector<TaskId> order_;
    std::size_t next_ = 0;
};

}  // namespace currl
