#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "currl/config.hpp"
#include "currl/orchestrator.hpp"

namespace currl {

// Shortest round-trip decimal representation; all CSV floats go through
// this so outputs are byte-stable.
std::string format_double(double v);

// One CSV row of the per-run experiment log: an episode of the curriculum
// or target phase, or a phase boundary (preprocess/probe) marker.
struct RunRecord {
    int run_id = 0;
    std::uint64_t seed = 0;
    std::string selector;
    std::string phase;  // preprocess | probe | curriculum | target
    int stage = -1;
    std::uint64_t cumulative_steps = 0;
    int episode_index = -1;
    double episode_reward = 0.0;
    double cumulative_reward = 0.0;
    bool converged = false;
};

struct RunOutcome {
    int run_id = 0;
    std::uint64_t seed = 0;
    SelectorKind selector = SelectorKind::Baseline;
    RunResult result;
    std::optional<TransferMatrix> transfer_matrix;  // chain selectors only
};

struct RunFailure {
    int run_id = 0;
    SelectorKind selector = SelectorKind::Baseline;
    std::string message;
};

struct SelectorOutcomes {
    SelectorKind kind = SelectorKind::Baseline;
    std::vector<RunOutcome> runs;
};

struct MonteCarloResult {
    std::vector<SelectorOutcomes> selectors;
    std::vector<RunFailure> failures;
    std::vector<std::filesystem::path> files;
};

// Immutable per-experiment material: parsed layouts / physics parameters
// and the task features. Environments are instantiated from this per run.
struct DomainSetup {
    std::vector<GridLayout> source_layouts;
    GridLayout target_layout;
    std::vector<CartPoleParams> source_params;
    CartPoleParams target_params;
    std::array<int, 4> bins{6, 6, 12, 6};
    TaskFeatures features;
    int task_count = 0;
};

DomainSetup build_domain_setup(const ExperimentConfig& config);
std::vector<std::unique_ptr<Environment>> make_source_envs(const DomainSetup& setup,
                                                           Domain domain);
std::unique_ptr<Environment> make_target_env(const DomainSetup& setup, Domain domain);
std::unique_ptr<TaskSelector> make_selector(SelectorKind kind,
                                            const ExperimentConfig& config,
                                            const DomainSetup& setup,
                                            std::vector<const Environment*> tasks,
                                            const Environment* target);

// One independent run: fresh environments, fresh agent, child seed derived
// from (master seed, run index).
RunOutcome execute_run(const ExperimentConfig& config, const DomainSetup& setup,
                       SelectorKind kind, int run_index);

std::vector<RunRecord> records_for(const RunOutcome& outcome);

// Step-indexed mean/std of cumulative reward across runs, on the union grid
// of the runs' checkpoints with forward-filled values.
struct AggregatePoint {
    std::uint64_t step = 0;
    double mean = 0.0;
    double stddev = 0.0;
};
std::vector<AggregatePoint> aggregate_reward_curves(
    const std::vector<std::vector<std::pair<std::uint64_t, double>>>& runs);

// Runs n_runs independent runs per configured selector, writes
// records_<selector>.csv per selector plus aggregate.csv, and returns the
// in-memory outcomes. Failed runs are excluded from the files and reported.
MonteCarloResult monte_carlo(const ExperimentConfig& config);

// ---- Curriculum enumeration ---------------------------------------------

struct CurriculumRow {
    int index = -1;  // lexicographic permutation index; -1 marks the baseline
    std::vector<TaskId> permutation;
    double mean_steps = 0.0;
    double std_steps = 0.0;
};

struct EnumerationResult {
    std::vector<CurriculumRow> rows;
    std::vector<std::filesystem::path> files;
};

// Lexicographic unranking of the permutations of {0..n-1}.
std::vector<TaskId> unrank_permutation(std::uint64_t index, int n);

// Runs every full-length curriculum (plus the baseline) through the fixed
// selector and tabulates mean steps to target convergence.
EnumerationResult enumerate_curricula(const ExperimentConfig& config);

// ---- Numerical property verification ------------------------------------

struct PropertyResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerifyReport {
    std::vector<PropertyResult> properties;
    bool all_passed() const {
        for (const auto& p : properties) {
            if (!p.passed) return false;
        }
        return true;
    }
};

// Seeded property suites for the incremental least-squares machinery:
// Sherman-Morrison consistency, the trace-reduction identity, greedy
// A-optimality of sample selection, and the top-eigenvector claim.
VerifyReport verify_active(std::uint64_t seed);

// Single-instance check behind the trace-identity suite, exposed so tests
// can demonstrate sensitivity to perturbed inputs.
bool trace_identity_holds(const Eigen::MatrixXd& A, const Eigen::VectorXd& v, double tol);

// ---- Figure data ---------------------------------------------------------

struct PlotManifest {
    std::vector<std::string> emitted;
    std::vector<std::pair<std::string, std::string>> omitted;  // file, reason
};

// Turns a results directory (records_*.csv, optionally curricula.csv) into
// per-figure CSV files plus a manifest of what was emitted or omitted.
PlotManifest emit_plot_data(const std::filesystem::path& results_dir,
                            const std::filesystem::path& out_dir);

}  // namespace currl
