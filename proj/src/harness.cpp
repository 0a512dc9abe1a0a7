#include "currl/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "currl/cartpole.hpp"
#include "currl/grid_env.hpp"

namespace currl {

namespace {

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

CartPoleParams cartpole_params(const CartPoleSetup& setup, const CartPoleTaskSpec& task) {
    CartPoleParams params;
    params.x_bound = task.x_bound;
    params.angle_bound = task.angle_deg * kDegToRad;
    params.cart_mass = setup.cart_mass;
    params.pole_mass = setup.pole_mass;
    params.pole_half_length = setup.pole_half_length;
    params.force_magnitude = setup.force_magnitude;
    params.gravity = setup.gravity;
    params.dt = setup.dt;
    params.step_cap = setup.step_cap;
    params.validate();
    return params;
}

double mean_goal_distance(const GridLayout& layout) {
    double sum = 0.0;
    int count = 0;
    for (const Cell& c : layout.feasible_cells()) {
        if (c == layout.goal) {
            continue;
        }
        if (const auto d = bfs_distance(layout, c, layout.goal)) {
            sum += *d;
            ++count;
        }
    }
    return count > 0 ? sum / count : 0.0;
}

void write_lines(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write file: " + path.string());
    }
    out << content;
}

// Runs `fn(0..job_count)` on a small worker pool; results must be written
// into per-index slots so scheduling cannot affect any output.
void run_parallel(std::size_t job_count, int configured_jobs,
                  const std::function<void(std::size_t)>& fn) {
    int workers = configured_jobs == 0
                      ? static_cast<int>(std::thread::hardware_concurrency())
                      : configured_jobs;
    workers = std::max(1, std::min<int>(workers, static_cast<int>(job_count)));
    if (workers == 1) {
        for (std::size_t i = 0; i < job_count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < job_count;) {
                fn(i);
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
}

std::string permutation_label(const std::vector<TaskId>& permutation) {
    if (permutation.empty()) {
        return "baseline";
    }
    std::string out;
    for (std::size_t i = 0; i < permutation.size(); ++i) {
        if (i > 0) {
            out.push_back('-');
        }
        out += std::to_string(permutation[i]);
    }
    return out;
}

struct MeanStd {
    double mean = 0.0;
    double stddev = 0.0;
};

MeanStd mean_std(const std::vector<double>& values) {
    MeanStd out;
    if (values.empty()) {
        return out;
    }
    for (double v : values) {
        out.mean += v;
    }
    out.mean /= static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) {
            ss += (v - out.mean) * (v - out.mean);
        }
        out.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

DomainSetup build_domain_setup(const ExperimentConfig& config) {
    DomainSetup setup;
    if (config.domain == Domain::CartPole) {
        setup.target_params = cartpole_params(config.cartpole, config.cartpole.target);
        std::vector<Eigen::VectorXd> raw;
        for (const CartPoleTaskSpec& task : config.cartpole.sources) {
            setup.source_params.push_back(cartpole_params(config.cartpole, task));
            raw.push_back(Eigen::Vector2d(task.x_bound, task.angle_deg * kDegToRad));
        }
        raw.push_back(Eigen::Vector2d(config.cartpole.target.x_bound,
                                      config.cartpole.target.angle_deg * kDegToRad));
        setup.bins = config.cartpole.bins;
        setup.features = TaskFeatures::from_raw(std::move(raw), config.active.feature_epsilon);
        setup.task_count = static_cast<int>(setup.source_params.size());
        return setup;
    }

    setup.target_layout = load_grid_layout(resolve_path(config, config.target_layout));
    for (std::size_t i = 0; i < config.sources.size(); ++i) {
        const SourceSpec& spec = config.sources[i];
        if (spec.layout_path) {
            setup.source_layouts.push_back(
                load_grid_layout(resolve_path(config, *spec.layout_path)));
        } else if (spec.shrink) {
            if (config.domain != Domain::Maze) {
                throw ConfigError("config field `sources`: shrink sources are for the maze domain");
            }
            const auto& r = *spec.shrink;
            setup.source_layouts.push_back(
                shrink_maze(setup.target_layout, r[0], r[1], r[2], r[3]));
        } else {
            if (config.domain != Domain::GridWorld) {
                throw ConfigError("config field `sources`: start sources are for the gridworld domain");
            }
            setup.source_layouts.push_back(move_start(setup.target_layout, *spec.start));
        }
    }
    setup.task_count = static_cast<int>(setup.source_layouts.size());

    std::vector<const GridLayout*> all;
    for (const GridLayout& l : setup.source_layouts) {
        all.push_back(&l);
    }
    all.push_back(&setup.target_layout);

    std::vector<Eigen::VectorXd> raw;
    if (config.domain == Domain::Maze) {
        const double target_cells =
            static_cast<double>(setup.target_layout.feasible_cells().size());
        const double target_dist = mean_goal_distance(setup.target_layout);
        for (const GridLayout* l : all) {
            raw.push_back(Eigen::Vector2d(
                static_cast<double>(l->feasible_cells().size()) / target_cells,
                target_dist > 0.0 ? mean_goal_distance(*l) / target_dist : 0.0));
        }
    } else {
        for (const GridLayout* l : all) {
            if (!l->start) {
                throw ConfigError("gridworld layouts need a start cell");
            }
            const auto d = bfs_distance(*l, *l->start, l->goal);
            if (!d) {
                throw ConfigError("gridworld layout: goal unreachable from start");
            }
            raw.push_back(Eigen::VectorXd::Constant(1, static_cast<double>(*d)));
        }
    }
    setup.features.raw = std::move(raw);
    setup.features.resize_pairs();
    for (int i = 0; i < setup.task_count; ++i) {
        for (int j = 0; j <= setup.task_count; ++j) {
            if (i == j) {
                continue;
            }
            const double f = config.domain == Domain::Maze
                                 ? maze_task_feature(*all[i], *all[j])
                                 : gridworld_task_feature(*all[i], *all[j]);
            setup.features.pair(i, j) = Eigen::Vector2d(1.0, f);
        }
    }
    return setup;
}

std::vector<std::unique_ptr<Environment>> make_source_envs(const DomainSetup& setup,
                                                           Domain domain) {
    std::vector<std::unique_ptr<Environment>> envs;
    if (domain == Domain::CartPole) {
        for (const CartPoleParams& params : setup.source_params) {
            DiscretizerSpec disc = DiscretizerSpec::defaults_for(params);
            disc.bins = setup.bins;
            envs.push_back(std::make_unique<CartPoleEnv>(params, disc));
        }
    } else {
        for (const GridLayout& layout : setup.source_layouts) {
            if (domain == Domain::Maze) {
                envs.push_back(std::make_unique<MazeEnv>(layout));
            } else {
                envs.push_back(std::make_unique<GridWorldEnv>(layout));
            }
        }
    }
    return envs;
}

std::unique_ptr<Environment> make_target_env(const DomainSetup& setup, Domain domain) {
    if (domain == Domain::CartPole) {
        DiscretizerSpec disc = DiscretizerSpec::defaults_for(setup.target_params);
        disc.bins = setup.bins;
        return std::make_unique<CartPoleEnv>(setup.target_params, disc);
    }
    if (domain == Domain::Maze) {
        return std::make_unique<MazeEnv>(setup.target_layout);
    }
    return std::make_unique<GridWorldEnv>(setup.target_layout);
}

std::unique_ptr<TaskSelector> make_selector(SelectorKind kind,
                                            const ExperimentConfig& config,
                                            const DomainSetup& setup,
                                            std::vector<const Environment*> tasks,
                                            const Environment* target) {
    const ProbeSettings probes{config.probe_steps, config.measure_steps,
                               config.probe_train_cap};
    const int k = setup.task_count;
    switch (kind) {
        case SelectorKind::Baseline:
            return nullptr;
        case SelectorKind::Rmgs:
            return std::make_unique<RmgsSelector>(std::move(tasks), target, probes);
        case SelectorKind::Ltms:
            return std::make_unique<LtmsSelector>(std::move(tasks), target, probes);
        case SelectorKind::ActiveRmgs:
            return std::make_unique<ActiveRmgsSelector>(
                std::move(tasks), target, probes, setup.features,
                config.active.measure_budget, config.active.prune_value,
                config.active.diversity_threshold, config.active.feature_epsilon);
        case SelectorKind::ActiveLtms:
            return std::make_unique<ActiveLtmsSelector>(
                std::move(tasks), target, probes, setup.features,
                config.active.pair_budget.value_or(k * k));
        case SelectorKind::Fixed:
            return std::make_unique<FixedSelector>(std::move(tasks), target,
                                                   config.permutation);
    }
    return nullptr;
}

RunOutcome execute_run(const ExperimentConfig& config, const DomainSetup& setup,
                       SelectorKind kind, int run_index) {
    const Rng run_rng =
        Rng(config.master_seed).child({static_cast<std::uint64_t>(run_index)});

    const auto sources = make_source_envs(setup, config.domain);
    const auto target = make_target_env(setup, config.domain);
    std::vector<const Environment*> tasks;
    for (const auto& env : sources) {
        tasks.push_back(env.get());
    }

    const auto selector = make_selector(kind, config, setup, tasks, target.get());
    Agent agent(target->state_count(), target->action_count(), config.agent);
    const RunPlan plan{config.stage_stop, config.target_stop, config.total_budget};

    RunOutcome outcome{run_index, run_rng.seed(), kind,
                       run_active_simulators(std::move(agent), tasks, *target,
                                             selector.get(), plan, run_rng),
                       std::nullopt};
    if (const auto* chain = dynamic_cast<const ChainSelector*>(selector.get())) {
        outcome.transfer_matrix = chain->matrix();
    }
    return outcome;
}

std::vector<RunRecord> records_for(const RunOutcome& outcome) {
    std::vector<RunRecord> records;
    const std::string selector{selector_name(outcome.selector)};
    std::uint64_t steps = 0;
    double reward = 0.0;

    const auto push = [&](const std::string& phase, int stage, int episode,
                          double episode_reward, bool converged) {
        records.push_back(RunRecord{outcome.run_id, outcome.seed, selector, phase, stage,
                                    steps, episode, episode_reward, reward, converged});
    };

    if (outcome.selector != SelectorKind::Baseline) {
        steps += outcome.result.ledger.preprocess_tau;
        push("preprocess", -1, -1, 0.0, false);
    }
    for (std::size_t k = 0; k < outcome.result.stages.size(); ++k) {
        const StageLog& stage = outcome.result.stages[k];
        steps += stage.select_tau;
        push("probe", static_cast<int>(k), -1, 0.0, false);
        if (stage.skipped) {
            continue;
        }
        for (std::size_t e = 0; e < stage.episodes.size(); ++e) {
            steps += stage.episodes[e].steps;
            reward += stage.episodes[e].reward;
            push("curriculum", static_cast<int>(k), static_cast<int>(e),
                 stage.episodes[e].reward, false);
        }
    }
    const auto& target = outcome.result.target;
    for (std::size_t e = 0; e < target.episodes.size(); ++e) {
        steps += target.episodes[e].steps;
        reward += target.episodes[e].reward;
        const bool converged = target.converged && e + 1 == target.episodes.size();
        push("target", -1, static_cast<int>(e), target.episodes[e].reward, converged);
    }
    return records;
}

std::vector<AggregatePoint> aggregate_reward_curves(
    const std::vector<std::vector<std::pair<std::uint64_t, double>>>& runs) {
    std::set<std::uint64_t> grid;
    for (const auto& run : runs) {
        for (const auto& [step, _] : run) {
            grid.insert(step);
        }
    }
    std::vector<AggregatePoint> out;
    std::vector<std::size_t> cursor(runs.size(), 0);
    std::vector<double> current(runs.size(), 0.0);
    for (std::uint64_t step : grid) {
        std::vector<double> values;
        values.reserve(runs.size());
        for (std::size_t r = 0; r < runs.size(); ++r) {
            while (cursor[r] < runs[r].size() && runs[r][cursor[r]].first <= step) {
                current[r] = runs[r][cursor[r]].second;
                ++cursor[r];
            }
            values.push_back(current[r]);
        }
        const MeanStd ms = mean_std(values);
        out.push_back(AggregatePoint{step, ms.mean, ms.stddev});
    }
    return out;
}

namespace {

std::string records_csv(const std::vector<RunRecord>& records) {
    std::string out = "run_id,seed,selector,phase,stage,cumulative_steps,"
                      "episode_index,episode_reward,cumulative_reward,converged\n";
    for (const RunRecord& r : records) {
        out += std::to_string(r.run_id);
        out += ',';
        out += std::to_string(r.seed);
        out += ',';
        out += r.selector;
        out += ',';
        out += r.phase;
        out += ',';
        out += std::to_string(r.stage);
        out += ',';
        out += std::to_string(r.cumulative_steps);
        out += ',';
        out += std::to_string(r.episode_index);
        out += ',';
        out += format_double(r.episode_reward);
        out += ',';
        out += format_double(r.cumulative_reward);
        out += ',';
        out += r.converged ? '1' : '0';
        out += '\n';
    }
    return out;
}

std::vector<std::pair<std::uint64_t, double>> reward_curve(
    const std::vector<RunRecord>& records) {
    std::vector<std::pair<std::uint64_t, double>> curve;
    for (const RunRecord& r : records) {
        curve.emplace_back(r.cumulative_steps, r.cumulative_reward);
    }
    return curve;
}

std::string aggregate_csv_block(const std::string& selector,
                                const std::vector<AggregatePoint>& points,
                                std::size_t n_runs) {
    std::string out;
    for (const AggregatePoint& p : points) {
        out += selector;
        out += ',';
        out += std::to_string(p.step);
        out += ',';
        out += format_double(p.mean);
        out += ',';
        out += format_double(p.stddev);
        out += ',';
        out += std::to_string(n_runs);
        out += '\n';
    }
    return out;
}

}  // namespace

MonteCarloResult monte_carlo(const ExperimentConfig& config) {
    const DomainSetup setup = build_domain_setup(config);
    MonteCarloResult result;

    struct Job {
        std::size_t selector_index;
        int run;
    };
    std::vector<Job> jobs;
    for (std::size_t s = 0; s < config.selectors.size(); ++s) {
        for (int r = 0; r < config.n_runs; ++r) {
            jobs.push_back({s, r});
        }
    }
    std::vector<std::optional<RunOutcome>> outcomes(jobs.size());
    std::vector<std::optional<RunFailure>> failures(jobs.size());
    run_parallel(jobs.size(), config.jobs, [&](std::size_t i) {
        const Job& job = jobs[i];
        try {
            outcomes[i] =
                execute_run(config, setup, config.selectors[job.selector_index], job.run);
        } catch (const std::exception& e) {
            failures[i] =
                RunFailure{job.run, config.selectors[job.selector_index], e.what()};
        }
    });

    const std::filesystem::path out_dir(config.out_dir);
    std::filesystem::create_directories(out_dir);

    std::string aggregate = "selector,cumulative_steps,mean_cumulative_reward,"
                            "std_cumulative_reward,n_runs\n";
    for (std::size_t s = 0; s < config.selectors.size(); ++s) {
        SelectorOutcomes per_selector{config.selectors[s], {}};
        std::vector<RunRecord> records;
        std::vector<std::vector<std::pair<std::uint64_t, double>>> curves;
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            if (jobs[i].selector_index != s || !outcomes[i]) {
                continue;
            }
            const auto run_records = records_for(*outcomes[i]);
            curves.push_back(reward_curve(run_records));
            records.insert(records.end(), run_records.begin(), run_records.end());
            if (config.dump_transfer_matrices && outcomes[i]->transfer_matrix) {
                std::ostringstream matrix;
                write_transfer_matrix_csv(matrix, *outcomes[i]->transfer_matrix);
                const auto path =
                    out_dir / ("transfer_matrix_" +
                               std::string(selector_name(config.selectors[s])) + "_run" +
                               std::to_string(outcomes[i]->run_id) + ".csv");
                write_lines(path, matrix.str());
                result.files.push_back(path);
            }
            per_selector.runs.push_back(std::move(*outcomes[i]));
        }
        const auto path =
            out_dir /
            ("records_" + std::string(selector_name(config.selectors[s])) + ".csv");
        write_lines(path, records_csv(records));
        result.files.push_back(path);
        aggregate += aggregate_csv_block(std::string(selector_name(config.selectors[s])),
                                         aggregate_reward_curves(curves), curves.size());
        result.selectors.push_back(std::move(per_selector));
    }
    const auto aggregate_path = out_dir / "aggregate.csv";
    write_lines(aggregate_path, aggregate);
    result.files.push_back(aggregate_path);

    for (const auto& f : failures) {
        if (f) {
            result.failures.push_back(*f);
        }
    }
    if (!result.failures.empty()) {
        std::string text;
        for (const RunFailure& f : result.failures) {
            text += "run " + std::to_string(f.run_id) + " selector " +
                    std::string(selector_name(f.selector)) + ": " + f.message + "\n";
        }
        const auto path = out_dir / "failures.txt";
        write_lines(path, text);
        result.files.push_back(path);
    }
    return result;
}

std::vector<TaskId> unrank_permutation(std::uint64_t index, int n) {
    std::vector<TaskId> pool;
    for (int i = 0; i < n; ++i) {
        pool.push_back(i);
    }
    std::vector<std::uint64_t> factorial(static_cast<std::size_t>(n) + 1, 1);
    for (int i = 1; i <= n; ++i) {
        factorial[i] = factorial[i - 1] * static_cast<std::uint64_t>(i);
    }
    if (index >= factorial[n]) {
        throw std::invalid_argument("unrank_permutation: index out of range");
    }
    std::vector<TaskId> out;
    for (int i = n; i >= 1; --i) {
        const std::uint64_t f = factorial[i - 1];
        const auto digit = static_cast<std::size_t>(index / f);
        index %= f;
        out.push_back(pool[digit]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(digit));
    }
    return out;
}

EnumerationResult enumerate_curricula(const ExperimentConfig& config) {
    if (config.target_stop.kind != StopRule::Kind::UntilConvergence) {
        throw ConfigError(
            "enumerate: target_stop must be until_convergence so curricula can be "
            "ranked by steps to convergence");
    }
    const DomainSetup setup = build_domain_setup(config);
    const int k = setup.task_count;
    if (k < 1) {
        throw ConfigError("enumerate: the config defines no training tasks");
    }
    if (k > config.enumerate_cap) {
        throw ConfigError("enumerate: " + std::to_string(k) + " tasks means " +
                          std::to_string(k) + "! curricula; refusing above enumerate_cap=" +
                          std::to_string(config.enumerate_cap));
    }
    std::uint64_t permutations = 1;
    for (int i = 2; i <= k; ++i) {
        permutations *= static_cast<std::uint64_t>(i);
    }

    std::vector<ExperimentConfig> variants;
    for (std::uint64_t p = 0; p < permutations; ++p) {
        ExperimentConfig variant = config;
        variant.permutation = unrank_permutation(p, k);
        variants.push_back(std::move(variant));
    }

    struct Job {
        std::int64_t variant;  // -1 = baseline
        int run;
    };
    std::vector<Job> jobs;
    for (std::uint64_t p = 0; p < permutations; ++p) {
        for (int r = 0; r < config.n_runs; ++r) {
            jobs.push_back({static_cast<std::int64_t>(p), r});
        }
    }
    for (int r = 0; r < config.n_runs; ++r) {
        jobs.push_back({-1, r});
    }

    std::vector<double> steps(jobs.size(), 0.0);
    run_parallel(jobs.size(), config.jobs, [&](std::size_t i) {
        const Job& job = jobs[i];
        const ExperimentConfig& cfg = job.variant < 0 ? config : variants[job.variant];
        const SelectorKind kind =
            job.variant < 0 ? SelectorKind::Baseline : SelectorKind::Fixed;
        const RunOutcome outcome = execute_run(cfg, setup, kind, job.run);
        steps[i] = static_cast<double>(outcome.result.time_to_threshold().value());
    });

    EnumerationResult result;
    std::string csv = "curriculum_index,permutation,mean_steps_to_convergence,std\n";
    std::size_t cursor = 0;
    for (std::uint64_t p = 0; p < permutations; ++p) {
        std::vector<double> values(steps.begin() + cursor,
                                   steps.begin() + cursor + config.n_runs);
        cursor += config.n_runs;
        const MeanStd ms = mean_std(values);
        CurriculumRow row{static_cast<int>(p), variants[p].permutation, ms.mean, ms.stddev};
        csv += std::to_string(row.index) + ',' + permutation_label(row.permutation) + ',' +
               format_double(row.mean_steps) + ',' + format_double(row.std_steps) + '\n';
        result.rows.push_back(std::move(row));
    }
    std::vector<double> baseline_values(steps.begin() + cursor, steps.end());
    const MeanStd ms = mean_std(baseline_values);
    CurriculumRow baseline{-1, {}, ms.mean, ms.stddev};
    csv += "-1,baseline," + format_double(baseline.mean_steps) + ',' +
           format_double(baseline.std_steps) + '\n';
    result.rows.push_back(std::move(baseline));

    const std::filesystem::path out_dir(config.out_dir);
    std::filesystem::create_directories(out_dir);
    const auto path = out_dir / "curricula.csv";
    write_lines(path, csv);
    result.files.push_back(path);
    return result;
}

namespace {

struct ParsedRecords {
    std::string selector;
    // per run_id, in file order
    std::map<int, std::vector<std::pair<std::uint64_t, double>>> curves;
};

ParsedRecords parse_records_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error(path.string() + ": empty records file");
    }
    ParsedRecords parsed;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() != 10) {
            throw std::runtime_error(path.string() + ": malformed row: " + line);
        }
        const int run_id = std::stoi(fields[0]);
        parsed.selector = fields[2];
        parsed.curves[run_id].emplace_back(std::stoull(fields[5]), std::stod(fields[8]));
    }
    return parsed;
}

std::string figure_csv(const std::vector<ParsedRecords>& groups) {
    std::string out =
        "selector,cumulative_steps,mean_cumulative_reward,std_cumulative_reward\n";
    for (const ParsedRecords& group : groups) {
        std::vector<std::vector<std::pair<std::uint64_t, double>>> runs;
        for (const auto& [run_id, curve] : group.curves) {
            runs.push_back(curve);
        }
        for (const AggregatePoint& p : aggregate_reward_curves(runs)) {
            out += group.selector + ',' + std::to_string(p.step) + ',' +
                   format_double(p.mean) + ',' + format_double(p.stddev) + '\n';
        }
    }
    return out;
}

}  // namespace

PlotManifest emit_plot_data(const std::filesystem::path& results_dir,
                            const std::filesystem::path& out_dir) {
    PlotManifest manifest;
    std::filesystem::create_directories(out_dir);

    std::vector<std::filesystem::path> record_files;
    if (std::filesystem::exists(results_dir)) {
        for (const auto& entry : std::filesystem::directory_iterator(results_dir)) {
            const std::string name = entry.path().filename().string();
            if (name.rfind("records_", 0) == 0 && name.ends_with(".csv")) {
                record_files.push_back(entry.path());
            }
        }
    }
    std::sort(record_files.begin(), record_files.end());

    std::vector<ParsedRecords> groups;
    for (const auto& path : record_files) {
        ParsedRecords parsed = parse_records_csv(path);
        if (!parsed.curves.empty()) {
            groups.push_back(std::move(parsed));
        }
    }

    const auto emit = [&](const std::string& name, const std::string& content) {
        write_lines(out_dir / name, content);
        manifest.emitted.push_back(name);
    };

    if (groups.empty()) {
        manifest.omitted.emplace_back("fig_reward_vs_steps.csv", "no records found");
    } else {
        emit("fig_reward_vs_steps.csv", figure_csv(groups));
    }

    std::vector<ParsedRecords> comparison;
    bool has_ltms_flavor = false;
    for (const ParsedRecords& g : groups) {
        if (g.selector == "baseline" || g.selector == "ltms" || g.selector == "active_ltms") {
            comparison.push_back(g);
            has_ltms_flavor |= (g.selector != "baseline");
        }
    }
    if (!has_ltms_flavor) {
        manifest.omitted.emplace_back("fig_active_comparison.csv",
                                      "no ltms or active_ltms records");
    } else {
        emit("fig_active_comparison.csv", figure_csv(comparison));
    }

    const auto curricula = results_dir / "curricula.csv";
    if (!std::filesystem::exists(curricula)) {
        manifest.omitted.emplace_back("fig_curricula_bars.csv", "no curricula.csv");
    } else {
        std::ifstream in(curricula);
        std::ostringstream buf;
        buf << in.rdbuf();
        emit("fig_curricula_bars.csv", buf.str());
    }

    std::string text;
    for (const auto& name : manifest.emitted) {
        text += "emitted: " + name + "\n";
    }
    for (const auto& [name, reason] : manifest.omitted) {
        text += "omitted: " + name + " (" + reason + ")\n";
    }
    write_lines(out_dir / "manifest.txt", text);
    return manifest;
}

}  // namespace currl
