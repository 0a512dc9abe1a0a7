#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "currl/harness.hpp"

namespace {

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> runs;
    std::optional<int> jobs;
    std::optional<std::string> out;
};

currl::ExperimentConfig load(const std::string& path, const Overrides& overrides) {
    currl::ExperimentConfig config = currl::parse_config(path);
    if (overrides.seed) config.master_seed = *overrides.seed;
    if (overrides.runs) config.n_runs = *overrides.runs;
    if (overrides.jobs) config.jobs = *overrides.jobs;
    if (overrides.out) config.out_dir = *overrides.out;
    return config;
}

void add_overrides(CLI::App* cmd, Overrides& overrides) {
    cmd->add_option("--seed", overrides.seed, "Master seed override");
    cmd->add_option("--runs", overrides.runs, "Number of Monte Carlo runs override")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--jobs", overrides.jobs, "Worker threads (0 = all cores)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--out", overrides.out, "Output directory override");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Online curriculum learning experiments for tabular RL"};
    app.require_subcommand(1);

    std::string config_path;
    std::string results_dir;
    Overrides overrides;
    std::uint64_t verify_seed = 20240601;
    std::string plot_out;

    CLI::App* run = app.add_subcommand("run", "Monte Carlo experiment from a config file");
    run->add_option("config", config_path, "Experiment config (JSON)")->required();
    add_overrides(run, overrides);

    CLI::App* enumerate =
        app.add_subcommand("enumerate", "Rank every full-length curriculum");
    enumerate->add_option("config", config_path, "Experiment config (JSON)")->required();
    add_overrides(enumerate, overrides);

    CLI::App* verify =
        app.add_subcommand("verify-active", "Check the least-squares identities");
    verify->add_option("--seed", verify_seed, "Seed for the property suites");

    CLI::App* plot = app.add_subcommand("plot-data", "Figure CSVs from a results directory");
    plot->add_option("results", results_dir, "Directory with records_*.csv")->required();
    plot->add_option("--out", plot_out, "Output directory (default: results dir)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            const auto config = load(config_path, overrides);
            const auto result = currl::monte_carlo(config);
            for (const auto& file : result.files) {
                std::printf("wrote %s\n", file.c_str());
            }
            for (const auto& failure : result.failures) {
                std::fprintf(stderr, "run %d (%s) failed: %s\n", failure.run_id,
                             std::string(currl::selector_name(failure.selector)).c_str(),
                             failure.message.c_str());
            }
            return result.failures.empty() ? 0 : 1;
        }
        if (enumerate->parsed()) {
            const auto config = load(config_path, overrides);
            const auto result = currl::enumerate_curricula(config);
            for (const auto& file : result.files) {
                std::printf("wrote %s\n", file.c_str());
            }
            return 0;
        }
        if (verify->parsed()) {
            const auto report = currl::verify_active(verify_seed);
            for (const auto& p : report.properties) {
                std::printf("[%s] %s: %s\n", p.passed ? "PASS" : "FAIL", p.name.c_str(),
                            p.detail.c_str());
            }
            return report.all_passed() ? 0 : 1;
        }
        if (plot->parsed()) {
            const std::filesystem::path out =
                plot_out.empty() ? std::filesystem::path(results_dir)
                                 : std::filesystem::path(plot_out);
            const auto manifest = currl::emit_plot_data(results_dir, out);
            for (const auto& name : manifest.emitted) {
                std::printf("emitted %s\n", name.c_str());
            }
            for (const auto& [name, reason] : manifest.omitted) {
                std::printf("omitted %s (%s)\n", name.c_str(), reason.c_str());
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
