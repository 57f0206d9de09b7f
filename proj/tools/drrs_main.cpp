#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "drrs/config.hpp"
#include "drrs/harness.hpp"

namespace {

struct GlobalFlags {
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> reps;
    std::optional<int> workers;
    std::optional<std::string> out;
    bool plots = false;
};

drrs::ExperimentConfig load_with_overrides(const std::string& path, const GlobalFlags& flags) {
    drrs::ExperimentConfig config = drrs::load_config(path);
    if (flags.seed) config.seed = *flags.seed;
    if (flags.reps) config.replications = *flags.reps;
    if (flags.workers) config.workers = *flags.workers;
    if (flags.out) config.out_dir = *flags.out;
    if (flags.plots) config.plots = true;
    config.validate();
    return config;
}

void print_output(const drrs::SuiteOutput& output) {
    for (const auto& row : output.estimates)
        std::cout << row.procedure << " n1=" << row.n1 << " N=" << row.budget
                  << " PCS=" << row.pcs_hat << " (se " << row.se << ", " << row.replications
                  << " reps, " << row.wall_seconds << "s)\n";
    for (const auto& file : output.files) std::cout << "wrote " << file << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Distributionally robust ranking and selection: additive allocation procedures"};
    app.require_subcommand(1);

    GlobalFlags flags;
    app.add_option("--seed", flags.seed, "master seed override");
    app.add_option("--reps", flags.reps, "replication count override");
    app.add_option("--workers", flags.workers, "worker thread count (0 = hardware)");
    app.add_option("--out", flags.out, "output directory override");
    app.add_flag("--plots", flags.plots, "emit SVG plots");

    std::string config_path;

    CLI::App* run = app.add_subcommand("run", "run the configured experiment grid");
    run->fallthrough();
    run->add_option("config", config_path, "experiment config (JSON)")->required();

    CLI::App* suite = app.add_subcommand("suite", "run a figure-style experiment suite");
    suite->require_subcommand(1);
    suite->fallthrough();
    for (const char* name : {"pics-decay", "allocation", "gaa-consistency", "compare"}) {
        CLI::App* sub = suite->add_subcommand(name);
        sub->fallthrough();
        sub->add_option("config", config_path, "experiment config")->required();
    }

    CLI::App* verify = app.add_subcommand("verify", "run bound verification checks");
    verify->require_subcommand(1);
    verify->fallthrough();
    for (const char* name : {"bounds", "lemma1"}) {
        CLI::App* sub = verify->add_subcommand(name);
        sub->fallthrough();
        sub->add_option("config", config_path, "experiment config")->required();
    }

    CLI::App* testbed = app.add_subcommand("testbed", "estimate testbed ground truth");
    testbed->require_subcommand(1);
    testbed->fallthrough();
    for (const char* name : {"inventory", "queue"}) {
        CLI::App* sub = testbed->add_subcommand(name);
        sub->fallthrough();
        sub->add_option("config", config_path, "experiment config")->required();
    }

    CLI11_PARSE(app, argc, argv);

    try {
        const drrs::ExperimentConfig config = load_with_overrides(config_path, flags);

        if (run->parsed()) {
            print_output(drrs::run_experiment(config));
            return 0;
        }
        if (suite->parsed()) {
            const std::string name = suite->get_subcommands().front()->get_name();
            drrs::SuiteOutput output;
            if (name == "pics-decay")
                output = drrs::suite_pics_decay(config);
            else if (name == "allocation")
                output = drrs::suite_allocation(config);
            else if (name == "gaa-consistency")
                output = drrs::suite_gaa_consistency(config);
            else
                output = drrs::suite_compare(config);
            print_output(output);
            return 0;
        }
        if (verify->parsed()) {
            const std::string name = verify->get_subcommands().front()->get_name();
            const std::string out_path = config.out_dir + "/verify_" + name + ".csv";
            const int failures = name == "bounds" ? drrs::verify_bounds(config, out_path)
                                                  : drrs::verify_lemma1(config, out_path);
            std::cout << "wrote " << out_path << "\n";
            if (failures > 0) {
                std::cerr << failures << " verification check(s) failed\n";
                return 2;
            }
            std::cout << "all verification checks passed\n";
            return 0;
        }
        if (testbed->parsed()) {
            const std::string name = testbed->get_subcommands().front()->get_name();
            print_output(drrs::testbed_report(config, name));
            return 0;
        }
    } catch (const drrs::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
