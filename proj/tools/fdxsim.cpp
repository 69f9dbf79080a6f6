// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: runs the sample-size-ratio search, the
// coherence-time rate sweep, estimator-variance validation, or a single
// diagnostic trial, writing results as CSV plus a companion plot script.

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fdx/config.hpp"
#include "fdx/csv.hpp"
#include "fdx/errors.hpp"
#include "fdx/experiment.hpp"
#include "fdx/rng.hpp"

namespace {

std::string plot_path_for(const std::string& out) {
    const std::string suffix = ".csv";
    std::string stem = out;
    if (stem.size() > suffix.size() &&
        stem.compare(stem.size() - suffix.size(), suffix.size(), suffix) == 0) {
        stem.resize(stem.size() - suffix.size());
    }
    return stem + "_plot.py";
}

void write_outputs(const std::vector<fdx::ExperimentRecord>& records, const std::string& out) {
    fdx::emit_csv(records, out);
    fdx::emit_plot_script(records, plot_path_for(out));
    std::cout << records.size() << " records -> " << out << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Full-duplex self-interference estimation simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path = "results.csv";
    std::string mode_name;
    std::uint64_t seed = 0;
    int trials = 0;
    int parallel = 0;

    auto* config_opt = app.add_option("--config", config_path, "Configuration file");
    auto* seed_opt = app.add_option("--seed", seed, "Master seed");
    auto* mode_opt =
        app.add_option("--mode", mode_name, "Estimator structure")
            ->check(CLI::IsMember({"linear", "wl"}));
    app.add_option("--out", out_path, "Output CSV path")->capture_default_str();
    auto* trials_opt = app.add_option("--trials", trials, "Monte-Carlo trials per point");
    auto* parallel_opt = app.add_option("--parallel", parallel, "Worker thread count");

    auto* ratio_cmd =
        app.add_subcommand("ratio", "Sample-size ratio vs calibration window length");
    auto* rates_cmd =
        app.add_subcommand("rates", "Achievable rates vs channel coherence time");
    auto* crlb_cmd =
        app.add_subcommand("crlb", "Estimator variance vs the closed-form bound");
    auto* trial_cmd = app.add_subcommand("trial", "One diagnostic pipeline trial");
    for (auto* cmd : {ratio_cmd, rates_cmd, crlb_cmd, trial_cmd}) cmd->fallthrough();

    try {
        app.parse(argc, argv);

        fdx::SimConfig cfg;
        if (config_opt->count() > 0) cfg = fdx::load_config(config_path);
        if (seed_opt->count() > 0) cfg.seed = seed;
        if (mode_opt->count() > 0)
            cfg.mode = mode_name == "wl" ? fdx::Mode::kWidelyLinear : fdx::Mode::kLinear;
        if (trials_opt->count() > 0) cfg.trials = trials;
        if (parallel_opt->count() > 0) cfg.parallel = parallel;
        cfg.validate();

        if (ratio_cmd->parsed()) {
            write_outputs(
                fdx::experiment::run_ratio_experiment(cfg, cfg.ratio_nc_values, cfg.trials),
                out_path);
        } else if (rates_cmd->parsed()) {
            const auto t_grid = fdx::experiment::log_grid(
                cfg.rate_tcoh_min_s, cfg.rate_tcoh_max_s, cfg.rate_tcoh_points);
            write_outputs(
                fdx::experiment::run_rate_experiment(cfg, cfg.rate_n_values, t_grid, cfg.trials),
                out_path);
        } else if (crlb_cmd->parsed()) {
            const int n_trials = trials_opt->count() > 0 ? trials : cfg.crlb_trials;
            write_outputs(
                fdx::experiment::run_crlb_validation(cfg, cfg.crlb_n_values, n_trials),
                out_path);
        } else {
            fdx::Rng stream = fdx::make_stream(cfg.seed, fdx::experiment::kTrialExperimentId, 0,
                                               fdx::StreamPurpose::kGeneric);
            const auto result =
                fdx::experiment::run_single_trial(cfg, cfg.trial_n, cfg.trial_with_soi, stream);
            std::cout << "sinr_db=" << fdx::format_number(result.sinr_db) << "\n"
                      << "estimate_error_norm=" << fdx::format_number(result.estimate_error_norm)
                      << "\n";
        }
        return fdx::kExitOk;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return fdx::kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return fdx::exit_code_for(e);
    }
}
