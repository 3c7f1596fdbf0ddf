// trimode_main.cpp: command line front end.
//
// Subcommands: run (scenario -> report.json + sweep.csv), oracle-check
// (scenario -> oracle_report.json), propagator (print the coefficient matrix
// at a time), special-times (print recurrence/conversion times), beamsplitter
// (network scenario -> network_report.json + network.csv).
//
// Exit codes: 0 success, 2 validation error, 3 oracle certification failure.

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "trimode/scenario.hpp"

namespace {

void print_matrix(const trimode::PropagatorMatrix& m) {
    std::printf("t: %s\n", trimode::format_double(m.t).c_str());
    std::printf("entries (interaction frame, rows a,b,c):\n");
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            std::printf("%s(%s, %s)", c ? "  " : "  ",
                        trimode::format_double(m.entries(r, c).real()).c_str(),
                        trimode::format_double(m.entries(r, c).imag()).c_str());
        }
        std::printf("\n");
    }
    std::printf("free_phases:\n");
    for (const auto& p : m.free_phases) {
        std::printf("  (%s, %s)", trimode::format_double(p.real()).c_str(),
                    trimode::format_double(p.imag()).c_str());
    }
    std::printf("\n");
    std::printf("unitarity_residual: %s\n",
                trimode::format_double(trimode::unitarity_residual(m)).c_str());
}

trimode::CouplingConfig config_of(const trimode::Scenario& s, const char* verb) {
    if (s.network) {
        throw trimode::ScenarioError(std::string(verb) +
                                     ": network scenarios carry no coupling config");
    }
    return s.config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Three bilinearly coupled bosonic modes: closed-form propagation,\n"
                 "cat-state entanglement measures, Fock-space oracle checks and the\n"
                 "beam-splitter conversion network."};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir = ".";
    double tol = 0.0;
    int cutoff = 0;
    bool quiet = false;
    double t = 0.0;
    int n_max = 1;

    auto* run_cmd = app.add_subcommand("run", "Run a scenario: report.json and sweep.csv");
    run_cmd->add_option("scenario", scenario_path, "Scenario JSON file")
        ->required()
        ->check(CLI::ExistingFile);
    run_cmd->add_option("--out-dir", out_dir, "Output directory (default .)");
    auto* run_tol =
        run_cmd->add_option("--tol", tol, "Classification tolerance on 1 - purity");
    auto* run_cutoff =
        run_cmd->add_option("--cutoff", cutoff, "Fock cutoff override for the oracle");
    run_cmd->add_flag("--quiet", quiet, "Suppress progress output");

    auto* oracle_cmd = app.add_subcommand(
        "oracle-check", "Certify branch evolution against the Fock oracle");
    oracle_cmd->add_option("scenario", scenario_path, "Scenario JSON file")
        ->required()
        ->check(CLI::ExistingFile);
    oracle_cmd->add_option("--out-dir", out_dir, "Output directory (default .)");
    auto* oracle_tol =
        oracle_cmd->add_option("--tol", tol, "Max allowed 1 - fidelity (default 1e-6)");
    auto* oracle_cutoff =
        oracle_cmd->add_option("--cutoff", cutoff, "Fock cutoff override");
    oracle_cmd->add_flag("--quiet", quiet, "Suppress progress output");

    auto* prop_cmd = app.add_subcommand(
        "propagator", "Print the coefficient matrix at a given time");
    prop_cmd->add_option("scenario", scenario_path, "Scenario JSON file (config block)")
        ->required()
        ->check(CLI::ExistingFile);
    prop_cmd->add_option("--t", t, "Evolution time")->required();

    auto* times_cmd = app.add_subcommand(
        "special-times", "Print recurrence and conversion times");
    times_cmd->add_option("scenario", scenario_path, "Scenario JSON file (config block)")
        ->required()
        ->check(CLI::ExistingFile);
    times_cmd->add_option("--n-max", n_max, "Highest index to list (default 1)")
        ->check(CLI::PositiveNumber);

    auto* bs_cmd = app.add_subcommand(
        "beamsplitter", "Run the network pipeline: network_report.json and network.csv");
    bs_cmd->add_option("scenario", scenario_path, "Scenario JSON file with a network block")
        ->required()
        ->check(CLI::ExistingFile);
    bs_cmd->add_option("--out-dir", out_dir, "Output directory (default .)");
    bs_cmd->add_flag("--quiet", quiet, "Suppress progress output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        const auto scenario = trimode::load_scenario(scenario_path);
        trimode::RunOptions opts;
        opts.out_dir = out_dir;
        opts.quiet = quiet;

        trimode::RunResult result;
        if (run_cmd->parsed()) {
            if (run_tol->count()) {
                opts.classify_tol = tol;
            }
            if (run_cutoff->count()) {
                opts.cutoff_override = cutoff;
            }
            result = trimode::run_scenario(scenario, opts);
        } else if (oracle_cmd->parsed()) {
            if (oracle_tol->count()) {
                opts.fidelity_tol = tol;
            }
            if (oracle_cutoff->count()) {
                opts.cutoff_override = cutoff;
            }
            result = trimode::run_oracle_check(scenario, opts);
        } else if (bs_cmd->parsed()) {
            result = trimode::run_network(scenario, opts);
        } else if (prop_cmd->parsed()) {
            print_matrix(trimode::compute_coefficients(config_of(scenario, "propagator"), t));
        } else if (times_cmd->parsed()) {
            const auto times =
                trimode::special_times(config_of(scenario, "special-times"), n_max);
            std::printf("conversion:");
            for (double tc : times.conversion) {
                std::printf(" %s", trimode::format_double(tc).c_str());
            }
            std::printf("\nrecurrence:");
            for (double tr : times.recurrence) {
                std::printf(" %s", trimode::format_double(tr).c_str());
            }
            std::printf("\n");
        }

        if (result.exit_code != 0) {
            std::cerr << result.message << "\n";
        } else if (!quiet && !result.message.empty()) {
            std::cout << result.message << "\n";
        }
        return result.exit_code;
    } catch (const trimode::TruncationBreach& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
}
