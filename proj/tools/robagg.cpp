// robagg <command> --scenario <path> [--csv <path>] [--seed <u64>] [--samples <n>] [--tol <float>]
//
// Prints a human-readable table to stdout. With --csv the same rows are
// written as CSV to the given path ("-" for stdout, replacing the table).

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "robagg/scenario.hpp"

int main(int argc, char** argv) {
    namespace sc = robagg::scenario;

    CLI::App app{"robust belief and taste aggregation toolkit"};
    app.require_subcommand(1, 1);

    std::string scenario_path;
    std::string csv_path;
    sc::RunOptions opt;
    for (const auto& name : sc::command_names()) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--scenario", scenario_path, "scenario file (robagg-scenario/1 JSON)")->required();
        sub->add_option("--csv", csv_path, "write CSV to this path, or - for stdout");
        sub->add_option("--seed", opt.seed, "seed for sampled demonstrations");
        sub->add_option("--samples", opt.samples, "hull samples for demo-invariance")->check(CLI::PositiveNumber);
        sub->add_option("--tol", opt.tol, "pass tolerance for demo-invariance")->check(CLI::PositiveNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        std::ifstream in(scenario_path);
        robagg::require(static_cast<bool>(in), robagg::ErrorCode::SchemaError,
                        "cannot open scenario file '" + scenario_path + "'");
        const auto table = sc::run(command, sc::load(in), opt);
        if (csv_path == "-") {
            sc::write_csv(std::cout, table);
        } else {
            sc::write_human(std::cout, table);
            if (!csv_path.empty()) {
                std::ofstream out(csv_path, std::ios::binary);
                robagg::require(static_cast<bool>(out), robagg::ErrorCode::InvalidArgument,
                                "cannot write CSV to '" + csv_path + "'");
                sc::write_csv(out, table);
            }
        }
        return 0;
    } catch (const robagg::Error& e) {
        std::cerr << "robagg: " << e.what() << "\n";
        return sc::exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "robagg: " << e.what() << "\n";
        return 2;
    }
}
