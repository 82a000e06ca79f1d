#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "piezobeam/commands.hpp"

namespace {

using namespace piezobeam;

struct Options {
    std::string config;
    std::string out;
    bool svg = false;
    int n_modes = 10;
    std::vector<double> mu;
    std::optional<int> threads;
};

int run(const std::string& command, const Options& o) {
    RunConfig config = load_config(o.config);
    if (o.svg) config.svg = true;
    if (o.threads) config.threads = *o.threads;
    ResultBundle bundle;
    if (command == "simulate") {
        bundle = cmd_simulate(config);
    } else if (command == "modes") {
        bundle = cmd_modes(config, o.n_modes);
    } else if (command == "check") {
        bundle = cmd_check(config);
    } else {
        bundle = cmd_limit(config, o.mu);
    }
    const std::string dir = o.out.empty() ? config.output_directory : o.out;
    write_bundle(bundle, dir);
    std::cout << bundle.report.dump(2) << '\n';
    return bundle.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Piezoelectric beam and patch actuator simulator"};
    app.set_version_flag("--version", piezobeam::code_version());
    app.require_subcommand(1);

    Options o;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("config", o.config, "Run configuration (INI)")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", o.out, "Output directory (default: [output] directory)");
        sub->add_flag("--svg", o.svg, "Also write SVG plots");
    };
    CLI::App* simulate = app.add_subcommand("simulate", "Time-domain simulation from rest");
    add_common(simulate);
    CLI::App* modes = app.add_subcommand("modes", "Lowest natural frequencies and mode shapes");
    add_common(modes);
    modes->add_option("--n", o.n_modes, "Number of modes")->check(CLI::PositiveNumber);
    CLI::App* check = app.add_subcommand("check", "Structural decoupling/selectivity checks");
    add_common(check);
    CLI::App* limit = app.add_subcommand("limit", "Electrostatic-limit sweep over mu");
    add_common(limit);
    limit->add_option("--mu", o.mu, "Descending permeability values")->required()->delimiter(',');
    limit->add_option("--threads", o.threads, "Worker threads for the sweep")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : piezobeam::ExitConfigError;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return run(command, o);
    } catch (const piezobeam::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return piezobeam::is_numerical(e.code()) ? piezobeam::ExitNumericalFailure : piezobeam::ExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return piezobeam::ExitNumericalFailure;
    }
}
