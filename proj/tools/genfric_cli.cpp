#include "genfric/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"genfric: reachable-set norm, dry-friction feedback and damped oscillator simulation"};
    app.require_subcommand(1);

    genfric::CommandOptions opts;
    const std::pair<const char*, const char*> commands[] = {
        {"simulate", "integrate the closed loop; writes the trajectory CSV and a JSON summary"},
        {"support-eval", "evaluate the limit support function at support.z or support.p"},
        {"rho-eval", "solve the dual norm problem at system.state"},
        {"sweep", "run the eps ladder and report trajectory distances"},
        {"check", "run the invariant battery; exits 2 on any violation"},
        {"plot", "render a trajectory CSV to SVG"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", opts.config, "config file")->required();
        sub->add_option("--out", opts.out, "output directory (overrides [output] dir)");
        if (std::string(name) == "plot") {
            sub->add_option("--input", opts.input, "trajectory CSV (default: the configured trajectory file)");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(genfric::ExitCode::ValidationFailure);
    }

    const std::string command = app.get_subcommands().front()->get_name();
    return static_cast<int>(genfric::run_command(command, opts, std::cout, std::cerr));
}
