#pragma once

#include "genfric/config.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace genfric {

enum class ExitCode : int { Success = 0, ValidationFailure = 1, NumericalFailure = 2 };

struct CommandOptions {
    std::string config;
    /// Overrides [output] dir.
    std::optional<std::string> out;
    /// plot only: trajectory CSV to render (defaults to the configured trajectory file).
    std::optional<std::string> input;
};

/// eps for this run: the configured value, or 1e-3 rho(s0) when auto.
ControlLaw resolve_law(const RunConfig& cfg, const OscillatorSystem& sys, const State& s0);

ExitCode cmd_simulate(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
ExitCode cmd_support_eval(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
ExitCode cmd_rho_eval(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
ExitCode cmd_sweep(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
/// Duality residuals, Hamiltonian residual sampling, rho decay, drift-only
/// invariance, the eps-Cauchy sweep and a resonance report. Any violation
/// gives NumericalFailure.
ExitCode cmd_check(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
ExitCode cmd_plot(const RunConfig& cfg, const std::filesystem::path& out,
                  const std::optional<std::filesystem::path>& input, std::ostream& log);

/// Loads the config, dispatches `command` and maps exceptions onto exit codes
/// (ValidationError -> 1, NumericalError and I/O failures -> 2). Messages go to `err`.
ExitCode run_command(const std::string& command, const CommandOptions& opts, std::ostream& log,
                     std::ostream& err);

}  // namespace genfric
