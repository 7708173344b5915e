#pragma once

#include "genfric/errors.hpp"
#include "genfric/sim.hpp"
#include "genfric/support.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace genfric {

/// Config parse or validation failure, tagged with the offending line (0 when
/// the problem is a missing key rather than a bad one).
class ConfigError : public ValidationError {
  public:
    ConfigError(int line, const std::string& message);
    int line() const { return line_; }

  private:
    int line_;
};

struct OutputPaths {
    std::string dir = ".";
    std::string trajectory = "trajectory.csv";
    std::string summary = "summary.json";
    std::string sweep = "sweep.json";
    std::string check = "check.json";
    std::string plot = "trajectory.svg";
};

struct CheckSettings {
    int samples = 20;
    std::uint64_t seed = 1;
    double band_factor = 1.0;
    std::int64_t resonance_bound = 10;
};

/// Everything one CLI invocation needs; see docs/config.md for the grammar.
struct RunConfig {
    std::vector<double> omegas;
    std::optional<Vector> state;
    QuadratureSpec quadrature{};
    /// dual tolerances and the simulation share sim.dual
    SimConfig sim{};
    /// eps = 1e-3 * rho(s0) unless set explicitly.
    bool epsilon_auto = true;
    SweepOptions sweep{};
    std::optional<Vector> support_z;
    std::optional<Vector> support_p;
    CheckSettings check{};
    OutputPaths output{};

    OscillatorSystem system() const { return OscillatorSystem(omegas); }
};

/// Parses the line-oriented `[section]` / `key = value` format. Unknown
/// sections or keys, duplicate keys and invariant violations are rejected with
/// the line number of the first problem.
RunConfig parse_config(const std::string& text);

RunConfig load_config(const std::string& path);

}  // namespace genfric
