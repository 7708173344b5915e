#pragma once

#include "genfric/sim.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace genfric {

/// Writes `content` to a sibling temp file and renames it over `path`, so
/// readers never observe a partial file. Creates missing parent directories.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

/// `t,x1,y1,...,xN,yN,u,sigma,rho,h_res,energy` with 17 significant digits.
std::string csv_header(std::size_t oscillators);

/// Row-level invariant failures (t not strictly increasing, |u| above the
/// amplitude bound, non-finite entries, Hamiltonian residual above
/// 1e-5 rho max(omega)). Empty when the trajectory is clean.
std::vector<std::string> validate_trajectory(const OscillatorSystem& sys, const Trajectory& traj,
                                             double amplitude_bound = 1.0);

/// Serializes every `stride`-th sample plus the final one. Throws NumericalError
/// if validate_trajectory reports anything.
std::string trajectory_csv(const OscillatorSystem& sys, const Trajectory& traj, int stride = 1,
                           double amplitude_bound = 1.0);

/// A trajectory CSV read back into columns.
struct TrajectoryTable {
    std::size_t oscillators = 0;
    std::vector<double> t, u, sigma, rho, h_res, energy;
    /// x[i][k], y[i][k] for oscillator i at row k.
    std::vector<std::vector<double>> x, y;

    std::size_t rows() const { return t.size(); }
};

/// Throws ValidationError naming the line on a malformed header or row.
TrajectoryTable parse_trajectory_csv(const std::string& text);

}  // namespace genfric
