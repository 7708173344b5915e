#pragma once

#include "genfric/control.hpp"
#include "genfric/dualnorm.hpp"
#include "genfric/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace genfric {

struct StepControl {
    double initial_step = 1e-3;
    double max_step = 0.05;
    double rtol = 1e-10;
    double atol = 1e-12;
    /// Hard floor; a step below this aborts the run.
    double min_step = 1e-14;
    long max_steps = 5'000'000;
};

struct StandstillDetector {
    /// <= 0 selects one period of the slowest oscillator, 2 pi / min(omega).
    double window = 0.0;
    /// Standstill when rho drops by less than threshold * rho over one window.
    double threshold = 1e-6;
};

struct SimConfig {
    double t_max = 50.0;
    StepControl step{};
    ControlLaw law{};
    StagePolicy stages{};
    StandstillDetector standstill{};
    DualOptions dual{};
    /// Reuse the previous dual maximizer when the state moved less than this
    /// relative distance; 0 disables reuse (the solver is still warm-started).
    double dual_reuse_delta = 0.0;
    /// Every k-th accepted step is written by the CSV writer.
    int record_stride = 1;
    /// Force u = 0 (free oscillation); used to validate the stepper and rho invariance.
    bool drift_only = false;

    void validate() const;
};

enum class Termination { TerminalStage, Horizon, Standstill, SolverFailure };

std::string to_string(Termination reason);

struct Sample {
    double t = 0.0;
    State state;
    /// x' leaving this sample (right limit) and arriving at it (left limit);
    /// they differ only where the stage amplitude switches.
    Vector rate;
    Vector rate_in;
    double u = 0.0;
    double sigma = 0.0;
    double rho = 0.0;
    double hamiltonian_residual = 0.0;
    double energy = 0.0;
    /// Local error estimate of the step that produced this sample (absolute units).
    double step_error = 0.0;
};

struct Trajectory {
    std::vector<Sample> samples;
    Termination reason = Termination::Horizon;
    std::string message;
    long accepted_steps = 0;
    long rejected_steps = 0;
    double min_step_taken = 0.0;
    /// Accepted steps where |x'| exceeded |A| |x| + |B|.
    long linear_bound_violations = 0;

    /// State at time t by cubic Hermite interpolation between samples.
    State interpolate(double t) const;
    double end_time() const { return samples.empty() ? 0.0 : samples.back().t; }
};

/// <A x, d rho / dx>; zero in exact arithmetic because rho is invariant under exp(A t).
double hamiltonian_residual(const OscillatorSystem& sys, const State& s, const DualOptions& opts = {});
double hamiltonian_residual(const OscillatorSystem& sys, const State& s, const DualSolution& sol);

/// Integrates x' = A x + B u_eps(x) from s0 with the staged regularized dry-friction feedback.
/// Dual solver failures end the run with Termination::SolverFailure and a partial trajectory.
Trajectory integrate(const OscillatorSystem& sys, const State& s0, const SimConfig& cfg);

struct RhoDecayReport {
    long violations = 0;
    /// Largest rho(t_{k+1}) - rho(t_k) - band observed (<= 0 when clean).
    double worst_excess = 0.0;
    /// Largest raw increase rho(t_{k+1}) - rho(t_k).
    double worst_increase = 0.0;
    /// Sample index where the worst excess lands (the later of the pair).
    std::size_t worst_index = 0;
};

/// Checks rho(t_{k+1}) <= rho(t_k) + C (eps + step_error) along the trajectory.
RhoDecayReport rho_decay_check(const Trajectory& traj, const ControlLaw& law, double band_factor = 1.0);

struct ContinuityProbe {
    double perturbation = 0.0;
    double deviation = 0.0;
    /// deviation / perturbation
    double gain = 0.0;
};

struct SweepReport {
    std::vector<double> ladder;
    /// d_k = sup_t |x_{eps_k}(t) - x_{eps_{k+1}}(t)| on the common time range.
    std::vector<double> distances;
    std::vector<double> ratios;
    std::vector<std::string> terminations;
    double common_horizon = 0.0;
    double max_ratio = 0.9;
    bool cauchy = false;
    std::vector<ContinuityProbe> probes;
    /// Probe gains agree within a factor of 10.
    bool continuity_linear = false;
};

struct SweepOptions {
    std::vector<double> ladder{1e-1, 1e-2, 1e-3, 1e-4};
    double max_ratio = 0.9;
    std::vector<double> probe_perturbations{1e-6, 1e-5};
    /// 0 = hardware concurrency (still capped by GENFRIC_THREADS).
    unsigned threads = 0;
};

/// Sup-norm distance between two trajectories over [0, min(end times)],
/// evaluated at the union of both sample grids.
double trajectory_distance(const Trajectory& a, const Trajectory& b);

/// Integrates the same start for every eps on the ladder and measures the
/// Cauchy behavior of the regularized trajectories, plus continuity in the
/// initial state at the finest eps.
SweepReport epsilon_sweep(const OscillatorSystem& sys, const State& s0, const SimConfig& cfg,
                          const SweepOptions& opts = {});

struct CanonicalSample {
    double t = 0.0;
    State state;
    Vector momentum;
    /// |p(t) - d rho / dx(x(t))|
    double gap = 0.0;
};

struct CanonicalTrajectory {
    std::vector<CanonicalSample> samples;
    double max_gap = 0.0;
    bool aborted = false;
    std::string message;
};

/// Integrates x' = A x + B u, p' = -A^T p + (d^2 rho / dx^2) B u with p(0) = d rho / dx(s0)
/// (or `p0` when given). Requires the tanh smoother unless cfg.drift_only is set.
CanonicalTrajectory canonical_integrate(const OscillatorSystem& sys, const State& s0,
                                        const SimConfig& cfg,
                                        const std::optional<Vector>& p0 = std::nullopt);

/// Thread cap from GENFRIC_THREADS (0 when unset or invalid).
unsigned env_thread_cap();

}  // namespace genfric
