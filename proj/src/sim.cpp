#include "genfric/sim.hpp"

#include "genfric/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <thread>

namespace genfric {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct StepResult {
    Vector y;
    Vector error;
};

/// One Dormand-Prince step from (y, k1 = f(y)); f is time independent.
template <class F>
StepResult dopri_step(F&& f, const Vector& y, const Vector& k1, double h) {
    const Vector k2 = f(y + h * a21 * k1);
    const Vector k3 = f(y + h * (a31 * k1 + a32 * k2));
    const Vector k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Vector k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Vector k6 = f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    StepResult out;
    out.y = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Vector k7 = f(out.y);
    out.error = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    return out;
}

double error_norm(const Vector& err, const Vector& y0, const Vector& y1, const StepControl& sc) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
        const double scale = sc.atol + sc.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        worst = std::max(worst, std::abs(err[i]) / scale);
    }
    return worst;
}

/// Spectral norm of A: each block [[0,1],[-w^2,0]] has norm max(1, w^2).
double a_norm(const OscillatorSystem& sys) { return std::max(1.0, sys.max_omega() * sys.max_omega()); }

struct SolverFailure {
    std::string message;
};

/// Dual solution for a state near a previous one: rho and its gradient from a known maximizer.
DualSolution realign(const OscillatorSystem& sys, const State& s, const DualSolution& prev) {
    const Vector r = block_amplitudes(sys, s);
    DualSolution out = prev;
    out.rho = r.dot(prev.z_opt);
    for (std::size_t i = 0; i < sys.size(); ++i) {
        if (r[i] == 0.0) {
            out.grad_rho[2 * i] = out.grad_rho[2 * i + 1] = 0.0;
            continue;
        }
        const double w = sys.omega(i);
        out.grad_rho[2 * i] = prev.z_opt[i] * w * w * s.x(i) / r[i];
        out.grad_rho[2 * i + 1] = prev.z_opt[i] * s.y(i) / r[i];
    }
    return out;
}

/// Feedback evaluation with warm-started dual solves.
class ClosedLoop {
  public:
    ClosedLoop(const OscillatorSystem& sys, const SimConfig& cfg) : sys_(sys), cfg_(cfg), dual_(cfg.dual) {
        // The feedback divides sigma by eps, so solver error is amplified by 1/eps.
        dual_.tol = std::min(cfg.dual.tol, 1e-7 * cfg.law.epsilon);
    }

    struct Eval {
        Vector rate;
        double u;
        double sigma;
        DualSolution dual;
    };

    const DualSolution& dual_at(const State& s) {
        if (have_cache_ && cfg_.dual_reuse_delta > 0.0 &&
            (s.flat() - cache_state_.flat()).norm() <= cfg_.dual_reuse_delta * s.flat().norm()) {
            scratch_ = realign(sys_, s, cache_);
            return scratch_;
        }
        const bool warm = have_cache_ && std::none_of(cache_.degenerate.begin(), cache_.degenerate.end(),
                                                      [](bool d) { return d; });
        DualSolution sol = solve_dual(sys_, s, dual_, warm ? &cache_ : nullptr);
        if (!sol.converged && warm) {
            sol = solve_dual(sys_, s, dual_);
        }
        if (!sol.converged) {
            throw SolverFailure{"dual solver did not converge (kkt residual " +
                                std::to_string(sol.kkt_residual) + ", " +
                                std::to_string(sol.iterations) + " iterations)"};
        }
        cache_ = std::move(sol);
        cache_state_ = s;
        have_cache_ = true;
        return cache_;
    }

    Eval eval(const State& s, double amplitude) {
        Eval out;
        out.rate = drift(sys_, s);
        if (cfg_.drift_only || s.is_zero()) {
            out.u = 0.0;
            out.sigma = 0.0;
            if (!s.is_zero()) {
                out.dual = dual_at(s);
                out.sigma = switching_value(out.dual);
            }
            return out;
        }
        out.dual = dual_at(s);
        out.sigma = switching_value(out.dual);
        ControlLaw law = cfg_.law;
        law.amplitude = cfg_.law.amplitude * amplitude;
        out.u = control_regularized(out.sigma, law);
        for (std::size_t i = 0; i < sys_.size(); ++i) {
            out.rate[2 * i + 1] += out.u;
        }
        return out;
    }

    Vector rate(const Vector& flat, double amplitude) { return eval(State(flat), amplitude).rate; }

  private:
    const OscillatorSystem& sys_;
    const SimConfig& cfg_;
    DualOptions dual_;
    DualSolution cache_;
    DualSolution scratch_;
    State cache_state_;
    bool have_cache_ = false;
};

Sample make_sample(const OscillatorSystem& sys, double t, const State& s,
                   const ClosedLoop::Eval& ev, const Vector& rate_in, double step_error) {
    Sample smp;
    smp.t = t;
    smp.state = s;
    smp.rate = ev.rate;
    smp.rate_in = rate_in;
    smp.u = ev.u;
    smp.sigma = ev.sigma;
    smp.rho = s.is_zero() ? 0.0 : ev.dual.rho;
    smp.hamiltonian_residual = s.is_zero() ? 0.0 : hamiltonian_residual(sys, s, ev.dual);
    smp.energy = energy(sys, s);
    smp.step_error = step_error;
    return smp;
}

}  // namespace

void SimConfig::validate() const {
    if (!(t_max > 0.0)) {
        throw ValidationError("simulation horizon t_max must be > 0");
    }
    if (!(step.initial_step > 0.0) || !(step.max_step > 0.0) || !(step.rtol > 0.0) ||
        !(step.atol > 0.0) || !(step.min_step > 0.0)) {
        throw ValidationError("step control tolerances must be > 0");
    }
    if (standstill.threshold < 0.0) {
        throw ValidationError("standstill threshold must be >= 0");
    }
    if (record_stride < 1) {
        throw ValidationError("record_stride must be >= 1");
    }
    if (dual_reuse_delta < 0.0) {
        throw ValidationError("dual_reuse_delta must be >= 0");
    }
    if (!(dual.tol > 0.0) || dual.max_iter < 1) {
        throw ValidationError("dual solver needs tol > 0 and max_iter >= 1");
    }
    dual.quadrature.validate();
    law.validate();
    stages.validate();
}

std::string to_string(Termination reason) {
    switch (reason) {
        case Termination::TerminalStage:
            return "terminal-stage";
        case Termination::Horizon:
            return "horizon";
        case Termination::Standstill:
            return "standstill";
        case Termination::SolverFailure:
            return "solver-failure";
    }
    return "unknown";
}

State Trajectory::interpolate(double t) const {
    if (samples.empty()) {
        throw ValidationError("cannot interpolate an empty trajectory");
    }
    if (t <= samples.front().t) {
        return samples.front().state;
    }
    if (t >= samples.back().t) {
        return samples.back().state;
    }
    const auto it = std::upper_bound(samples.begin(), samples.end(), t,
                                     [](double v, const Sample& s) { return v < s.t; });
    const Sample& b = *it;
    const Sample& a = *(it - 1);
    const double h = b.t - a.t;
    const double s = (t - a.t) / h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    return State(h00 * a.state.flat() + h10 * h * a.rate + h01 * b.state.flat() +
                 h11 * h * b.rate_in);
}

double hamiltonian_residual(const OscillatorSystem& sys, const State& s, const DualSolution& sol) {
    return drift(sys, s).dot(sol.grad_rho);
}

double hamiltonian_residual(const OscillatorSystem& sys, const State& s, const DualOptions& opts) {
    return hamiltonian_residual(sys, s, solve_dual(sys, s, opts));
}

Trajectory integrate(const OscillatorSystem& sys, const State& s0, const SimConfig& cfg) {
    cfg.validate();
    if (s0.size() != sys.size()) {
        throw ValidationError("initial state dimension does not match the system");
    }
    if (s0.is_zero()) {
        throw ValidationError("initial state must be nonzero");
    }
    const StepControl& sc = cfg.step;
    const double eps = cfg.law.epsilon;
    const double window = cfg.standstill.window > 0.0
                              ? cfg.standstill.window
                              : 2.0 * std::numbers::pi / sys.min_omega();
    const double bound_a = a_norm(sys);
    const double bound_b = std::sqrt(static_cast<double>(sys.size()));

    Trajectory traj;
    ClosedLoop loop(sys, cfg);

    try {
        double t = 0.0;
        State x = s0;
        auto cur = loop.eval(x, 1.0);
        StageDecision stage = stage_select(cfg.stages, cur.dual.rho);
        if (stage.terminal) {
            traj.samples.push_back(make_sample(sys, t, x, cur, cur.rate, 0.0));
            traj.reason = Termination::TerminalStage;
            return traj;
        }
        cur = loop.eval(x, stage.amplitude);
        traj.samples.push_back(make_sample(sys, t, x, cur, cur.rate, 0.0));
        traj.min_step_taken = std::numeric_limits<double>::infinity();

        double h = sc.initial_step;
        std::size_t window_idx = 0;
        while (t < cfg.t_max) {
            if (traj.accepted_steps + traj.rejected_steps >= sc.max_steps) {
                traj.reason = Termination::SolverFailure;
                traj.message = "step budget exhausted";
                break;
            }
            h = std::min({h, sc.max_step, cfg.t_max - t});
            if (h < sc.min_step && cfg.t_max - t > sc.min_step) {
                traj.reason = Termination::SolverFailure;
                traj.message = "step size underflow at t = " + std::to_string(t);
                break;
            }
            const double amp = stage.amplitude;
            auto f = [&](const Vector& y) { return loop.rate(y, amp); };
            StepResult step = dopri_step(f, x.flat(), cur.rate, h);
            const double err = error_norm(step.error, x.flat(), step.y, sc);
            if (!(err <= 1.0)) {
                ++traj.rejected_steps;
                h *= std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
                continue;
            }
            State xn(step.y);
            auto next = loop.eval(xn, amp);

            // Resolve the eps-wide ramp around the switching surface.
            const double dsigma = std::abs(next.sigma - cur.sigma);
            const bool near_surface = std::min(std::abs(cur.sigma), std::abs(next.sigma)) <= 2.0 * eps ||
                                      (cur.sigma > 0.0) != (next.sigma > 0.0);
            if (!cfg.drift_only && near_surface && dsigma > 0.5 * eps && h > sc.min_step) {
                ++traj.rejected_steps;
                h *= std::clamp(0.9 * 0.5 * eps / dsigma, 0.1, 0.9);
                continue;
            }

            // Land on a stage threshold instead of stepping across it.
            const StageDecision nstage = stage_select(cfg.stages, next.dual.rho);
            if (nstage.amplitude != stage.amplitude || nstage.terminal) {
                const double thr = nstage.terminal ? cfg.stages.rho_lo : cfg.stages.rho_hi;
                const double tol = 1e-9 * thr;
                if (next.dual.rho < thr - tol) {
                    const double rho0 = cur.dual.rho;
                    const double drop = rho0 - next.dual.rho;
                    double frac = drop > 0.0 ? (rho0 - thr + 0.5 * tol) / drop : 0.5;
                    ++traj.rejected_steps;
                    h *= std::clamp(frac, 0.01, 0.99);
                    continue;
                }
            }

            const double taken = h;
            t = (cfg.t_max - t <= h) ? cfg.t_max : t + h;
            const Vector rate_in = next.rate;
            x = std::move(xn);
            stage = nstage;
            if (!stage.terminal && stage.amplitude != amp) {
                next = loop.eval(x, stage.amplitude);
            }
            cur = std::move(next);
            ++traj.accepted_steps;
            traj.min_step_taken = std::min(traj.min_step_taken, taken);
            traj.samples.push_back(make_sample(sys, t, x, cur, rate_in, step.error.cwiseAbs().maxCoeff()));

            if (rate_in.norm() > bound_a * x.flat().norm() + bound_b * (1.0 + 1e-12)) {
                ++traj.linear_bound_violations;
            }
            if (stage.terminal) {
                traj.reason = Termination::TerminalStage;
                break;
            }
            if (t >= window) {
                while (window_idx + 1 < traj.samples.size() && traj.samples[window_idx + 1].t <= t - window) {
                    ++window_idx;
                }
                const double rho_then = traj.samples[window_idx].rho;
                const double rho_now = traj.samples.back().rho;
                if (!cfg.drift_only && rho_then - rho_now < cfg.standstill.threshold * rho_now) {
                    traj.reason = Termination::Standstill;
                    break;
                }
            }
            h = taken * std::min(5.0, 0.9 * std::pow(std::max(err, 1e-10), -0.2));
        }
    } catch (const SolverFailure& fail) {
        traj.reason = Termination::SolverFailure;
        traj.message = fail.message;
    }
    if (traj.accepted_steps == 0) {
        traj.min_step_taken = 0.0;
    }
    return traj;
}

RhoDecayReport rho_decay_check(const Trajectory& traj, const ControlLaw& law, double band_factor) {
    RhoDecayReport out;
    out.worst_excess = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < traj.samples.size(); ++k) {
        const double inc = traj.samples[k].rho - traj.samples[k - 1].rho;
        const double band = band_factor * (law.epsilon + traj.samples[k].step_error);
        const double excess = inc - band;
        out.worst_increase = std::max(out.worst_increase, inc);
        if (excess > out.worst_excess) {
            out.worst_excess = excess;
            out.worst_index = k;
        }
        if (excess > 0.0) {
            ++out.violations;
        }
    }
    if (traj.samples.size() < 2) {
        out.worst_excess = 0.0;
    }
    return out;
}

double trajectory_distance(const Trajectory& a, const Trajectory& b) {
    if (a.samples.empty() || b.samples.empty()) {
        throw ValidationError("trajectory_distance needs nonempty trajectories");
    }
    const double horizon = std::min(a.end_time(), b.end_time());
    double worst = 0.0;
    auto probe = [&](const Trajectory& own, const Trajectory& other) {
        for (const Sample& s : own.samples) {
            if (s.t > horizon) {
                break;
            }
            worst = std::max(worst, (s.state.flat() - other.interpolate(s.t).flat()).norm());
        }
    };
    probe(a, b);
    probe(b, a);
    return worst;
}

unsigned env_thread_cap() {
    const char* raw = std::getenv("GENFRIC_THREADS");
    if (raw == nullptr) {
        return 0;
    }
    char* end = nullptr;
    const long v = std::strtol(raw, &end, 10);
    if (end == raw || *end != '\0' || v < 1) {
        return 0;
    }
    return static_cast<unsigned>(v);
}

namespace {

/// Runs jobs[i]() for every i on up to `threads` workers; results are stored by index.
template <class Job>
void run_parallel(std::size_t count, unsigned threads, Job&& job) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            job(i);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < threads; ++k) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& th : pool) {
        th.join();
    }
}

}  // namespace

SweepReport epsilon_sweep(const OscillatorSystem& sys, const State& s0, const SimConfig& cfg,
                          const SweepOptions& opts) {
    if (opts.ladder.size() < 3) {
        throw ValidationError("epsilon ladder needs at least 3 rungs");
    }
    for (std::size_t k = 0; k < opts.ladder.size(); ++k) {
        if (!(opts.ladder[k] > 0.0)) {
            throw ValidationError("epsilon ladder entries must be > 0");
        }
        if (k > 0 && opts.ladder[k] > opts.ladder[k - 1]) {
            throw ValidationError("epsilon ladder must be nonincreasing");
        }
    }
    cfg.validate();

    const std::size_t rungs = opts.ladder.size();
    const std::size_t probes = opts.probe_perturbations.size();
    Vector direction = Vector::Ones(s0.flat().size()).normalized();

    std::vector<Trajectory> runs(rungs + probes);
    unsigned threads = opts.threads != 0 ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    if (const unsigned cap = env_thread_cap(); cap != 0) {
        threads = std::min(threads, cap);
    }
    run_parallel(runs.size(), threads, [&](std::size_t i) {
        SimConfig local = cfg;
        State start = s0;
        if (i < rungs) {
            local.law.epsilon = opts.ladder[i];
        } else {
            local.law.epsilon = opts.ladder.back();
            start = State(s0.flat() + opts.probe_perturbations[i - rungs] * direction);
        }
        runs[i] = integrate(sys, start, local);
    });

    for (std::size_t i = 0; i < runs.size(); ++i) {
        if (runs[i].reason == Termination::SolverFailure) {
            throw NumericalError((i < rungs ? "sweep rung eps = " + std::to_string(opts.ladder[i])
                                            : std::string("continuity probe")) +
                                 " failed: " + runs[i].message);
        }
    }

    SweepReport report;
    report.ladder = opts.ladder;
    report.max_ratio = opts.max_ratio;
    report.common_horizon = runs[0].end_time();
    for (std::size_t k = 0; k < rungs; ++k) {
        report.terminations.push_back(to_string(runs[k].reason));
        report.common_horizon = std::min(report.common_horizon, runs[k].end_time());
    }
    for (std::size_t k = 0; k + 1 < rungs; ++k) {
        report.distances.push_back(trajectory_distance(runs[k], runs[k + 1]));
    }
    report.cauchy = true;
    for (std::size_t k = 0; k + 1 < report.distances.size(); ++k) {
        const double ratio = report.distances[k] > 0.0 ? report.distances[k + 1] / report.distances[k]
                                                       : (report.distances[k + 1] > 0.0 ? INFINITY : 0.0);
        report.ratios.push_back(ratio);
        if (!(ratio <= opts.max_ratio)) {
            report.cauchy = false;
        }
    }
    const Trajectory& base = runs[rungs - 1];
    for (std::size_t j = 0; j < probes; ++j) {
        ContinuityProbe probe;
        probe.perturbation = opts.probe_perturbations[j];
        probe.deviation = trajectory_distance(base, runs[rungs + j]);
        probe.gain = probe.deviation / probe.perturbation;
        report.probes.push_back(probe);
    }
    report.continuity_linear = !report.probes.empty();
    for (const auto& p : report.probes) {
        for (const auto& q : report.probes) {
            if (!(p.gain <= 10.0 * q.gain)) {
                report.continuity_linear = false;
            }
        }
    }
    return report;
}

CanonicalTrajectory canonical_integrate(const OscillatorSystem& sys, const State& s0,
                                        const SimConfig& cfg, const std::optional<Vector>& p0) {
    cfg.validate();
    if (s0.is_zero()) {
        throw ValidationError("initial state must be nonzero");
    }
    if (!cfg.drift_only && cfg.law.smoother != Smoother::Tanh) {
        throw ValidationError("canonical_integrate needs the tanh smoother (the costate equation "
                              "differentiates the feedback)");
    }
    const std::size_t dim = sys.dim();
    DualOptions tight = cfg.dual;
    tight.tol = std::min(cfg.dual.tol, 1e-12);
    tight.max_iter = std::max(cfg.dual.max_iter, 100);

    struct Abort {
        std::string message;
    };
    auto solve = [&](const State& s) {
        DualSolution sol = solve_dual(sys, s, tight);
        if (!sol.converged &&
            sol.kkt_residual > 1e-10) {
            throw Abort{"dual solver did not converge"};
        }
        if (std::any_of(sol.degenerate.begin(), sol.degenerate.end(), [](bool d) { return d; })) {
            throw Abort{"degenerate oscillator block; finite-difference Hessian unavailable"};
        }
        return sol;
    };

    Vector bvec = Vector::Zero(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < sys.size(); ++i) {
        bvec[2 * i + 1] = 1.0;
    }

    auto rhs = [&](const Vector& y) {
        const State x(y.head(dim));
        const Vector p = y.tail(dim);
        Vector out(2 * dim);
        Vector xdot = drift(sys, x);
        Vector pdot(dim);
        for (std::size_t i = 0; i < sys.size(); ++i) {
            const double w = sys.omega(i);
            pdot[2 * i] = w * w * p[2 * i + 1];
            pdot[2 * i + 1] = -p[2 * i];
        }
        if (!cfg.drift_only) {
            const DualSolution sol = solve(x);
            const double u = control_regularized(switching_value(sol), cfg.law);
            xdot += u * bvec;
            const double step = 1e-5 * sol.rho;
            const Vector gp = solve(State(x.flat() + step * bvec)).grad_rho;
            const Vector gm = solve(State(x.flat() - step * bvec)).grad_rho;
            pdot += u * (gp - gm) / (2.0 * step);
        }
        out.head(dim) = xdot;
        out.tail(dim) = pdot;
        return out;
    };

    CanonicalTrajectory out;
    try {
        Vector y(2 * dim);
        y.head(dim) = s0.flat();
        y.tail(dim) = p0 ? *p0 : solve(s0).grad_rho;
        if (y.tail(dim).size() != static_cast<Eigen::Index>(dim)) {
            throw ValidationError("initial momentum has the wrong dimension");
        }
        auto record = [&](double t) {
            CanonicalSample smp;
            smp.t = t;
            smp.state = State(y.head(dim));
            smp.momentum = y.tail(dim);
            smp.gap = (smp.momentum - solve(smp.state).grad_rho).norm();
            out.max_gap = std::max(out.max_gap, smp.gap);
            out.samples.push_back(std::move(smp));
        };
        record(0.0);
        double t = 0.0;
        double h = cfg.step.initial_step;
        Vector k1 = rhs(y);
        long budget = cfg.step.max_steps;
        while (t < cfg.t_max && budget-- > 0) {
            h = std::min({h, cfg.step.max_step, cfg.t_max - t});
            StepResult step = dopri_step(rhs, y, k1, h);
            const double err = error_norm(step.error, y, step.y, cfg.step);
            if (!(err <= 1.0)) {
                h *= std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
                if (h < cfg.step.min_step) {
                    throw Abort{"step size underflow"};
                }
                continue;
            }
            t = (cfg.t_max - t <= h) ? cfg.t_max : t + h;
            y = std::move(step.y);
            k1 = rhs(y);
            record(t);
            h *= std::min(5.0, 0.9 * std::pow(std::max(err, 1e-10), -0.2));
        }
    } catch (const Abort& a) {
        out.aborted = true;
        out.message = a.message;
    }
    return out;
}

}  // namespace genfric
