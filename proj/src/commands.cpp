#include "genfric/commands.hpp"

#include "genfric/output.hpp"
#include "genfric/plot.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

namespace genfric {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

std::vector<double> as_list(const Vector& v) { return {v.data(), v.data() + v.size()}; }

void write_json(const fs::path& path, const Json& doc) { write_file_atomic(path, doc.dump(2) + "\n"); }

Json header(const char* command, const RunConfig& cfg) {
    Json j;
    j["schema"] = 1;
    j["command"] = command;
    j["omegas"] = cfg.omegas;
    return j;
}

State require_state(const RunConfig& cfg) {
    if (!cfg.state) {
        throw ValidationError("this command needs system.state");
    }
    State s(*cfg.state);
    if (s.is_zero()) {
        throw ValidationError("system.state must be nonzero");
    }
    return s;
}

SimConfig sim_config(const RunConfig& cfg, const OscillatorSystem& sys, const State& s0) {
    SimConfig sim = cfg.sim;
    sim.dual.quadrature = cfg.quadrature;
    sim.law = resolve_law(cfg, sys, s0);
    return sim;
}

Json law_json(const ControlLaw& law) {
    return Json{{"epsilon", law.epsilon}, {"smoother", to_string(law.smoother)}, {"amplitude", law.amplitude}};
}

Json sweep_json(const SweepReport& r) {
    Json probes = Json::array();
    for (const auto& p : r.probes) {
        probes.push_back({{"perturbation", p.perturbation}, {"deviation", p.deviation}, {"gain", p.gain}});
    }
    return Json{{"ladder", r.ladder},
                {"distances", r.distances},
                {"ratios", r.ratios},
                {"max_ratio", r.max_ratio},
                {"cauchy", r.cauchy},
                {"common_horizon", r.common_horizon},
                {"terminations", r.terminations},
                {"probes", probes},
                {"continuity_linear", r.continuity_linear}};
}

double max_hamiltonian_ratio(const OscillatorSystem& sys, const Trajectory& traj) {
    double worst = 0.0;
    for (const auto& s : traj.samples) {
        if (s.rho > 0.0) {
            worst = std::max(worst, std::abs(s.hamiltonian_residual) / (s.rho * sys.max_omega()));
        }
    }
    return worst;
}

struct CheckList {
    Json items = Json::array();
    bool ok = true;

    void add(const std::string& name, bool passed, double value, double limit, std::ostream& log) {
        items.push_back({{"name", name}, {"passed", passed}, {"value", value}, {"limit", limit}});
        ok = ok && passed;
        log << (passed ? "ok   " : "FAIL ") << name << ": " << value << " (limit " << limit << ")\n";
    }
};

}  // namespace

ControlLaw resolve_law(const RunConfig& cfg, const OscillatorSystem& sys, const State& s0) {
    ControlLaw law = cfg.sim.law;
    if (cfg.epsilon_auto) {
        DualOptions dual = cfg.sim.dual;
        dual.quadrature = cfg.quadrature;
        const DualSolution sol = solve_dual(sys, s0, dual);
        if (!sol.converged) {
            throw NumericalError("dual solver did not converge at the initial state");
        }
        law.epsilon = 1e-3 * sol.rho;
    }
    law.validate();
    return law;
}

ExitCode cmd_simulate(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
    const OscillatorSystem sys = cfg.system();
    const State s0 = require_state(cfg);
    const SimConfig sim = sim_config(cfg, sys, s0);
    const Trajectory traj = integrate(sys, s0, sim);
    if (traj.samples.empty()) {
        throw NumericalError("integration produced no samples: " + traj.message);
    }

    write_file_atomic(out / cfg.output.trajectory, trajectory_csv(sys, traj, sim.record_stride, sim.law.amplitude));

    const RhoDecayReport decay = rho_decay_check(traj, sim.law, cfg.check.band_factor);
    const Sample& first = traj.samples.front();
    const Sample& last = traj.samples.back();
    Json j = header("simulate", cfg);
    j["initial_state"] = as_list(s0.flat());
    j["control"] = law_json(sim.law);
    j["termination"] = to_string(traj.reason);
    j["message"] = traj.message;
    j["t_end"] = last.t;
    j["final_state"] = as_list(last.state.flat());
    j["accepted_steps"] = traj.accepted_steps;
    j["rejected_steps"] = traj.rejected_steps;
    j["samples"] = traj.samples.size();
    j["rho_initial"] = first.rho;
    j["rho_final"] = last.rho;
    j["energy_initial"] = first.energy;
    j["energy_final"] = last.energy;
    j["max_hamiltonian_residual_ratio"] = max_hamiltonian_ratio(sys, traj);
    j["rho_decay"] = {{"violations", decay.violations},
                      {"worst_excess", decay.worst_excess},
                      {"worst_increase", decay.worst_increase}};
    j["linear_bound_violations"] = traj.linear_bound_violations;
    j["trajectory"] = cfg.output.trajectory;
    write_json(out / cfg.output.summary, j);

    log << "simulate: " << to_string(traj.reason) << " at t = " << last.t << ", rho " << first.rho << " -> "
        << last.rho << " (" << traj.accepted_steps << " steps)\n";
    return traj.reason == Termination::SolverFailure ? ExitCode::NumericalFailure : ExitCode::Success;
}

ExitCode cmd_support_eval(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
    Json j = header("support-eval", cfg);
    j["quadrature"] = {{"nodes", cfg.quadrature.nodes_per_axis}, {"scheme", to_string(cfg.quadrature.scheme)}};
    if (cfg.support_z) {
        const SupportValue h = h_eval(*cfg.support_z, cfg.quadrature);
        const Vector z = *cfg.support_z;
        j["z"] = as_list(z);
        j["value"] = h.value;
        j["gradient"] = as_list(h.gradient);
        j["estimated_error"] = h.estimated_error;
        log << "support-eval: H(z) = " << h.value << "\n";
    } else if (cfg.support_p) {
        const OscillatorSystem sys = cfg.system();
        const MomentumSupport h = H_of_p(sys, Momentum(*cfg.support_p), cfg.quadrature);
        j["p"] = as_list(*cfg.support_p);
        j["z"] = as_list(z_map(sys, Momentum(*cfg.support_p)));
        j["value"] = h.value;
        j["gradient"] = as_list(h.gradient);
        j["estimated_error"] = h.estimated_error;
        j["degenerate"] = h.degenerate;
        log << "support-eval: H(p) = " << h.value << "\n";
    } else {
        throw ValidationError("support-eval needs support.z or support.p");
    }
    write_json(out / cfg.output.summary, j);
    return ExitCode::Success;
}

ExitCode cmd_rho_eval(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
    const OscillatorSystem sys = cfg.system();
    const State s = require_state(cfg);
    DualOptions dual = cfg.sim.dual;
    dual.quadrature = cfg.quadrature;
    const DualSolution sol = solve_dual(sys, s, dual);
    const DualityResiduals res = duality_residuals(sys, s, sol, cfg.quadrature);

    Json j = header("rho-eval", cfg);
    j["state"] = as_list(s.flat());
    j["rho"] = sol.rho;
    j["z_opt"] = as_list(sol.z_opt);
    j["grad_rho"] = as_list(sol.grad_rho);
    j["sigma"] = switching_value(sol);
    j["kkt_residual"] = sol.kkt_residual;
    j["iterations"] = sol.iterations;
    j["converged"] = sol.converged;
    j["degenerate"] = sol.degenerate;
    j["residuals"] = {{"pairing_gap", res.pairing_gap},
                      {"fixedpoint_gap", res.fixedpoint_gap},
                      {"euler_gap", res.euler_gap}};
    write_json(out / cfg.output.summary, j);
    log << "rho-eval: rho = " << sol.rho << (sol.converged ? "" : " (not converged)") << "\n";
    return sol.converged ? ExitCode::Success : ExitCode::NumericalFailure;
}

ExitCode cmd_sweep(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
    const OscillatorSystem sys = cfg.system();
    const State s0 = require_state(cfg);
    const SimConfig sim = sim_config(cfg, sys, s0);
    const SweepReport r = epsilon_sweep(sys, s0, sim, cfg.sweep);

    Json j = header("sweep", cfg);
    j["initial_state"] = as_list(s0.flat());
    j.update(sweep_json(r));
    write_json(out / cfg.output.sweep, j);

    log << "sweep: d_k =";
    for (double d : r.distances) {
        log << " " << d;
    }
    log << (r.cauchy ? " (cauchy)" : " (not cauchy)") << "\n";
    return ExitCode::Success;
}

ExitCode cmd_check(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
    const OscillatorSystem sys = cfg.system();
    const State s0 = require_state(cfg);
    const SimConfig sim = sim_config(cfg, sys, s0);
    const std::size_t n = sys.size();
    CheckList checks;

    {
        std::mt19937_64 rng(cfg.check.seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        const double scale = s0.flat().norm() / std::sqrt(static_cast<double>(2 * n));
        double worst = 0.0;
        bool converged = true;
        for (int k = 0; k <= cfg.check.samples; ++k) {
            State s = s0;
            if (k > 0) {
                Vector v(2 * n);
                for (auto& e : v) {
                    e = scale * gauss(rng);
                }
                s = State(v);
            }
            const DualSolution sol = solve_dual(sys, s, sim.dual);
            converged = converged && sol.converged;
            const DualityResiduals r = duality_residuals(sys, s, sol, cfg.quadrature);
            worst = std::max({worst, r.pairing_gap / sol.rho, r.fixedpoint_gap / sol.rho, r.euler_gap / sol.rho});
        }
        checks.add("duality residuals / rho", converged && worst <= 1e-6, worst, 1e-6, log);
    }

    const Trajectory traj = integrate(sys, s0, sim);
    checks.add("integration completed", traj.reason != Termination::SolverFailure && !traj.samples.empty(),
               static_cast<double>(traj.samples.size()), 1.0, log);
    checks.add("hamiltonian residual / (rho max omega)", max_hamiltonian_ratio(sys, traj) <= 1e-5,
               max_hamiltonian_ratio(sys, traj), 1e-5, log);
    const RhoDecayReport decay = rho_decay_check(traj, sim.law, cfg.check.band_factor);
    checks.add("rho decay violations", decay.violations == 0, static_cast<double>(decay.violations), 0.0, log);
    checks.add("linear bound violations", traj.linear_bound_violations == 0,
               static_cast<double>(traj.linear_bound_violations), 0.0, log);
    checks.add("row invariants", validate_trajectory(sys, traj, sim.law.amplitude).empty(),
               static_cast<double>(validate_trajectory(sys, traj, sim.law.amplitude).size()), 0.0, log);

    {
        SimConfig drift = sim;
        drift.drift_only = true;
        drift.t_max = 2.0 * std::numbers::pi / sys.min_omega();
        const Trajectory free = integrate(sys, s0, drift);
        double worst = 0.0;
        for (const auto& s : free.samples) {
            worst = std::max(worst, std::abs(s.rho - free.samples.front().rho) / free.samples.front().rho);
        }
        checks.add("drift-only rho variation", worst <= 1e-8, worst, 1e-8, log);
    }

    const SweepReport sweep = epsilon_sweep(sys, s0, sim, cfg.sweep);
    double worst_ratio = 0.0;
    for (double r : sweep.ratios) {
        worst_ratio = std::max(worst_ratio, r);
    }
    checks.add("eps-cauchy worst ratio", sweep.cauchy, worst_ratio, cfg.sweep.max_ratio, log);
    double spread = 0.0;
    for (const auto& p : sweep.probes) {
        for (const auto& q : sweep.probes) {
            spread = std::max(spread, p.gain / q.gain);
        }
    }
    checks.add("continuity probe gain spread", sweep.continuity_linear, spread, 10.0, log);

    ResonanceOptions ropts;
    ropts.bound = cfg.check.resonance_bound;
    const ResonanceReport res = detect_resonance(sys, ropts);
    Json witnesses = Json::array();
    for (const auto& w : res.minimal_witnesses()) {
        witnesses.push_back(w);
    }

    Json j = header("check", cfg);
    j["initial_state"] = as_list(s0.flat());
    j["control"] = law_json(sim.law);
    j["passed"] = checks.ok;
    j["checks"] = checks.items;
    j["sweep"] = sweep_json(sweep);
    j["resonance"] = {{"resonant", res.resonant}, {"bound", res.bound}, {"minimal_witnesses", witnesses}};
    write_json(out / cfg.output.check, j);
    return checks.ok ? ExitCode::Success : ExitCode::NumericalFailure;
}

ExitCode cmd_plot(const RunConfig& cfg, const fs::path& out, const std::optional<fs::path>& input,
                  std::ostream& log) {
    const fs::path source = input ? *input : out / cfg.output.trajectory;
    const TrajectoryTable table = parse_trajectory_csv(read_file(source));
    const std::string svg = render_plot(table);
    write_file_atomic(out / cfg.output.plot, svg);
    log << "plot: " << table.rows() << " rows -> " << (out / cfg.output.plot).string() << "\n";
    return ExitCode::Success;
}

ExitCode run_command(const std::string& command, const CommandOptions& opts, std::ostream& log,
                     std::ostream& err) {
    try {
        const RunConfig cfg = load_config(opts.config);
        const fs::path out = opts.out ? fs::path(*opts.out) : fs::path(cfg.output.dir);
        if (command == "simulate") {
            return cmd_simulate(cfg, out, log);
        }
        if (command == "support-eval") {
            return cmd_support_eval(cfg, out, log);
        }
        if (command == "rho-eval") {
            return cmd_rho_eval(cfg, out, log);
        }
        if (command == "sweep") {
            return cmd_sweep(cfg, out, log);
        }
        if (command == "check") {
            return cmd_check(cfg, out, log);
        }
        if (command == "plot") {
            std::optional<fs::path> input;
            if (opts.input) {
                input = fs::path(*opts.input);
            }
            return cmd_plot(cfg, out, input, log);
        }
        throw ValidationError("unknown command '" + command + "'");
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return ExitCode::ValidationFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return ExitCode::NumericalFailure;
    }
}

}  // namespace genfric
