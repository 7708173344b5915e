#include "genfric/commands.hpp"
#include "genfric/config.hpp"
#include "genfric/errors.hpp"
#include "genfric/sim.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace genfric;

namespace {

State as_state(const Vector& v) { return State(v); }

/// Trajectory samples as one (rows x columns) array in CSV column order.
Eigen::MatrixXd trajectory_table(const Trajectory& traj) {
    const Eigen::Index rows = static_cast<Eigen::Index>(traj.samples.size());
    const Eigen::Index dim = rows == 0 ? 0 : traj.samples.front().state.flat().size();
    Eigen::MatrixXd out(rows, dim + 6);
    for (Eigen::Index k = 0; k < rows; ++k) {
        const Sample& s = traj.samples[static_cast<std::size_t>(k)];
        out(k, 0) = s.t;
        out.row(k).segment(1, dim) = s.state.flat().transpose();
        out(k, dim + 1) = s.u;
        out(k, dim + 2) = s.sigma;
        out(k, dim + 3) = s.rho;
        out(k, dim + 4) = s.hamiltonian_residual;
        out(k, dim + 5) = s.energy;
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Reachable-set norm, dry-friction feedback and damped oscillator simulation";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::class_<OscillatorSystem>(m, "OscillatorSystem")
        .def(py::init<std::vector<double>>(), py::arg("omegas"))
        .def_property_readonly("omegas", &OscillatorSystem::omegas)
        .def("__len__", &OscillatorSystem::size)
        .def("__repr__", [](const OscillatorSystem& s) {
            return "OscillatorSystem(" + py::repr(py::cast(s.omegas())).cast<std::string>() + ")";
        });

    m.def("drift", [](const OscillatorSystem& sys, const Vector& s) { return drift(sys, as_state(s)); });
    m.def("z_map", [](const OscillatorSystem& sys, const Vector& p) { return z_map(sys, Momentum(p)); });
    m.def("energy", [](const OscillatorSystem& sys, const Vector& s) { return energy(sys, as_state(s)); });
    m.def("propagate_free",
          [](const OscillatorSystem& sys, const Vector& s, double t) { return propagate_free(sys, as_state(s), t).flat(); });

    py::class_<ResonanceReport>(m, "ResonanceReport")
        .def_readonly("resonant", &ResonanceReport::resonant)
        .def_readonly("witnesses", &ResonanceReport::witnesses)
        .def_readonly("bound", &ResonanceReport::bound)
        .def_readonly("tolerance", &ResonanceReport::tolerance)
        .def("minimal_witnesses", &ResonanceReport::minimal_witnesses);
    m.def(
        "detect_resonance",
        [](const OscillatorSystem& sys, std::int64_t bound, double tolerance) {
            ResonanceOptions opts;
            opts.bound = bound;
            opts.tolerance = tolerance;
            return detect_resonance(sys, opts);
        },
        py::arg("sys"), py::arg("bound") = 10, py::arg("tolerance") = 0.0);

    py::enum_<QuadratureScheme>(m, "QuadratureScheme")
        .value("CHEBYSHEV_GAUSS", QuadratureScheme::ChebyshevGauss)
        .value("UNIFORM_ANGLE", QuadratureScheme::UniformAngle);
    py::class_<QuadratureSpec>(m, "QuadratureSpec")
        .def(py::init([](int nodes, QuadratureScheme scheme) { return QuadratureSpec{nodes, scheme}; }),
             py::arg("nodes_per_axis") = 64, py::arg("scheme") = QuadratureScheme::ChebyshevGauss)
        .def_readwrite("nodes_per_axis", &QuadratureSpec::nodes_per_axis)
        .def_readwrite("scheme", &QuadratureSpec::scheme);

    py::class_<SupportValue>(m, "SupportValue")
        .def_readonly("value", &SupportValue::value)
        .def_readonly("gradient", &SupportValue::gradient)
        .def_readonly("estimated_error", &SupportValue::estimated_error);
    m.def("inner_marginal", &inner_marginal, py::arg("c"), py::arg("a"));
    m.def("h_eval", &h_eval, py::arg("z"), py::arg("quadrature") = QuadratureSpec{});
    m.def("h_grad", &h_grad, py::arg("z"), py::arg("quadrature") = QuadratureSpec{});
    m.def(
        "H_of_p",
        [](const OscillatorSystem& sys, const Vector& p, const QuadratureSpec& q) {
            const auto h = H_of_p(sys, Momentum(p), q);
            return py::make_tuple(h.value, h.gradient, h.degenerate);
        },
        py::arg("sys"), py::arg("p"), py::arg("quadrature") = QuadratureSpec{});
    m.def(
        "reachable_support_rate",
        [](const OscillatorSystem& sys, const Vector& p, double horizon) {
            return reachable_support_rate(sys, Momentum(p), horizon);
        },
        py::arg("sys"), py::arg("p"), py::arg("horizon"));

    py::class_<DualOptions>(m, "DualOptions")
        .def(py::init<>())
        .def_readwrite("tol", &DualOptions::tol)
        .def_readwrite("max_iter", &DualOptions::max_iter)
        .def_readwrite("quadrature", &DualOptions::quadrature)
        .def_readwrite("freeze_ratio", &DualOptions::freeze_ratio);
    py::class_<DualSolution>(m, "DualSolution")
        .def_readonly("rho", &DualSolution::rho)
        .def_readonly("z_opt", &DualSolution::z_opt)
        .def_readonly("grad_rho", &DualSolution::grad_rho)
        .def_readonly("kkt_residual", &DualSolution::kkt_residual)
        .def_readonly("iterations", &DualSolution::iterations)
        .def_readonly("converged", &DualSolution::converged)
        .def_readonly("degenerate", &DualSolution::degenerate);
    m.def(
        "block_amplitudes", [](const OscillatorSystem& sys, const Vector& s) { return block_amplitudes(sys, as_state(s)); });
    m.def(
        "solve_dual",
        [](const OscillatorSystem& sys, const Vector& s, const DualOptions& opts) {
            return solve_dual(sys, as_state(s), opts);
        },
        py::arg("sys"), py::arg("state"), py::arg("options") = DualOptions{});
    m.def(
        "rho", [](const OscillatorSystem& sys, const Vector& s, const DualOptions& o) { return rho(sys, as_state(s), o); },
        py::arg("sys"), py::arg("state"), py::arg("options") = DualOptions{});
    m.def(
        "grad_rho",
        [](const OscillatorSystem& sys, const Vector& s, const DualOptions& o) { return grad_rho(sys, as_state(s), o); },
        py::arg("sys"), py::arg("state"), py::arg("options") = DualOptions{});
    m.def(
        "duality_residuals",
        [](const OscillatorSystem& sys, const Vector& s, const DualSolution& sol) {
            const auto r = duality_residuals(sys, as_state(s), sol);
            return py::dict(py::arg("pairing_gap") = r.pairing_gap, py::arg("fixedpoint_gap") = r.fixedpoint_gap,
                            py::arg("euler_gap") = r.euler_gap);
        });

    py::enum_<Smoother>(m, "Smoother").value("SATURATION", Smoother::Saturation).value("TANH", Smoother::Tanh);
    py::class_<ControlLaw>(m, "ControlLaw")
        .def(py::init([](double eps, Smoother sm, double amp) { return ControlLaw{eps, sm, amp}; }),
             py::arg("epsilon") = 1e-3, py::arg("smoother") = Smoother::Saturation, py::arg("amplitude") = 1.0)
        .def_readwrite("epsilon", &ControlLaw::epsilon)
        .def_readwrite("smoother", &ControlLaw::smoother)
        .def_readwrite("amplitude", &ControlLaw::amplitude);
    py::class_<StagePolicy>(m, "StagePolicy")
        .def(py::init([](double hi, double lo, double mid) { return StagePolicy{hi, lo, mid}; }), py::arg("rho_hi") = 10.0,
             py::arg("rho_lo") = 1.0, py::arg("a_mid") = 0.5)
        .def_readwrite("rho_hi", &StagePolicy::rho_hi)
        .def_readwrite("rho_lo", &StagePolicy::rho_lo)
        .def_readwrite("a_mid", &StagePolicy::a_mid);
    m.def("switching_value",
          [](const OscillatorSystem& sys, const Vector& s) { return switching_value(sys, as_state(s)); });
    m.def("control_exact", [](const OscillatorSystem& sys, const Vector& s) {
        const auto c = control_exact(sys, as_state(s));
        return py::make_tuple(c.lo, c.hi);
    });
    m.def(
        "control_regularized",
        [](const OscillatorSystem& sys, const Vector& s, const ControlLaw& law) {
            return control_regularized(sys, as_state(s), law);
        },
        py::arg("sys"), py::arg("state"), py::arg("law") = ControlLaw{});
    m.def("stage_select", [](const StagePolicy& p, double r) {
        const auto d = stage_select(p, r);
        return py::make_tuple(d.amplitude, d.terminal);
    });

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("t_max", &SimConfig::t_max)
        .def_readwrite("law", &SimConfig::law)
        .def_readwrite("stages", &SimConfig::stages)
        .def_readwrite("dual", &SimConfig::dual)
        .def_readwrite("drift_only", &SimConfig::drift_only)
        .def_readwrite("record_stride", &SimConfig::record_stride)
        .def_property(
            "max_step", [](const SimConfig& c) { return c.step.max_step; },
            [](SimConfig& c, double v) { c.step.max_step = v; })
        .def_property(
            "rtol", [](const SimConfig& c) { return c.step.rtol; }, [](SimConfig& c, double v) { c.step.rtol = v; })
        .def_property(
            "atol", [](const SimConfig& c) { return c.step.atol; }, [](SimConfig& c, double v) { c.step.atol = v; })
        .def_property(
            "stall_threshold", [](const SimConfig& c) { return c.standstill.threshold; },
            [](SimConfig& c, double v) { c.standstill.threshold = v; });

    py::class_<Trajectory>(m, "Trajectory")
        .def_property_readonly("reason", [](const Trajectory& t) { return to_string(t.reason); })
        .def_readonly("message", &Trajectory::message)
        .def_readonly("accepted_steps", &Trajectory::accepted_steps)
        .def_readonly("rejected_steps", &Trajectory::rejected_steps)
        .def_readonly("linear_bound_violations", &Trajectory::linear_bound_violations)
        .def("__len__", [](const Trajectory& t) { return t.samples.size(); })
        .def("table", &trajectory_table,
             "Samples as an array with columns t, x1, y1, ..., u, sigma, rho, h_res, energy")
        .def("interpolate", [](const Trajectory& t, double time) { return t.interpolate(time).flat(); });
    m.def(
        "integrate",
        [](const OscillatorSystem& sys, const Vector& s0, const SimConfig& cfg) {
            py::gil_scoped_release release;
            return integrate(sys, as_state(s0), cfg);
        },
        py::arg("sys"), py::arg("state"), py::arg("config") = SimConfig{});
    m.def(
        "rho_decay_violations",
        [](const Trajectory& traj, const ControlLaw& law, double band) {
            return rho_decay_check(traj, law, band).violations;
        },
        py::arg("trajectory"), py::arg("law"), py::arg("band_factor") = 1.0);
    m.def("hamiltonian_residual",
          [](const OscillatorSystem& sys, const Vector& s) { return hamiltonian_residual(sys, as_state(s)); });

    py::class_<SweepReport>(m, "SweepReport")
        .def_readonly("ladder", &SweepReport::ladder)
        .def_readonly("distances", &SweepReport::distances)
        .def_readonly("ratios", &SweepReport::ratios)
        .def_readonly("cauchy", &SweepReport::cauchy)
        .def_readonly("continuity_linear", &SweepReport::continuity_linear)
        .def_readonly("common_horizon", &SweepReport::common_horizon)
        .def_property_readonly("probe_gains", [](const SweepReport& r) {
            std::vector<double> g;
            for (const auto& p : r.probes) {
                g.push_back(p.gain);
            }
            return g;
        });
    m.def(
        "epsilon_sweep",
        [](const OscillatorSystem& sys, const Vector& s0, const SimConfig& cfg, std::vector<double> ladder,
           std::vector<double> probes) {
            SweepOptions opts;
            opts.ladder = std::move(ladder);
            opts.probe_perturbations = std::move(probes);
            py::gil_scoped_release release;
            return epsilon_sweep(sys, as_state(s0), cfg, opts);
        },
        py::arg("sys"), py::arg("state"), py::arg("config") = SimConfig{},
        py::arg("ladder") = std::vector<double>{1e-1, 1e-2, 1e-3, 1e-4},
        py::arg("probes") = std::vector<double>{1e-6, 1e-5});

    m.def(
        "run_command",
        [](const std::string& command, const std::string& config, std::optional<std::string> out) {
            std::ostringstream log;
            std::ostringstream err;
            const ExitCode code = run_command(command, CommandOptions{config, std::move(out), {}}, log, err);
            return py::make_tuple(static_cast<int>(code), log.str(), err.str());
        },
        py::arg("command"), py::arg("config"), py::arg("out") = std::nullopt,
        "Runs a CLI subcommand in-process; returns (exit_code, log, errors).");
}
