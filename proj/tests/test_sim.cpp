#include "genfric/errors.hpp"
#include "genfric/sim.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace genfric;

namespace {

constexpr double kPi = std::numbers::pi;

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) {
        out[i++] = x;
    }
    return out;
}

/// Full amplitude for the whole run: thresholds far below the states used.
SimConfig dry_friction_config(double eps, double t_max) {
    SimConfig cfg;
    cfg.t_max = t_max;
    cfg.law.epsilon = eps;
    cfg.stages = StagePolicy{0.2, 0.1, 0.5};
    return cfg;
}

double sup_error_vs_dry_friction(const Trajectory& traj, const oracle::DryFriction& ref, double t_end) {
    double worst = 0.0;
    for (const auto& s : traj.samples) {
        if (s.t > t_end) {
            break;
        }
        const auto [x, y] = ref.at(s.t);
        worst = std::max(worst, std::hypot(s.state.x(0) - x, s.state.y(0) - y));
    }
    return worst;
}

void check_trajectory_invariants(const OscillatorSystem& sys, const Trajectory& traj, double amplitude) {
    REQUIRE(!traj.samples.empty());
    for (std::size_t k = 0; k < traj.samples.size(); ++k) {
        const auto& s = traj.samples[k];
        if (k > 0) {
            CHECK(s.t > traj.samples[k - 1].t);
        }
        CHECK(std::abs(s.u) <= amplitude);
        CHECK(std::abs(s.hamiltonian_residual) <= 1e-5 * s.rho * sys.max_omega());
    }
    CHECK(traj.linear_bound_violations == 0);
}

}  // namespace

TEST_CASE("sim config validation") {
    SimConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.t_max = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = SimConfig{};
    cfg.step.rtol = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = SimConfig{};
    cfg.record_stride = 0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = SimConfig{};
    cfg.law.epsilon = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = SimConfig{};
    cfg.stages.a_mid = 2.0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);

    const OscillatorSystem sys({1.0});
    CHECK_THROWS_AS(integrate(sys, State::zeros(1), SimConfig{}), ValidationError);
    CHECK_THROWS_AS(integrate(sys, State(vec({1.0, 0.0, 1.0, 0.0})), SimConfig{}), ValidationError);
    CHECK(to_string(Termination::TerminalStage) == "terminal-stage");
    CHECK(to_string(Termination::SolverFailure) == "solver-failure");
}

TEST_CASE("one oscillator from (0, 2): classical dry-friction arcs") {
    const OscillatorSystem sys({1.0});
    const State s0(vec({0.0, 2.0}));
    const SimConfig cfg = dry_friction_config(1e-3, 12.0);
    const Trajectory traj = integrate(sys, s0, cfg);
    const oracle::DryFriction ref(0.0, 2.0);
    REQUIRE(ref.switch_times().size() == 2);
    const double t1 = ref.switch_times()[0];
    CHECK(t1 == doctest::Approx(std::atan(2.0)));

    check_trajectory_invariants(sys, traj, 1.0);
    CHECK(sup_error_vs_dry_friction(traj, ref, ref.switch_times()[1]) < 1e-2);
    for (const auto& s : traj.samples) {
        if (s.t < t1 - 0.01) {
            CHECK(s.u == -1.0);
        }
    }
    for (std::size_t k = 1; k < traj.samples.size(); ++k) {
        if (traj.samples[k].t < t1 - 0.01) {
            CHECK(traj.samples[k].rho < traj.samples[k - 1].rho);
        }
    }
    CHECK(rho_decay_check(traj, cfg.law).violations == 0);
    // Comes to rest near x = 3 - sqrt(5) inside the friction band; the
    // regularized law only creeps from there at a rate of order eps.
    CHECK(traj.reason != Termination::SolverFailure);
    CHECK(traj.samples.back().state.x(0) == doctest::Approx(3.0 - std::sqrt(5.0)).epsilon(1e-2));
}

TEST_CASE("start on the switching surface integrates") {
    const OscillatorSystem sys({1.0});
    const Trajectory traj = integrate(sys, State(vec({1.0, 0.0})), dry_friction_config(1e-3, 5.0));
    CHECK(traj.reason != Termination::SolverFailure);
    check_trajectory_invariants(sys, traj, 1.0);
}

TEST_CASE("two oscillators: rho halves within T = 200") {
    const OscillatorSystem sys({1.0, std::sqrt(2.0)});
    const State s0(vec({3.0, 5.0, -4.0, 6.0}));
    SimConfig cfg;
    cfg.t_max = 200.0;
    const double rho0 = rho(sys, s0);
    CHECK(rho0 == doctest::Approx(17.4313).epsilon(1e-4));
    cfg.law.epsilon = 1e-3 * rho0;
    const Trajectory traj = integrate(sys, s0, cfg);
    CHECK(traj.reason != Termination::SolverFailure);
    CHECK(traj.samples.back().rho < rho0 / 2);
    check_trajectory_invariants(sys, traj, 1.0);
    CHECK(rho_decay_check(traj, cfg.law).violations == 0);
    CHECK(traj.samples.back().energy < traj.samples.front().energy);
}

TEST_CASE("termination reasons") {
    SUBCASE("terminal stage lands on rho_lo") {
        const OscillatorSystem sys({1.0});
        SimConfig cfg;
        cfg.law.epsilon = 0.03;
        const Trajectory traj = integrate(sys, State(vec({0.0, 20.0})), cfg);
        CHECK(traj.reason == Termination::TerminalStage);
        CHECK(traj.samples.back().rho == doctest::Approx(cfg.stages.rho_lo).epsilon(1e-6));
        check_trajectory_invariants(sys, traj, 1.0);
    }
    SUBCASE("standstill inside the friction band") {
        const OscillatorSystem sys({1.0});
        SimConfig cfg = dry_friction_config(1e-3, 100.0);
        cfg.standstill.threshold = 1e-2;
        const Trajectory traj = integrate(sys, State(vec({0.0, 2.0})), cfg);
        CHECK(traj.reason == Termination::Standstill);
        CHECK(traj.end_time() > 4.0 + 2 * kPi);
        CHECK(traj.end_time() < 30.0);
    }
    SUBCASE("horizon") {
        const OscillatorSystem sys({1.0, std::sqrt(2.0)});
        SimConfig cfg;
        cfg.t_max = 3.0;
        const Trajectory traj = integrate(sys, State(vec({3.0, 5.0, -4.0, 6.0})), cfg);
        CHECK(traj.reason == Termination::Horizon);
        CHECK(traj.end_time() == doctest::Approx(3.0).epsilon(1e-12));
    }
    SUBCASE("solver failure returns the partial trajectory") {
        const OscillatorSystem sys({1.0, std::sqrt(2.0)});
        SimConfig cfg;
        cfg.dual.tol = 1e-300;
        cfg.dual.max_iter = 1;
        const Trajectory traj = integrate(sys, State(vec({3.0, 5.0, -4.0, 6.0})), cfg);
        CHECK(traj.reason == Termination::SolverFailure);
        CHECK_FALSE(traj.message.empty());
    }
}

TEST_CASE("staged amplitude switches exactly at rho_hi") {
    const OscillatorSystem sys({1.0});
    SimConfig cfg;
    cfg.law.epsilon = 0.03;
    const Trajectory traj = integrate(sys, State(vec({0.0, 20.0})), cfg);
    bool seen_mid = false;
    for (const auto& s : traj.samples) {
        if (s.rho < cfg.stages.rho_hi * (1 - 1e-6)) {
            CHECK(std::abs(s.u) <= cfg.stages.a_mid);
            seen_mid = true;
        }
    }
    CHECK(seen_mid);
}

TEST_CASE("hamiltonian residual examples") {
    const OscillatorSystem one({1.0});
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        CHECK(std::abs(hamiltonian_residual(one, State(vec({u(rng), u(rng)})))) < 1e-12);
    }
    const OscillatorSystem two({1.0, std::sqrt(2.0)});
    DualOptions tight;
    tight.tol = 1e-12;
    for (int trial = 0; trial < 10; ++trial) {
        const State s(vec({u(rng), u(rng), u(rng), u(rng)}));
        const double r = rho(two, s);
        const double res = hamiltonian_residual(two, s);
        CHECK(std::abs(res) <= 1e-6 * r * two.max_omega());
        const Vector fd = oracle::fd_gradient([&](const Vector& x) { return rho(two, State(x), tight); }, s.flat(), 1e-6);
        CHECK(std::abs(drift(two, s).dot(fd)) <= 1e-6 * r * two.max_omega());
        for (double lambda : {0.1, 10.0}) {
            CHECK(std::abs(hamiltonian_residual(two, State(lambda * s.flat()))) <= 1e-6 * lambda * r * two.max_omega());
        }
    }
}

TEST_CASE("rho decay check") {
    const OscillatorSystem sys({1.0});
    SimConfig cfg = dry_friction_config(1e-3, 6.0);
    const Trajectory damped = integrate(sys, State(vec({0.0, 2.0})), cfg);
    const auto clean = rho_decay_check(damped, cfg.law);
    CHECK(clean.violations == 0);
    CHECK(clean.worst_excess <= 0.0);

    Trajectory tampered = damped;
    tampered.samples[tampered.samples.size() / 2].rho += 0.5;
    const auto caught = rho_decay_check(tampered, cfg.law);
    CHECK(caught.violations >= 1);
    CHECK(caught.worst_excess > 0.0);
    CHECK(caught.worst_index == tampered.samples.size() / 2);

    SimConfig drift = cfg;
    drift.drift_only = true;
    const OscillatorSystem two({1.0, std::sqrt(2.0)});
    drift.t_max = 2 * kPi;
    const Trajectory free = integrate(two, State(vec({3.0, 5.0, -4.0, 6.0})), drift);
    CHECK(free.reason == Termination::Horizon);
    for (const auto& s : free.samples) {
        CHECK(s.u == 0.0);
        CHECK(std::abs(s.rho - free.samples.front().rho) <= 1e-8 * free.samples.front().rho);
    }
    CHECK(rho_decay_check(free, drift.law).violations == 0);
    CHECK(rho_decay_check(Trajectory{}, cfg.law).violations == 0);
}

TEST_CASE("drift-only stepper: free flow accuracy, energy and time reversal") {
    const OscillatorSystem sys({1.0, std::sqrt(2.0), 2.2});
    const State s0(vec({0.5, -1.0, 1.2, 0.3, -0.4, 0.8}));
    SimConfig cfg;
    cfg.drift_only = true;
    cfg.t_max = 7.3;
    const Trajectory fwd = integrate(sys, s0, cfg);
    const State s1 = fwd.samples.back().state;
    CHECK((s1.flat() - propagate_free(sys, s0, cfg.t_max).flat()).norm() < 1e-8);
    for (const auto& s : fwd.samples) {
        CHECK(s.energy == doctest::Approx(fwd.samples.front().energy).epsilon(1e-9));
    }
    // Reversing all velocities runs the free flow backwards.
    Vector flipped = s1.flat();
    flipped(Eigen::seq(1, Eigen::last, 2)) *= -1.0;
    const Trajectory back = integrate(sys, State(flipped), cfg);
    Vector returned = back.samples.back().state.flat();
    returned(Eigen::seq(1, Eigen::last, 2)) *= -1.0;
    CHECK((returned - s0.flat()).norm() < 1e-8);

    for (double t : {0.05, 1.234, 5.5, 7.2999}) {
        CHECK((fwd.interpolate(t).flat() - propagate_free(sys, s0, t).flat()).norm() < 1e-6);
    }
}

TEST_CASE("energy dissipates from above the high stage") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-6.0, 6.0);
    const OscillatorSystem sys({1.0, std::sqrt(3.0)});
    int tested = 0;
    while (tested < 3) {
        const State s0(vec({u(rng), u(rng), u(rng), u(rng)}));
        const double r0 = rho(sys, s0);
        if (r0 <= 10.0) {
            continue;
        }
        SimConfig cfg;
        cfg.t_max = 10.0;
        cfg.law.epsilon = 1e-3 * r0;
        const Trajectory traj = integrate(sys, s0, cfg);
        CHECK(traj.reason != Termination::Standstill);
        CHECK(traj.samples.back().energy < traj.samples.front().energy);
        check_trajectory_invariants(sys, traj, 1.0);
        ++tested;
    }
}

TEST_CASE("epsilon sweep on one oscillator") {
    const OscillatorSystem sys({1.0});
    SimConfig cfg = dry_friction_config(1e-3, 6.0);
    SweepOptions opts;
    const SweepReport report = epsilon_sweep(sys, State(vec({0.0, 2.0})), cfg, opts);
    REQUIRE(report.distances.size() == 3);
    CHECK(report.distances[1] < report.distances[0]);
    CHECK(report.distances[2] < report.distances[1]);
    CHECK(report.cauchy);
    CHECK(report.ratios.size() == 2);
    REQUIRE(report.probes.size() == 2);
    for (const auto& p : report.probes) {
        CHECK(std::isfinite(p.gain));
        CHECK(p.deviation > 0.0);
    }
    CHECK(report.continuity_linear);

    SweepOptions flat;
    flat.ladder = {1e-3, 1e-3, 1e-3};
    const SweepReport same = epsilon_sweep(sys, State(vec({0.0, 2.0})), cfg, flat);
    for (double d : same.distances) {
        CHECK(d == 0.0);
    }

    SweepOptions short_ladder;
    short_ladder.ladder = {1e-1, 1e-2};
    CHECK_THROWS_AS(epsilon_sweep(sys, State(vec({0.0, 2.0})), cfg, short_ladder), ValidationError);
    SweepOptions rising;
    rising.ladder = {1e-3, 1e-2, 1e-1};
    CHECK_THROWS_AS(epsilon_sweep(sys, State(vec({0.0, 2.0})), cfg, rising), ValidationError);
    SimConfig broken = cfg;
    broken.dual.tol = 1e-300;
    broken.dual.max_iter = 1;
    CHECK_THROWS_AS(epsilon_sweep(OscillatorSystem({1.0, 2.0}), State(vec({1.0, 1.0, 1.0, 1.0})), broken, opts),
                    NumericalError);
}

TEST_CASE("trajectory distance") {
    const OscillatorSystem sys({1.0});
    SimConfig cfg;
    cfg.drift_only = true;
    cfg.t_max = 3.0;
    const Trajectory a = integrate(sys, State(vec({1.0, 0.0})), cfg);
    const Trajectory b = integrate(sys, State(vec({1.1, 0.0})), cfg);
    CHECK(trajectory_distance(a, a) == 0.0);
    CHECK(trajectory_distance(a, b) == doctest::Approx(0.1).epsilon(1e-6));
    CHECK_THROWS_AS(trajectory_distance(a, Trajectory{}), ValidationError);
}

TEST_CASE("canonical system on one oscillator") {
    const OscillatorSystem sys({1.0});
    SimConfig cfg = dry_friction_config(1e-3, kPi);
    cfg.law.smoother = Smoother::Tanh;
    const CanonicalTrajectory run = canonical_integrate(sys, State(vec({0.0, 2.0})), cfg);
    CHECK_FALSE(run.aborted);
    CHECK(run.max_gap <= 1e-3);

    const Vector g0 = grad_rho(sys, State(vec({0.0, 2.0})));
    const CanonicalTrajectory off = canonical_integrate(sys, State(vec({0.0, 2.0})), cfg, Vector(2.0 * g0));
    CHECK(off.samples.front().gap >= g0.norm() * (1 - 1e-12));

    SimConfig sat = cfg;
    sat.law.smoother = Smoother::Saturation;
    CHECK_THROWS_AS(canonical_integrate(sys, State(vec({0.0, 2.0})), sat), ValidationError);
}

TEST_CASE("canonical system drift-only: costate follows the closed-form rotation") {
    const OscillatorSystem sys({1.0, std::sqrt(2.0)});
    SimConfig cfg;
    cfg.drift_only = true;
    cfg.t_max = 4.0;
    const State s0(vec({3.0, 5.0, -4.0, 6.0}));
    const CanonicalTrajectory run = canonical_integrate(sys, s0, cfg);
    CHECK_FALSE(run.aborted);
    const Momentum p0(run.samples.front().momentum);
    for (const auto& s : run.samples) {
        CHECK((s.momentum - propagate_costate(sys, p0, -s.t).flat()).norm() < 1e-7 * p0.flat().norm());
        CHECK(s.gap < 1e-6);
    }
}

TEST_CASE("canonical system on two oscillators keeps p close to grad rho") {
    const OscillatorSystem sys({1.0, std::sqrt(2.0)});
    SimConfig cfg;
    cfg.t_max = 1.0;
    cfg.law.smoother = Smoother::Tanh;
    cfg.law.epsilon = 0.05;
    const CanonicalTrajectory run = canonical_integrate(sys, State(vec({3.0, 5.0, -4.0, 6.0})), cfg);
    CHECK_FALSE(run.aborted);
    CHECK(run.max_gap < 1e-3);
}

TEST_CASE("canonical system aborts gracefully on a degenerate block") {
    const OscillatorSystem sys({1.0, 2.0});
    SimConfig cfg;
    cfg.t_max = 1.0;
    cfg.law.smoother = Smoother::Tanh;
    const CanonicalTrajectory run = canonical_integrate(sys, State(vec({1.0, 0.5, 0.0, 0.0})), cfg);
    CHECK(run.aborted);
    CHECK_FALSE(run.message.empty());
}
