#include "genfric/dualnorm.hpp"

#include "genfric/errors.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>

namespace genfric {

Vector block_amplitudes(const OscillatorSystem& sys, const State& s) {
    if (s.size() != sys.size()) {
        throw ValidationError("state dimension does not match the system");
    }
    Vector r(sys.size());
    for (std::size_t i = 0; i < sys.size(); ++i) {
        r[i] = std::hypot(sys.omega(i) * s.x(i), s.y(i));
    }
    return r;
}

namespace {

struct Objective {
    const Vector& r;
    const QuadratureSpec& q;

    struct Eval {
        double phi;
        double h;
        Vector g;
    };

    Eval operator()(const Vector& z) const {
        const SupportValue sv = h_value_grad(z, q);
        return {r.dot(z) - 0.5 * sv.value * sv.value, sv.value, sv.gradient};
    }
};

/// |r / rho_est - grad H(z)| with rho_est = <r, z> / H(z); zero exactly at the maximizer.
double kkt_residual(const Vector& r, const Vector& z, double h, const Vector& g) {
    const double rho_est = r.dot(z) / h;
    return (r / rho_est - g).norm();
}

}  // namespace

DualSolution solve_dual(const OscillatorSystem& sys, const State& s, const DualOptions& opts,
                        const DualSolution* previous) {
    if (s.is_zero()) {
        throw ValidationError("rho is not differentiable at the origin (state is zero)");
    }
    const Vector r_full = block_amplitudes(sys, s);
    const std::size_t n = sys.size();
    const double cutoff = opts.freeze_ratio * r_full.maxCoeff();

    std::vector<std::size_t> active;
    DualSolution sol;
    sol.degenerate.assign(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        if (r_full[i] > cutoff) {
            active.push_back(i);
        } else {
            sol.degenerate[i] = true;
        }
    }
    const auto m = static_cast<Eigen::Index>(active.size());
    Vector r(m);
    for (Eigen::Index k = 0; k < m; ++k) {
        r[k] = r_full[active[k]];
    }

    const Objective objective{r, opts.quadrature};
    Vector z = r;
    Eigen::MatrixXd hess;
    bool fresh_hessian = false;
    if (previous != nullptr && previous->z_opt.size() == static_cast<Eigen::Index>(n)) {
        Vector guess(m);
        for (Eigen::Index k = 0; k < m; ++k) {
            guess[k] = std::abs(previous->z_opt[active[k]]);
        }
        if (!guess.isZero(0.0)) {
            z = guess;
        }
        if (previous->degenerate == sol.degenerate && previous->hessian.rows() == m) {
            hess = previous->hessian;
        }
    }
    {
        // Best point on the ray through z.
        const double h = h_value_grad(z, opts.quadrature).value;
        z *= r.dot(z) / (h * h);
    }

    auto fd_hessian = [&](const Vector& at, const Objective::Eval& ev) {
        // g g^T + H * Hess(H), with Hess(H) from central differences of g.
        Eigen::MatrixXd out = ev.g * ev.g.transpose();
        const double step = 1e-6 * at.norm();
        Eigen::MatrixXd hess_h(m, m);
        for (Eigen::Index j = 0; j < m; ++j) {
            Vector zp = at;
            Vector zm = at;
            zp[j] += step;
            zm[j] -= step;
            hess_h.col(j) = (h_value_grad(zp, opts.quadrature).gradient -
                             h_value_grad(zm, opts.quadrature).gradient) /
                            (2.0 * step);
        }
        out += ev.h * 0.5 * (hess_h + hess_h.transpose());
        return out;
    };

    auto cur = objective(z);
    double residual = kkt_residual(r, z, cur.h, cur.g);
    int iter = 0;
    bool stalled = false;
    while (residual > opts.tol && iter < opts.max_iter) {
        ++iter;
        if (hess.rows() != m) {
            hess = fd_hessian(z, cur);
            fresh_hessian = true;
        }
        const Vector grad_phi = r - cur.h * cur.g;

        Vector dir;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
        if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
            dir = ldlt.solve(grad_phi);
        }
        if (dir.size() != m || !dir.allFinite() || dir.dot(grad_phi) <= 0.0) {
            if (!fresh_hessian) {
                hess.resize(0, 0);
                continue;
            }
            dir = grad_phi / std::max(cur.g.squaredNorm(), 1e-300);
        }

        // Armijo backtracking; |z| never lowers the objective because H is even per coordinate.
        double t = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            Vector trial = (z + t * dir).cwiseAbs();
            if (!trial.isZero(0.0)) {
                auto ev = objective(trial);
                // Near the maximizer the objective gain drops below rounding, so a
                // shrinking KKT residual also counts as progress.
                if (ev.phi >= cur.phi + 1e-4 * t * dir.dot(grad_phi) ||
                    kkt_residual(r, trial, ev.h, ev.g) < (1.0 - 1e-4 * t) * residual) {
                    z = std::move(trial);
                    cur = std::move(ev);
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        const double next = kkt_residual(r, z, cur.h, cur.g);
        if (!accepted) {
            if (!fresh_hessian) {
                // A stale Hessian may point nowhere useful; rebuild before giving up.
                hess.resize(0, 0);
                continue;
            }
            stalled = true;
            residual = next;
            break;
        }
        if (next > 0.25 * residual) {
            hess.resize(0, 0);
            fresh_hessian = false;
        }
        residual = next;
    }

    const Vector z_unit = z / cur.h;
    sol.rho = r.dot(z_unit);
    sol.z_opt = Vector::Zero(static_cast<Eigen::Index>(n));
    sol.grad_rho = Vector::Zero(sys.dim());
    for (Eigen::Index k = 0; k < m; ++k) {
        const std::size_t i = active[k];
        const double w = sys.omega(i);
        sol.z_opt[i] = z_unit[k];
        sol.grad_rho[2 * i] = z_unit[k] * w * w * s.x(i) / r_full[i];
        sol.grad_rho[2 * i + 1] = z_unit[k] * s.y(i) / r_full[i];
    }
    sol.kkt_residual = residual;
    sol.iterations = iter;
    sol.converged = !stalled && residual <= opts.tol;
    sol.hessian = std::move(hess);
    return sol;
}

double rho(const OscillatorSystem& sys, const State& s, const DualOptions& opts) {
    if (s.is_zero()) {
        return 0.0;
    }
    return solve_dual(sys, s, opts).rho;
}

Vector grad_rho(const OscillatorSystem& sys, const State& s, const DualOptions& opts) {
    DualSolution sol = solve_dual(sys, s, opts);
    if (!sol.converged) {
        throw NumericalError("dual solver did not converge (kkt residual " +
                             std::to_string(sol.kkt_residual) + ")");
    }
    return sol.grad_rho;
}

Momentum optimal_momentum(const OscillatorSystem& sys, const State& s, const DualSolution& sol,
                          const QuadratureSpec& q) {
    const Vector r = block_amplitudes(sys, s);
    Momentum p(Vector::Zero(sys.dim()));
    for (std::size_t i = 0; i < sys.size(); ++i) {
        if (r[i] == 0.0) {
            continue;
        }
        const double w = sys.omega(i);
        p.xi(i) = sol.z_opt[i] * w * w * s.x(i) / r[i];
        p.eta(i) = sol.z_opt[i] * s.y(i) / r[i];
    }
    const double h = H_of_p(sys, p, q).value;
    if (h > 0.0) {
        p.flat() /= h;
    }
    return p;
}

DualityResiduals duality_residuals(const OscillatorSystem& sys, const State& s,
                                   const DualSolution& sol, const QuadratureSpec& q) {
    const Momentum p = optimal_momentum(sys, s, sol, q);
    const MomentumSupport hp = H_of_p(sys, p, q);
    DualityResiduals out;
    out.pairing_gap = std::abs(s.flat().dot(p.flat()) - sol.rho * hp.value);
    out.fixedpoint_gap = (s.flat() / sol.rho - hp.gradient).norm();
    out.euler_gap = std::abs(s.flat().dot(sol.grad_rho) - sol.rho);
    return out;
}

}  // namespace genfric
