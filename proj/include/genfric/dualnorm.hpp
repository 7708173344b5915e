#pragma once

#include "genfric/model.hpp"
#include "genfric/support.hpp"

#include <vector>

namespace genfric {

/// r_i = sqrt(omega_i^2 x_i^2 + y_i^2). For fixed z, the best momentum with
/// z(p) = z pairs with the state to sum z_i r_i, which reduces the 2N-dim
/// duality problem to N dims.
Vector block_amplitudes(const OscillatorSystem& sys, const State& s);

struct DualOptions {
    double tol = 1e-8;
    int max_iter = 200;
    QuadratureSpec quadrature{};
    /// Blocks with r_i <= freeze_ratio * max(r) are pinned at z_i = 0.
    double freeze_ratio = 1e-12;
};

struct DualSolution {
    double rho = 0.0;
    /// Maximizer on the unit sphere of H, entries >= 0.
    Vector z_opt;
    /// d rho / dx, length 2N.
    Vector grad_rho;
    double kkt_residual = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<bool> degenerate;
    /// Hessian of H^2/2 restricted to the non-degenerate blocks, at the last
    /// Newton iterate. It is 0-homogeneous in z, so warm starts reuse it.
    Eigen::MatrixXd hessian;
};

/// rho(x) = max { <x, p> : H(p) <= 1 }, the norm whose unit ball is the limit
/// reachable body. Solved in z-space as the concave maximization
///   max_z <r, z> - H(z)^2 / 2
/// by damped Newton steps; the maximizer scaled to H = 1 is z_opt.
/// Throws ValidationError at s = 0. Non-convergence is reported through
/// `converged`, not thrown.
///
/// `previous` warm-starts the iteration from its z_opt (and Hessian, when the
/// set of degenerate blocks matches).
DualSolution solve_dual(const OscillatorSystem& sys, const State& s, const DualOptions& opts = {},
                        const DualSolution* previous = nullptr);

double rho(const OscillatorSystem& sys, const State& s, const DualOptions& opts = {});

/// d rho / dx; throws NumericalError if the solver does not converge.
Vector grad_rho(const OscillatorSystem& sys, const State& s, const DualOptions& opts = {});

/// The maximizing momentum rebuilt from sol.z_opt by per-block alignment, scaled so H(p) = 1.
Momentum optimal_momentum(const OscillatorSystem& sys, const State& s, const DualSolution& sol,
                          const QuadratureSpec& q = {});

struct DualityResiduals {
    /// |<x, p> - rho H(p)|
    double pairing_gap = 0.0;
    /// |x / rho - dH/dp(p)|
    double fixedpoint_gap = 0.0;
    /// |<x, grad rho> - rho|
    double euler_gap = 0.0;
};

DualityResiduals duality_residuals(const OscillatorSystem& sys, const State& s,
                                   const DualSolution& sol, const QuadratureSpec& q = {});

}  // namespace genfric
