#pragma once

// Slow, independent reference implementations used only by the tests.

#include "genfric/model.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

using genfric::Vector;

/// (1/2pi) int |c + a cos phi| dphi by the midpoint rule with n points.
double marginal_trapezoid(double c, double a, long n);

/// (2pi)^-N int |sum z_i cos phi_i| by the midpoint rule on an n^N grid.
double support_bruteforce(const Vector& z, long n);

/// rho for one oscillator: max over sampled momentum directions of <x, p> / H(p).
double rho_single_scan(double omega, double x, double y, long directions);

/// rho(x) = max_{z >= 0} <r, z> / H(z) by projected gradient ascent on the
/// unit simplex with backtracking, using `support` for H and its gradient.
struct SupportFn {
    std::function<double(const Vector&)> value;
    std::function<Vector(const Vector&)> gradient;
};
struct DualResult {
    double rho;
    Vector z;  // scaled so H(z) = 1
};
DualResult dual_projected_gradient(const Vector& r, const SupportFn& support, double tol = 1e-12,
                                   int max_iter = 20000);

/// Central finite-difference gradient with step h.
Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x, double h);

/// Piecewise-analytic solution of x'' = -x - a sign(x') (unit frequency): arcs
/// about +-a, sticking once the velocity vanishes with |x| <= a.
class DryFriction {
  public:
    DryFriction(double x0, double y0, double amplitude = 1.0);
    /// (x, y) at time t >= 0.
    std::pair<double, double> at(double t) const;
    /// Times where the velocity vanishes (arc ends), in order; the last one sticks.
    const std::vector<double>& switch_times() const { return switches_; }

  private:
    struct Arc {
        double t0, x0, y0, centre;
    };
    std::vector<Arc> arcs_;
    std::vector<double> switches_;
    double stick_x_ = 0.0;
    double stick_t_ = 0.0;
};

/// All nonzero m with |m|_inf <= bound, first nonzero entry positive and
/// |sum m_i omega_i| <= tol, by plain nested enumeration.
std::vector<std::vector<std::int64_t>> resonance_enumerate(const std::vector<double>& omegas, std::int64_t bound,
                                                           double tol);

}  // namespace oracle
