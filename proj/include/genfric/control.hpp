#pragma once

#include "genfric/dualnorm.hpp"
#include "genfric/model.hpp"

#include <string>

namespace genfric {

enum class Smoother {
    /// clamp(s, -1, 1): Lipschitz, reproduces sliding exactly on the switching surface.
    Saturation,
    /// tanh(s): smooth, used where the feedback must be differentiable.
    Tanh,
};

std::string to_string(Smoother smoother);
Smoother smoother_from_string(const std::string& name);

/// Odd, nondecreasing, saturating at +-1; tends to sign(s) pointwise as the argument scale grows.
double smooth_sign(Smoother smoother, double s);
double smooth_sign_derivative(Smoother smoother, double s);

struct ControlLaw {
    double epsilon = 1e-3;
    Smoother smoother = Smoother::Saturation;
    double amplitude = 1.0;

    void validate() const;
};

/// A closed subinterval of [-1, 1].
struct ControlSet {
    double lo;
    double hi;
    bool is_singleton() const { return lo == hi; }
};

/// sigma(x) = <B, d rho / dx> = sum_i d rho / dy_i.
double switching_value(const OscillatorSystem& sys, const State& s, const DualOptions& opts = {});
double switching_value(const DualSolution& sol);

/// u = -sign(sigma), with the whole interval [-1, 1] on the switching surface.
ControlSet control_exact(const OscillatorSystem& sys, const State& s, const DualOptions& opts = {});
ControlSet control_exact(double sigma);

/// u = -amplitude * smoother(sigma / epsilon).
double control_regularized(const OscillatorSystem& sys, const State& s, const ControlLaw& law,
                           const DualOptions& opts = {});
double control_regularized(double sigma, const ControlLaw& law);

/// Amplitude schedule: full amplitude at high rho, reduced amplitude at
/// intermediate rho, and a terminal flag once rho drops below rho_lo (the
/// low-energy controller that would take over there is not part of this library).
struct StagePolicy {
    double rho_hi = 10.0;
    double rho_lo = 1.0;
    double a_mid = 0.5;

    void validate() const;
};

struct StageDecision {
    double amplitude;
    bool terminal;
};

StageDecision stage_select(const StagePolicy& policy, double rho);

}  // namespace genfric
