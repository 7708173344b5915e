#include "genfric/control.hpp"

#include "genfric/errors.hpp"

#include <algorithm>
#include <cmath>

namespace genfric {

std::string to_string(Smoother smoother) {
    return smoother == Smoother::Saturation ? "saturation" : "tanh";
}

Smoother smoother_from_string(const std::string& name) {
    if (name == "saturation") {
        return Smoother::Saturation;
    }
    if (name == "tanh") {
        return Smoother::Tanh;
    }
    throw ValidationError("unknown smoother '" + name + "' (expected saturation or tanh)");
}

double smooth_sign(Smoother smoother, double s) {
    switch (smoother) {
        case Smoother::Saturation:
            return std::clamp(s, -1.0, 1.0);
        case Smoother::Tanh:
            return std::tanh(s);
    }
    return 0.0;
}

double smooth_sign_derivative(Smoother smoother, double s) {
    switch (smoother) {
        case Smoother::Saturation:
            return std::abs(s) < 1.0 ? 1.0 : 0.0;
        case Smoother::Tanh: {
            const double t = std::tanh(s);
            return 1.0 - t * t;
        }
    }
    return 0.0;
}

void ControlLaw::validate() const {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw ValidationError("control epsilon must be > 0");
    }
    if (!(amplitude > 0.0 && amplitude <= 1.0)) {
        throw ValidationError("control amplitude must lie in (0, 1]");
    }
}

double switching_value(const DualSolution& sol) {
    double sigma = 0.0;
    for (Eigen::Index i = 1; i < sol.grad_rho.size(); i += 2) {
        sigma += sol.grad_rho[i];
    }
    return sigma;
}

double switching_value(const OscillatorSystem& sys, const State& s, const DualOptions& opts) {
    Vector g = grad_rho(sys, s, opts);
    double sigma = 0.0;
    for (Eigen::Index i = 1; i < g.size(); i += 2) {
        sigma += g[i];
    }
    return sigma;
}

ControlSet control_exact(double sigma) {
    if (sigma > 0.0) {
        return {-1.0, -1.0};
    }
    if (sigma < 0.0) {
        return {1.0, 1.0};
    }
    return {-1.0, 1.0};
}

ControlSet control_exact(const OscillatorSystem& sys, const State& s, const DualOptions& opts) {
    return control_exact(switching_value(sys, s, opts));
}

double control_regularized(double sigma, const ControlLaw& law) {
    return -law.amplitude * smooth_sign(law.smoother, sigma / law.epsilon);
}

double control_regularized(const OscillatorSystem& sys, const State& s, const ControlLaw& law,
                           const DualOptions& opts) {
    law.validate();
    return control_regularized(switching_value(sys, s, opts), law);
}

void StagePolicy::validate() const {
    if (!(rho_lo > 0.0) || !(rho_hi > rho_lo)) {
        throw ValidationError("stage thresholds must satisfy rho_hi > rho_lo > 0");
    }
    if (!(a_mid > 0.0 && a_mid < 1.0)) {
        throw ValidationError("intermediate amplitude a_mid must lie in (0, 1)");
    }
}

StageDecision stage_select(const StagePolicy& policy, double rho) {
    if (rho >= policy.rho_hi) {
        return {1.0, false};
    }
    if (rho >= policy.rho_lo) {
        return {policy.a_mid, false};
    }
    return {0.0, true};
}

}  // namespace genfric
