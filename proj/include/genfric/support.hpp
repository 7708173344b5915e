#pragma once

#include "genfric/model.hpp"

#include <string>
#include <vector>

namespace genfric {

enum class QuadratureScheme {
    /// Chebyshev-Gauss tensor rule on the outer angles; the last two integrated
    /// angles use Gauss-Legendre panels split at the kinks of the integrand.
    ChebyshevGauss,
    /// Plain trapezoid rule in every outer angle, no kink handling.
    UniformAngle,
};

std::string to_string(QuadratureScheme scheme);
QuadratureScheme scheme_from_string(const std::string& name);

struct QuadratureSpec {
    int nodes_per_axis = 64;
    QuadratureScheme scheme = QuadratureScheme::ChebyshevGauss;

    void validate() const;
};

/// Value and z-gradient of the limit support function at one point.
struct SupportValue {
    double value = 0.0;
    Vector gradient;
    double estimated_error = 0.0;
};

/// Support function of the limit body in momentum coordinates.
struct MomentumSupport {
    double value = 0.0;
    /// dH/dp, length 2N.
    Vector gradient;
    double estimated_error = 0.0;
    /// Blocks with z_i = 0; their gradient entries are set to zero.
    std::vector<bool> degenerate;
};

/// Mean of |c + a cos(phi)| over one period. Requires a >= 0.
double inner_marginal(double c, double a);

/// Partial derivatives of inner_marginal with respect to c and a.
struct MarginalPartials {
    double value;
    double dc;
    double da;
};
MarginalPartials inner_marginal_partials(double c, double a);

/// Limit support function  H(z) = (2 pi)^-N  int |sum z_i cos(phi_i)| dphi
/// and its gradient, with an error estimate from a 1.5x finer rule.
SupportValue h_eval(const Vector& z, const QuadratureSpec& q = {});

/// Same as h_eval without the error estimate; used in inner loops.
SupportValue h_value_grad(const Vector& z, const QuadratureSpec& q = {});

/// Skips the N = 1 closed form so the multi-angle path can be exercised on any N.
SupportValue h_value_grad_quadrature(const Vector& z, const QuadratureSpec& q = {});

/// Gradient of H at z; throws ValidationError at z = 0.
Vector h_grad(const Vector& z, const QuadratureSpec& q = {});

/// H_Omega(p) = H(z(p)) with the p-gradient from the chain rule.
MomentumSupport H_of_p(const OscillatorSystem& sys, const Momentum& p, const QuadratureSpec& q = {});

/// (1/T) int_0^T |<B, exp(A^T s) p>| ds, the finite-horizon support rate of the
/// reachable set. Tends to H(z(p)) as T grows when the frequencies are non-resonant.
double reachable_support_rate(const OscillatorSystem& sys, const Momentum& p, double horizon);

}  // namespace genfric
