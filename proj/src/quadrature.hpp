#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace genfric::detail {

/// Gauss-Legendre rule mapped to [0, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Cached per thread; the reference stays valid for the thread's lifetime.
const GaussLegendre& gauss_legendre(int n);

/// Panel boundaries on [-1, 1] for an integrand with singular points at
/// `singular` (the Chebyshev weight adds +-1). Every singular point inside
/// [-1, 1] becomes a cut, and panels are graded geometrically toward singular
/// points lying close outside them so each panel keeps its nearest
/// singularity at least 0.1 panel lengths away.
void graded_panels(std::span<const double> singular, std::vector<double>& cuts);

/// Visits a quadrature rule for the mean over phi in [0, pi] of g(cos phi),
/// written as (1/pi) int_{-1}^{1} g(t) (1 - t^2)^{-1/2} dt. The integrand is
/// assumed smooth except where offset + scale * t equals one of `levels`.
/// Each panel is mapped through v -> 3v^2 - 2v^3, which turns endpoint
/// singularities of the form d^(k/2) (the weight included) into smooth ones.
/// `f(weight, t)` is called once per node; the weights sum to one.
template <class F>
void split_cos_rule(double offset, double scale, std::span<const double> levels,
                    const GaussLegendre& gl, F&& f) {
    thread_local std::vector<double> cuts;
    double singular[8];
    std::size_t ns = 0;
    if (scale > 0.0) {
        for (double level : levels) {
            const double t = (level - offset) / scale;
            if (std::abs(t) < 3.0 && ns < 8) {
                singular[ns++] = t;
            }
        }
    }
    graded_panels(std::span<const double>(singular, ns), cuts);

    constexpr double inv_pi = 1.0 / std::numbers::pi;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double lo = cuts[k];
        const double hi = cuts[k + 1];
        const double len = hi - lo;
        if (len <= 0.0) {
            continue;
        }
        // Distances to +-1 measured from the panel ends keep 1 - t^2 accurate near the edges.
        const double lo_gap = lo + 1.0;
        const double hi_gap = 1.0 - hi;
        for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
            const double v = gl.nodes[j];
            const double s = v * v * (3.0 - 2.0 * v);
            const double ds = 6.0 * v * (1.0 - v);
            const double one_plus = lo_gap + len * s;
            const double one_minus = hi_gap + len * (1.0 - s);
            const double t = lo + len * s;
            f(gl.weights[j] * len * ds * inv_pi / std::sqrt(one_plus * one_minus), t);
        }
    }
}

}  // namespace genfric::detail
