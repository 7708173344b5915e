#include "genfric/support.hpp"

#include "genfric/errors.hpp"
#include "quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

namespace genfric {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoOverPi = 2.0 / std::numbers::pi;

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

int panel_nodes(const QuadratureSpec& q) { return std::max(8, q.nodes_per_axis / 2); }

/// Mean over phi of m(c + b cos phi, a) and its partials in (c, a, b).
struct PairMean {
    double value = 0.0;
    double dc = 0.0;
    double da = 0.0;
    double db = 0.0;
};

PairMean pair_mean(double c, double a, double b, const detail::GaussLegendre& gl) {
    PairMean out;
    const std::array<double, 2> levels{a, -a};
    detail::split_cos_rule(c, b, levels, gl, [&](double w, double t) {
        const auto m = inner_marginal_partials(c + b * t, a);
        out.value += w * m.value;
        out.dc += w * m.dc;
        out.da += w * m.da;
        out.db += w * m.dc * t;
    });
    return out;
}

/// Mean over phi of pair_mean(c + s cos phi, a, b) with partials in (c, s, a, b).
struct TripleMean {
    double value = 0.0;
    double dc = 0.0;
    double ds = 0.0;
    double da = 0.0;
    double db = 0.0;
};

TripleMean triple_mean(double c, double s, double a, double b, const detail::GaussLegendre& gl) {
    TripleMean out;
    const std::array<double, 4> levels{a + b, -(a + b), std::abs(a - b), -std::abs(a - b)};
    detail::split_cos_rule(c, s, levels, gl, [&](double w, double t) {
        const auto pm = pair_mean(c + s * t, a, b, gl);
        out.value += w * pm.value;
        out.dc += w * pm.dc;
        out.ds += w * pm.dc * t;
        out.da += w * pm.da;
        out.db += w * pm.db;
    });
    return out;
}

/// Indices of |z| in ascending order; the largest entries are integrated innermost.
std::vector<std::size_t> ascending_order(const Vector& absz) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(absz.size()));
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t i, std::size_t j) { return absz[i] < absz[j]; });
    return idx;
}

SupportValue chebyshev_path(const Vector& absz, const QuadratureSpec& q) {
    const auto n = static_cast<std::size_t>(absz.size());
    const auto& gl = detail::gauss_legendre(panel_nodes(q));
    const auto idx = ascending_order(absz);
    SupportValue out;
    out.gradient = Vector::Zero(absz.size());

    if (n == 1) {
        // Integrate |z cos(phi)| through the panel rule instead of the closed form.
        const auto pm = pair_mean(0.0, 0.0, absz[0], gl);
        out.value = pm.value;
        out.gradient[0] = pm.db;
        return out;
    }
    const std::size_t ia = idx[n - 1];
    const std::size_t ib = idx[n - 2];
    if (n == 2) {
        const auto pm = pair_mean(0.0, absz[ia], absz[ib], gl);
        out.value = pm.value;
        out.gradient[ia] = pm.da;
        out.gradient[ib] = pm.db;
        return out;
    }

    const std::size_t is = idx[n - 3];
    const std::size_t outer = n - 3;
    const int nodes = q.nodes_per_axis;
    std::vector<double> cheb(nodes);
    for (int k = 0; k < nodes; ++k) {
        cheb[k] = std::cos(kPi * (2.0 * k + 1.0) / (2.0 * nodes));
    }
    const double w_node = std::pow(1.0 / nodes, static_cast<double>(outer));

    // Odometer over the Chebyshev tensor grid of the outer angles.
    std::vector<int> pos(outer, 0);
    while (true) {
        double c = 0.0;
        for (std::size_t j = 0; j < outer; ++j) {
            c += absz[idx[j]] * cheb[pos[j]];
        }
        const auto tm = triple_mean(c, absz[is], absz[ia], absz[ib], gl);
        out.value += w_node * tm.value;
        out.gradient[ia] += w_node * tm.da;
        out.gradient[ib] += w_node * tm.db;
        out.gradient[is] += w_node * tm.ds;
        for (std::size_t j = 0; j < outer; ++j) {
            out.gradient[idx[j]] += w_node * tm.dc * cheb[pos[j]];
        }
        std::size_t k = 0;
        while (k < outer && pos[k] == nodes - 1) {
            pos[k] = 0;
            ++k;
        }
        if (k == outer) {
            break;
        }
        ++pos[k];
    }
    return out;
}

SupportValue uniform_path(const Vector& absz, const QuadratureSpec& q) {
    const auto n = static_cast<std::size_t>(absz.size());
    const auto idx = ascending_order(absz);
    SupportValue out;
    out.gradient = Vector::Zero(absz.size());
    const std::size_t ia = idx[n - 1];
    const std::size_t outer = n - 1;
    const int nodes = q.nodes_per_axis;
    std::vector<double> cosines(nodes);
    for (int k = 0; k < nodes; ++k) {
        cosines[k] = std::cos(2.0 * kPi * k / nodes);
    }
    const double w_node = std::pow(1.0 / nodes, static_cast<double>(outer));

    std::vector<int> pos(outer, 0);
    while (true) {
        double c = 0.0;
        for (std::size_t j = 0; j < outer; ++j) {
            c += absz[idx[j]] * cosines[pos[j]];
        }
        const auto m = inner_marginal_partials(c, absz[ia]);
        out.value += w_node * m.value;
        out.gradient[ia] += w_node * m.da;
        for (std::size_t j = 0; j < outer; ++j) {
            out.gradient[idx[j]] += w_node * m.dc * cosines[pos[j]];
        }
        std::size_t k = 0;
        while (k < outer && pos[k] == nodes - 1) {
            pos[k] = 0;
            ++k;
        }
        if (k == outer) {
            break;
        }
        ++pos[k];
    }
    return out;
}

SupportValue evaluate(const Vector& z, const QuadratureSpec& q, bool force_quadrature) {
    q.validate();
    if (z.size() == 0) {
        throw ValidationError("support function needs a nonempty z");
    }
    if (!z.allFinite()) {
        throw ValidationError("support function argument must be finite");
    }
    const Vector absz = z.cwiseAbs();
    SupportValue out;
    if (z.size() == 1 && !force_quadrature) {
        out.value = kTwoOverPi * absz[0];
        out.gradient = Vector::Constant(1, kTwoOverPi);
    } else if (q.scheme == QuadratureScheme::UniformAngle && z.size() > 1) {
        out = uniform_path(absz, q);
    } else {
        out = chebyshev_path(absz, q);
    }
    // H is even in every coordinate, so the gradient is odd.
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        out.gradient[i] *= sign_of(z[i]);
    }
    return out;
}

}  // namespace

std::string to_string(QuadratureScheme scheme) {
    return scheme == QuadratureScheme::ChebyshevGauss ? "chebyshev-gauss" : "uniform-angle";
}

QuadratureScheme scheme_from_string(const std::string& name) {
    if (name == "chebyshev-gauss") {
        return QuadratureScheme::ChebyshevGauss;
    }
    if (name == "uniform-angle") {
        return QuadratureScheme::UniformAngle;
    }
    throw ValidationError("unknown quadrature scheme '" + name +
                          "' (expected chebyshev-gauss or uniform-angle)");
}

void QuadratureSpec::validate() const {
    if (nodes_per_axis < 2) {
        throw ValidationError("quadrature nodes_per_axis must be >= 2");
    }
}

MarginalPartials inner_marginal_partials(double c, double a) {
    const double ac = std::abs(c);
    if (ac >= a) {
        return {ac, sign_of(c), 0.0};
    }
    // |c| < a: the integrand changes sign at cos(phi) = -c/a, i.e. phi = +-beta.
    const double r = c / a;
    const double beta = std::acos(-r);
    const double sin_beta = std::sqrt((1.0 - r) * (1.0 + r));
    return {kTwoOverPi * (c * beta + a * sin_beta) - c, kTwoOverPi * beta - 1.0,
            kTwoOverPi * sin_beta};
}

double inner_marginal(double c, double a) {
    if (a < 0.0) {
        throw ValidationError("inner_marginal requires a >= 0");
    }
    return inner_marginal_partials(c, a).value;
}

SupportValue h_value_grad(const Vector& z, const QuadratureSpec& q) { return evaluate(z, q, false); }

SupportValue h_value_grad_quadrature(const Vector& z, const QuadratureSpec& q) {
    return evaluate(z, q, true);
}

SupportValue h_eval(const Vector& z, const QuadratureSpec& q) {
    SupportValue out = evaluate(z, q, false);
    if (z.size() > 1) {
        QuadratureSpec finer = q;
        finer.nodes_per_axis = q.nodes_per_axis + (q.nodes_per_axis + 1) / 2;
        out.estimated_error = std::abs(evaluate(z, finer, false).value - out.value);
    }
    return out;
}

Vector h_grad(const Vector& z, const QuadratureSpec& q) {
    if (z.size() > 0 && z.isZero(0.0)) {
        throw ValidationError("gradient of the support function is undefined at z = 0");
    }
    return evaluate(z, q, false).gradient;
}

MomentumSupport H_of_p(const OscillatorSystem& sys, const Momentum& p, const QuadratureSpec& q) {
    const Vector z = z_map(sys, p);
    const SupportValue sv = h_eval(z, q);
    MomentumSupport out;
    out.value = sv.value;
    out.estimated_error = sv.estimated_error;
    out.gradient = Vector::Zero(sys.dim());
    out.degenerate.assign(sys.size(), false);
    for (std::size_t i = 0; i < sys.size(); ++i) {
        if (z[i] == 0.0) {
            out.degenerate[i] = true;
            continue;
        }
        const double w = sys.omega(i);
        out.gradient[2 * i] = sv.gradient[i] * p.xi(i) / (w * w * z[i]);
        out.gradient[2 * i + 1] = sv.gradient[i] * p.eta(i) / z[i];
    }
    return out;
}

namespace {

/// f(s) = <B, exp(A^T s) p> = sum eta_i cos(w_i s) + xi_i / w_i sin(w_i s).
struct SwitchingSignal {
    const OscillatorSystem& sys;
    const Momentum& p;

    double value(double s) const {
        double f = 0.0;
        for (std::size_t i = 0; i < sys.size(); ++i) {
            const double w = sys.omega(i);
            f += p.eta(i) * std::cos(w * s) + p.xi(i) / w * std::sin(w * s);
        }
        return f;
    }
    double slope(double s) const {
        double f = 0.0;
        for (std::size_t i = 0; i < sys.size(); ++i) {
            const double w = sys.omega(i);
            f += -p.eta(i) * w * std::sin(w * s) + p.xi(i) * std::cos(w * s);
        }
        return f;
    }
};

template <class G>
double bisect(const G& g, double lo, double hi) {
    double glo = g(lo);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if ((gm > 0.0) == (glo > 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double reachable_support_rate(const OscillatorSystem& sys, const Momentum& p, double horizon) {
    if (!(horizon > 0.0)) {
        throw ValidationError("reachable_support_rate requires T > 0");
    }
    if (p.size() != sys.size()) {
        throw ValidationError("momentum dimension does not match the system");
    }
    const SwitchingSignal sig{sys, p};
    const auto& gl = detail::gauss_legendre(8);
    auto integrate_abs = [&](double lo, double hi) {
        double acc = 0.0;
        for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
            acc += gl.weights[j] * std::abs(sig.value(lo + (hi - lo) * gl.nodes[j]));
        }
        return acc * (hi - lo);
    };

    const double cell = std::numbers::pi / (8.0 * sys.max_omega());
    const auto cells = static_cast<long>(std::ceil(horizon / cell));
    const double h = horizon / static_cast<double>(cells);
    auto fval = [&](double s) { return sig.value(s); };
    auto fslope = [&](double s) { return sig.slope(s); };

    double total = 0.0;
    for (long k = 0; k < cells; ++k) {
        const double lo = h * static_cast<double>(k);
        const double hi = k + 1 == cells ? horizon : lo + h;
        const double flo = sig.value(lo);
        const double fhi = sig.value(hi);
        double cuts[3];
        int ncut = 0;
        if ((flo > 0.0) != (fhi > 0.0) && flo != 0.0 && fhi != 0.0) {
            cuts[ncut++] = bisect(fval, lo, hi);
        } else {
            // Same sign at both ends: look for a hidden pair of roots around an extremum.
            const double dlo = sig.slope(lo);
            const double dhi = sig.slope(hi);
            if ((dlo > 0.0) != (dhi > 0.0) && dlo != 0.0 && dhi != 0.0) {
                const double ext = bisect(fslope, lo, hi);
                const double fext = sig.value(ext);
                if (fext != 0.0 && (fext > 0.0) != (flo > 0.0)) {
                    cuts[ncut++] = bisect(fval, lo, ext);
                    cuts[ncut++] = bisect(fval, ext, hi);
                }
            }
        }
        double a = lo;
        for (int c = 0; c < ncut; ++c) {
            total += integrate_abs(a, cuts[c]);
            a = cuts[c];
        }
        total += integrate_abs(a, hi);
    }
    return total / horizon;
}

}  // namespace genfric
