#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oracle {

namespace {
constexpr double kPi = std::numbers::pi;
}

double marginal_trapezoid(double c, double a, long n) {
    double sum = 0.0;
    for (long k = 0; k < n; ++k) {
        const double phi = 2.0 * kPi * (static_cast<double>(k) + 0.5) / static_cast<double>(n);
        sum += std::abs(c + a * std::cos(phi));
    }
    return sum / static_cast<double>(n);
}

double support_bruteforce(const Vector& z, long n) {
    const auto dims = static_cast<std::size_t>(z.size());
    std::vector<double> cosines(static_cast<std::size_t>(n));
    for (long k = 0; k < n; ++k) {
        cosines[static_cast<std::size_t>(k)] =
            std::cos(2.0 * kPi * (static_cast<double>(k) + 0.5) / static_cast<double>(n));
    }
    // Recursive sum over all but the last angle; the last is a plain loop.
    std::function<double(std::size_t, double)> rec = [&](std::size_t d, double partial) -> double {
        double s = 0.0;
        if (d + 1 == dims) {
            for (double c : cosines) {
                s += std::abs(partial + z[static_cast<Eigen::Index>(d)] * c);
            }
            return s / static_cast<double>(n);
        }
        for (double c : cosines) {
            s += rec(d + 1, partial + z[static_cast<Eigen::Index>(d)] * c);
        }
        return s / static_cast<double>(n);
    };
    return rec(0, 0.0);
}

double rho_single_scan(double omega, double x, double y, long directions) {
    double best = 0.0;
    for (long k = 0; k < directions; ++k) {
        const double th = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(directions);
        const double xi = std::cos(th);
        const double eta = std::sin(th);
        const double z = std::sqrt(eta * eta + xi * xi / (omega * omega));
        best = std::max(best, (x * xi + y * eta) / (2.0 / kPi * z));
    }
    return best;
}

DualResult dual_projected_gradient(const Vector& r, const SupportFn& support, double tol, int max_iter) {
    const auto n = r.size();
    auto project = [&](Vector z) {
        // Euclidean projection onto {z >= 0, sum z = 1}.
        Vector u = z;
        std::sort(u.data(), u.data() + n, std::greater<>());
        double cum = 0.0;
        double theta = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
            cum += u[k];
            const double t = (cum - 1.0) / static_cast<double>(k + 1);
            if (u[k] - t > 0.0) {
                theta = t;
            }
        }
        return Vector((z.array() - theta).max(0.0));
    };
    auto objective = [&](const Vector& z) { return r.dot(z) / support.value(z); };

    Vector z = project(r / r.sum());
    double f = objective(z);
    double step = 1.0;
    for (int it = 0; it < max_iter; ++it) {
        const double h = support.value(z);
        const Vector g = (r * h - r.dot(z) * support.gradient(z)) / (h * h);
        bool moved = false;
        while (step > 1e-18) {
            const Vector cand = project(z + step * g);
            const double fc = objective(cand);
            if (fc > f) {
                const double gain = fc - f;
                z = cand;
                f = fc;
                moved = true;
                step *= 2.0;
                if (gain <= tol * f) {
                    it = max_iter;
                }
                break;
            }
            step *= 0.5;
        }
        if (!moved) {
            break;
        }
    }
    return {f, z / support.value(z)};
}

Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x, double h) {
    Vector g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        Vector a = x;
        Vector b = x;
        a[i] += h;
        b[i] -= h;
        g[i] = (f(a) - f(b)) / (2.0 * h);
    }
    return g;
}

DryFriction::DryFriction(double x0, double y0, double amplitude) {
    double t = 0.0;
    double x = x0;
    double y = y0;
    for (int guard = 0; guard < 10000; ++guard) {
        if (y == 0.0 && std::abs(x) <= amplitude) {
            stick_x_ = x;
            stick_t_ = t;
            return;
        }
        // Direction of motion: sign of y, or of the restoring force when at rest.
        const double s = y != 0.0 ? (y > 0.0 ? 1.0 : -1.0) : (x > 0.0 ? -1.0 : 1.0);
        const double centre = -s * amplitude;
        arcs_.push_back({t, x, y, centre});
        // y(tau) = -(x - c) sin tau + y cos tau; the arc ends at the first tau > 0 with y = 0.
        const double dx = x - centre;
        double tau = std::atan2(y, dx);
        if (tau <= 0.0) {
            tau += kPi;
        }
        if (y == 0.0) {
            tau = kPi;
        }
        const double xe = centre + dx * std::cos(tau) + y * std::sin(tau);
        t += tau;
        switches_.push_back(t);
        x = xe;
        y = 0.0;
    }
    throw std::runtime_error("dry friction oracle did not come to rest");
}

std::pair<double, double> DryFriction::at(double t) const {
    if (t >= stick_t_) {
        return {stick_x_, 0.0};
    }
    const Arc* arc = &arcs_.front();
    for (const auto& a : arcs_) {
        if (a.t0 <= t) {
            arc = &a;
        }
    }
    const double tau = t - arc->t0;
    const double dx = arc->x0 - arc->centre;
    return {arc->centre + dx * std::cos(tau) + arc->y0 * std::sin(tau), -dx * std::sin(tau) + arc->y0 * std::cos(tau)};
}

std::vector<std::vector<std::int64_t>> resonance_enumerate(const std::vector<double>& omegas, std::int64_t bound,
                                                           double tol) {
    std::vector<std::vector<std::int64_t>> out;
    std::vector<std::int64_t> m(omegas.size(), -bound);
    while (true) {
        auto first = std::find_if(m.begin(), m.end(), [](std::int64_t v) { return v != 0; });
        if (first != m.end() && *first > 0) {
            double s = 0.0;
            for (std::size_t i = 0; i < m.size(); ++i) {
                s += static_cast<double>(m[i]) * omegas[i];
            }
            if (std::abs(s) <= tol) {
                out.push_back(m);
            }
        }
        std::size_t k = 0;
        while (k < m.size() && m[k] == bound) {
            m[k] = -bound;
            ++k;
        }
        if (k == m.size()) {
            break;
        }
        ++m[k];
    }
    return out;
}

}  // namespace oracle
