#include "quadrature.hpp"

#include <numbers>
#include <unordered_map>

namespace genfric::detail {

namespace {

GaussLegendre build_gauss_legendre(int n) {
    GaussLegendre rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Newton iteration on P_n from the usual cosine initial guess.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        rule.nodes[i] = 0.5 * (1.0 - x);
        rule.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

constexpr double kMinSeparation = 0.1;

/// Appends cuts in (lo, hi] refining [lo, hi] until no singular point sits
/// within kMinSeparation panel lengths outside a panel.
void refine(double lo, double hi, std::span<const double> singular, std::vector<double>& out,
            int depth) {
    double nearest = INFINITY;
    double where = 0.0;
    for (double s : singular) {
        if (s > lo && s < hi) {
            continue;  // interior points were turned into cuts already
        }
        const double d = s <= lo ? lo - s : s - hi;
        if (d > 0.0 && d < nearest) {
            nearest = d;
            where = s;
        }
    }
    const double len = hi - lo;
    if (depth > 60 || !(nearest < kMinSeparation * len)) {
        out.push_back(hi);
        return;
    }
    // Split off a sub-panel next to the singular point whose length equals its distance.
    const double step = std::min(nearest / kMinSeparation * 0.5, 0.5 * len);
    if (where <= lo) {
        const double mid = lo + step;
        refine(lo, mid, singular, out, depth + 1);
        refine(mid, hi, singular, out, depth + 1);
    } else {
        const double mid = hi - step;
        refine(lo, mid, singular, out, depth + 1);
        refine(mid, hi, singular, out, depth + 1);
    }
}

}  // namespace

const GaussLegendre& gauss_legendre(int n) {
    thread_local std::unordered_map<int, GaussLegendre> cache;
    auto it = cache.find(n);
    if (it == cache.end()) {
        it = cache.emplace(n, build_gauss_legendre(n)).first;
    }
    return it->second;
}

void graded_panels(std::span<const double> singular, std::vector<double>& cuts) {
    double points[10];
    std::size_t np = 0;
    points[np++] = -1.0;
    points[np++] = 1.0;
    for (double s : singular) {
        if (np < 10) {
            points[np++] = s;
        }
    }
    const std::span<const double> all(points, np);

    double base[10];
    std::size_t nb = 0;
    for (double s : all) {
        if (s >= -1.0 && s <= 1.0) {
            base[nb++] = s;
        }
    }
    std::sort(base, base + nb);
    nb = static_cast<std::size_t>(std::unique(base, base + nb) - base);

    cuts.clear();
    cuts.push_back(base[0]);
    for (std::size_t k = 0; k + 1 < nb; ++k) {
        refine(base[k], base[k + 1], all, cuts, 0);
    }
}

}  // namespace genfric::detail
