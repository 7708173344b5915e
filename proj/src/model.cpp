#include "genfric/model.hpp"

#include "genfric/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace genfric {

OscillatorSystem::OscillatorSystem(std::vector<double> omegas) : omegas_(std::move(omegas)) {
    if (omegas_.empty()) {
        throw ValidationError("oscillator system needs at least one frequency");
    }
    for (std::size_t i = 0; i < omegas_.size(); ++i) {
        if (!(omegas_[i] > 0.0) || !std::isfinite(omegas_[i])) {
            throw ValidationError("frequency omega_" + std::to_string(i + 1) +
                                  " must be finite and > 0");
        }
    }
}

double OscillatorSystem::max_omega() const {
    return *std::max_element(omegas_.begin(), omegas_.end());
}

double OscillatorSystem::min_omega() const {
    return *std::min_element(omegas_.begin(), omegas_.end());
}

State::State(Vector flat) : flat_(std::move(flat)) {
    if (flat_.size() % 2 != 0) {
        throw ValidationError("state vector must have even length");
    }
    if (!flat_.allFinite()) {
        throw ValidationError("state entries must be finite");
    }
}

Momentum::Momentum(Vector flat) : flat_(std::move(flat)) {
    if (flat_.size() % 2 != 0) {
        throw ValidationError("momentum vector must have even length");
    }
    if (!flat_.allFinite()) {
        throw ValidationError("momentum entries must be finite");
    }
}

namespace {

void check_dim(const OscillatorSystem& sys, std::size_t n, const char* what) {
    if (n != sys.size()) {
        throw ValidationError(std::string(what) + " has " + std::to_string(n) +
                              " oscillator blocks, system has " + std::to_string(sys.size()));
    }
}

}  // namespace

Vector drift(const OscillatorSystem& sys, const State& s) {
    check_dim(sys, s.size(), "state");
    Vector out(sys.dim());
    for (std::size_t i = 0; i < sys.size(); ++i) {
        const double w = sys.omega(i);
        out[2 * i] = s.y(i);
        out[2 * i + 1] = -w * w * s.x(i);
    }
    return out;
}

Vector z_map(const OscillatorSystem& sys, const Momentum& p) {
    check_dim(sys, p.size(), "momentum");
    Vector z(sys.size());
    for (std::size_t i = 0; i < sys.size(); ++i) {
        z[i] = std::hypot(p.eta(i), p.xi(i) / sys.omega(i));
    }
    return z;
}

double energy(const OscillatorSystem& sys, const State& s) {
    check_dim(sys, s.size(), "state");
    double e = 0.0;
    for (std::size_t i = 0; i < sys.size(); ++i) {
        const double w = sys.omega(i);
        e += s.y(i) * s.y(i) + w * w * s.x(i) * s.x(i);
    }
    return 0.5 * e;
}

State propagate_free(const OscillatorSystem& sys, const State& s, double t) {
    check_dim(sys, s.size(), "state");
    State out = s;
    for (std::size_t i = 0; i < sys.size(); ++i) {
        const double w = sys.omega(i);
        const double c = std::cos(w * t);
        const double sn = std::sin(w * t);
        out.x(i) = s.x(i) * c + s.y(i) / w * sn;
        out.y(i) = -s.x(i) * w * sn + s.y(i) * c;
    }
    return out;
}

Momentum propagate_costate(const OscillatorSystem& sys, const Momentum& p, double t) {
    check_dim(sys, p.size(), "momentum");
    Momentum out = p;
    for (std::size_t i = 0; i < sys.size(); ++i) {
        const double w = sys.omega(i);
        const double c = std::cos(w * t);
        const double sn = std::sin(w * t);
        out.xi(i) = p.xi(i) * c - p.eta(i) * w * sn;
        out.eta(i) = p.eta(i) * c + p.xi(i) / w * sn;
    }
    return out;
}

std::vector<std::vector<std::int64_t>> ResonanceReport::minimal_witnesses() const {
    std::vector<std::vector<std::int64_t>> out;
    for (const auto& m : witnesses) {
        std::int64_t g = 0;
        for (auto v : m) {
            g = std::gcd(g, v < 0 ? -v : v);
        }
        if (g == 1) {
            out.push_back(m);
        }
    }
    auto inf_norm = [](const std::vector<std::int64_t>& m) {
        std::int64_t r = 0;
        for (auto v : m) {
            r = std::max(r, v < 0 ? -v : v);
        }
        return r;
    };
    std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
        const auto na = inf_norm(a);
        const auto nb = inf_norm(b);
        if (na != nb) {
            return na < nb;
        }
        return a > b;
    });
    return out;
}

ResonanceReport detect_resonance(const OscillatorSystem& sys, const ResonanceOptions& opts) {
    if (opts.bound < 1) {
        throw ValidationError("resonance search bound must be >= 1");
    }
    const std::size_t n = sys.size();
    const double log_size = static_cast<double>(n) * std::log(2.0 * static_cast<double>(opts.bound) + 1.0);
    if (log_size > opts.log_search_cap) {
        throw ValidationError("resonance search space too large: N*ln(2M+1) = " +
                              std::to_string(log_size) + " exceeds cap " +
                              std::to_string(opts.log_search_cap));
    }

    ResonanceReport report;
    report.bound = opts.bound;
    report.tolerance = opts.tolerance > 0.0
                           ? opts.tolerance
                           : 1e-9 * sys.max_omega() * static_cast<double>(opts.bound);

    // Odometer over [-M, M]^N; keep only vectors whose first nonzero entry is positive.
    std::vector<std::int64_t> m(n, -opts.bound);
    while (true) {
        std::size_t first = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (m[i] != 0) {
                first = i;
                break;
            }
        }
        if (first < n && m[first] > 0) {
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                sum += static_cast<double>(m[i]) * sys.omega(i);
            }
            if (std::abs(sum) <= report.tolerance) {
                report.witnesses.push_back(m);
            }
        }
        std::size_t k = 0;
        while (k < n && m[k] == opts.bound) {
            m[k] = -opts.bound;
            ++k;
        }
        if (k == n) {
            break;
        }
        ++m[k];
    }
    std::sort(report.witnesses.begin(), report.witnesses.end());
    report.resonant = !report.witnesses.empty();
    return report;
}

}  // namespace genfric
