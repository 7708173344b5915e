#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <vector>

namespace genfric {

using Vector = Eigen::VectorXd;

/// N linear oscillators driven by one common scalar control:
///   x_i' = y_i,  y_i' = -omega_i^2 x_i + u,  |u| <= 1.
/// The block matrices A = diag([[0,1],[-omega_i^2,0]]) and B = (0,1,0,1,...)
/// are never materialized; operations act on the 2x2 blocks directly.
class OscillatorSystem {
  public:
    explicit OscillatorSystem(std::vector<double> omegas);

    std::size_t size() const { return omegas_.size(); }
    std::size_t dim() const { return 2 * omegas_.size(); }
    double omega(std::size_t i) const { return omegas_[i]; }
    const std::vector<double>& omegas() const { return omegas_; }
    double max_omega() const;
    double min_omega() const;

  private:
    std::vector<double> omegas_;
};

/// Phase point (x_1, y_1, ..., x_N, y_N).
class State {
  public:
    State() = default;
    explicit State(Vector flat);
    static State zeros(std::size_t n) { return State(Vector::Zero(2 * n)); }

    std::size_t size() const { return static_cast<std::size_t>(flat_.size()) / 2; }
    double x(std::size_t i) const { return flat_[2 * i]; }
    double y(std::size_t i) const { return flat_[2 * i + 1]; }
    double& x(std::size_t i) { return flat_[2 * i]; }
    double& y(std::size_t i) { return flat_[2 * i + 1]; }
    const Vector& flat() const { return flat_; }
    Vector& flat() { return flat_; }
    bool is_zero() const { return flat_.isZero(0.0); }

  private:
    Vector flat_;
};

/// Costate (xi_1, eta_1, ..., xi_N, eta_N); xi_i is dual to x_i, eta_i to y_i.
class Momentum {
  public:
    Momentum() = default;
    explicit Momentum(Vector flat);

    std::size_t size() const { return static_cast<std::size_t>(flat_.size()) / 2; }
    double xi(std::size_t i) const { return flat_[2 * i]; }
    double eta(std::size_t i) const { return flat_[2 * i + 1]; }
    double& xi(std::size_t i) { return flat_[2 * i]; }
    double& eta(std::size_t i) { return flat_[2 * i + 1]; }
    const Vector& flat() const { return flat_; }
    Vector& flat() { return flat_; }

  private:
    Vector flat_;
};

/// Ax for the uncontrolled part of the motion: pairs (y_i, -omega_i^2 x_i).
Vector drift(const OscillatorSystem& sys, const State& s);

/// Reduced coordinates z_i = sqrt(eta_i^2 + xi_i^2 / omega_i^2).
Vector z_map(const OscillatorSystem& sys, const Momentum& p);

/// 1/2 sum(y_i^2 + omega_i^2 x_i^2).
double energy(const OscillatorSystem& sys, const State& s);

/// exp(A t) s, block-wise closed form.
State propagate_free(const OscillatorSystem& sys, const State& s, double t);

/// exp(A^T t) p, block-wise closed form.
Momentum propagate_costate(const OscillatorSystem& sys, const Momentum& p, double t);

struct ResonanceReport {
    bool resonant = false;
    /// Every integer relation found, normalized so the first nonzero entry is positive.
    std::vector<std::vector<std::int64_t>> witnesses;
    std::int64_t bound = 0;
    double tolerance = 0.0;

    /// Witnesses whose entries are coprime, ordered by max-norm then lexicographically.
    std::vector<std::vector<std::int64_t>> minimal_witnesses() const;
};

struct ResonanceOptions {
    std::int64_t bound = 10;
    /// <= 0 selects the default 1e-9 * max(omega) * bound.
    double tolerance = 0.0;
    /// Upper limit on N * ln(2M + 1), i.e. on the log of the lattice size.
    double log_search_cap = 20.0;
};

/// Exhaustive search for nonzero m in Z^N, |m|_inf <= M, with |sum m_i omega_i| <= tol.
ResonanceReport detect_resonance(const OscillatorSystem& sys, const ResonanceOptions& opts = {});

}  // namespace genfric
