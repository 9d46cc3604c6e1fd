#pragma once

// Phase schedules for fixed-point amplitude amplification. Unlike the
// classic iteration, the fixed-point variant never overshoots: once the
// initial success probability clears the schedule's convergence floor,
// more rounds only push the failure weight below delta^2 and keep it
// there. The price is a pair of tuned phases per round instead of plain
// pi reflections.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace qex::amplify {

struct AmplifyError : std::runtime_error {
    explicit AmplifyError(const std::string& msg) : std::runtime_error(msg) {}
};

inline void check_delta(double delta) {
    if (!(delta > 0.0) || !(delta < 1.0)) throw AmplifyError("delta must lie in (0,1)");
}

// Residual amplitude bound when a miss tolerance of delta is spread over
// the 2L+1 Chebyshev orders of an L-round schedule.
inline double gamma_for(double delta, int rounds) {
    check_delta(delta);
    if (rounds < 0) throw AmplifyError("round count cannot be negative");
    return 1.0 / std::cosh(std::acosh(1.0 / delta) / (2 * rounds + 1));
}

// Smallest round count whose convergence floor 1 - gamma^2 sits at or
// below the initial success probability p0.
inline int required_rounds(double p0, double delta) {
    check_delta(delta);
    if (!(p0 > 0.0)) throw AmplifyError("cannot amplify from zero success probability");
    for (int rounds = 0;; ++rounds) {
        const double g = gamma_for(delta, rounds);
        if (1.0 - g * g <= p0) return rounds;
        if (rounds > 1'000'000)
            throw AmplifyError("round count diverged; p0 is too small to schedule");
    }
}

struct Schedule {
    int rounds = 0;
    double delta = 0.0;
    double gamma = 0.0;
    std::vector<double> beta;   // phase on the marked subspace, one per round
    std::vector<double> alpha;  // phase on the source state, one per round
};

// Round j applies e^{i beta_j} to the marked subspace first, then
// e^{i alpha_j} along the source state; beta is the alpha sequence run
// backwards. acot is taken on its continuous (0,pi) branch so the
// schedule has no jumps when the tangent argument crosses a pole.
inline Schedule fixed_point_schedule(int rounds, double delta) {
    Schedule s;
    s.rounds = rounds;
    s.delta = delta;
    s.gamma = gamma_for(delta, rounds);
    const double spread = std::sqrt(1.0 - s.gamma * s.gamma);
    const auto acot = [](double x) { return std::numbers::pi / 2.0 - std::atan(x); };
    s.beta.resize(static_cast<std::size_t>(rounds));
    s.alpha.resize(static_cast<std::size_t>(rounds));
    for (int j = 1; j <= rounds; ++j) {
        const double t = std::tan(2.0 * std::numbers::pi * j / (2.0 * rounds + 1.0));
        s.alpha[static_cast<std::size_t>(j - 1)] = 2.0 * acot(t * spread);
    }
    for (int j = 1; j <= rounds; ++j)
        s.beta[static_cast<std::size_t>(j - 1)] = s.alpha[static_cast<std::size_t>(rounds - j)];
    return s;
}

// Classic amplification round count for M marked among N, for comparison.
inline std::uint64_t grover_iterations(std::uint64_t n, std::uint64_t m) {
    if (m == 0) throw AmplifyError("no marked states to iterate towards");
    if (m > n) throw AmplifyError("marked count exceeds the search space");
    return static_cast<std::uint64_t>(
        std::floor(std::numbers::pi / 4.0 * std::sqrt(static_cast<double>(n) / static_cast<double>(m))));
}

}  // namespace qex::amplify
