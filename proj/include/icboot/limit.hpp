#pragma once

// Scale constants of the cube-root limits and Monte Carlo draws of Chernoff's
// distribution, the law of argmin_h {Z(h) + h^2} for two-sided Brownian motion Z.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "icboot/error.hpp"
#include "icboot/parallel.hpp"
#include "icboot/random.hpp"

namespace icboot {

// [4 F(t0)(1 - F(t0)) f(t0) / g(t0)]^{1/3}
inline double kappa_cs(double F0, double f0, double g0) {
    if (!(F0 > 0.0 && F0 < 1.0)) throw InputError("F(t0) must lie in (0, 1)");
    if (!(f0 > 0.0) || !(g0 > 0.0)) throw InputError("densities must be positive");
    return std::cbrt(4.0 * F0 * (1.0 - F0) * f0 / g0);
}

// [(3/4) f(t0)^2 / h(t0, t0)]^{1/3}
inline double kappa_case2(double f0, double h00) {
    if (!(f0 > 0.0) || !(h00 > 0.0)) throw InputError("kappa_case2 arguments must be positive");
    return std::cbrt(0.75 * f0 * f0 / h00);
}

struct ChernoffConfig {
    double half_width = 4.0;
    double dt = 1e-3;
    std::size_t replicates = 10000;
    std::uint64_t seed = 1;

    std::size_t steps() const { return static_cast<std::size_t>(std::llround(half_width / dt)); }

    void validate() const {
        if (!(half_width > 0.0) || !(dt > 0.0)) throw InputError("Chernoff grid needs positive half-width and step");
        if (replicates < 1) throw InputError("Chernoff simulation needs at least one replicate");
        if (half_width / dt > 1e7) throw InputError("Chernoff grid exceeds 1e7 steps per side");
    }
};

// One draw: both half-paths on the grid k*dt, k = 0..N, minimum of Z(h) + h^2.
// Scanning outward with a strict comparison keeps the smaller |h| on ties.
inline double chernoff_draw(Stream& rng, std::size_t steps, double dt) {
    const double sd = std::sqrt(dt);
    double best_val = 0.0, best_h = 0.0;
    double right = 0.0, left = 0.0;
    for (std::size_t k = 1; k <= steps; ++k) {
        const double h = static_cast<double>(k) * dt;
        const double drift = h * h;
        right += sd * rng.normal();
        left += sd * rng.normal();
        if (right + drift < best_val) {
            best_val = right + drift;
            best_h = h;
        }
        if (left + drift < best_val) {
            best_val = left + drift;
            best_h = -h;
        }
    }
    return best_h;
}

inline std::vector<double> simulate_chernoff(const ChernoffConfig& cfg) {
    cfg.validate();
    const std::size_t steps = cfg.steps();
    std::vector<double> out(cfg.replicates);
    parallel_for(cfg.replicates, [&](std::size_t r) {
        Stream rng = Stream::derive(cfg.seed, {0x43686572ULL, static_cast<std::uint64_t>(r)});
        out[r] = chernoff_draw(rng, steps, cfg.dt);
    });
    return out;
}

}  // namespace icboot
