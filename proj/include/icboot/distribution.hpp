#pragma once

// Step and kernel-smoothed distribution functions.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "icboot/error.hpp"

namespace icboot {

template <class D>
concept EvaluableDistribution = requires(const D& d, double t) {
    { d(t) } -> std::convertible_to<double>;
};

struct Jump {
    double s;
    double p;
};

// Right-continuous nondecreasing step function; value at t is the total mass
// at jump points <= t. Total mass may fall short of 1 (unassigned tail).
class StepDistribution {
public:
    StepDistribution() = default;

    explicit StepDistribution(std::vector<Jump> jumps) : jumps_(std::move(jumps)) {
        cumulative_.reserve(jumps_.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < jumps_.size(); ++i) {
            if (!(jumps_[i].p > 0.0)) throw InputError("step distribution masses must be positive");
            if (i > 0 && !(jumps_[i].s > jumps_[i - 1].s)) {
                throw InputError("step distribution jump points must be strictly increasing");
            }
            acc += jumps_[i].p;
            cumulative_.push_back(acc);
        }
        if (acc > 1.0 + 1e-9) throw InputError("step distribution total mass exceeds 1");
    }

    // Step function through (times[i], values[i]); values are clamped to [0,1]
    // and must be nondecreasing. Equal consecutive values produce no jump.
    static StepDistribution from_values(std::span<const double> times, std::span<const double> values) {
        if (times.size() != values.size()) throw InputError("times and values differ in length");
        std::vector<Jump> jumps;
        double prev = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            double v = std::clamp(values[i], 0.0, 1.0);
            if (v < prev - 1e-12) throw InputError("step values must be nondecreasing");
            if (v > prev) {
                jumps.push_back({times[i], v - prev});
                prev = v;
            }
        }
        return StepDistribution(std::move(jumps));
    }

    double operator()(double t) const noexcept {
        auto it = std::upper_bound(jumps_.begin(), jumps_.end(), t,
                                   [](double x, const Jump& j) { return x < j.s; });
        if (it == jumps_.begin()) return 0.0;
        return std::min(cumulative_[static_cast<std::size_t>(it - jumps_.begin()) - 1], 1.0);
    }

    std::span<const Jump> jumps() const noexcept { return jumps_; }
    double total_mass() const noexcept { return cumulative_.empty() ? 0.0 : cumulative_.back(); }

private:
    std::vector<Jump> jumps_;
    std::vector<double> cumulative_;
};

// Biweight kernel K(t) = (15/16)(1 - t^2)^2 on [-1, 1].
struct SmoothKernel {
    static double density(double u) noexcept {
        if (u <= -1.0 || u >= 1.0) return 0.0;
        double a = 1.0 - u * u;
        return 15.0 / 16.0 * a * a;
    }

    static double cdf(double u) noexcept {
        if (u <= -1.0) return 0.0;
        if (u >= 1.0) return 1.0;
        double u2 = u * u;
        return 15.0 / 16.0 * (u - 2.0 * u * u2 / 3.0 + u * u2 * u2 / 5.0 + 8.0 / 15.0);
    }
};

inline double kernel_cdf(double u) noexcept { return SmoothKernel::cdf(u); }

// Kernel-smoothed step function: sum_j p_j Kbar((t - s_j) / h). No boundary
// correction at 0.
class SmoothedDistribution {
public:
    SmoothedDistribution(StepDistribution base, double bandwidth)
        : base_(std::move(base)), h_(bandwidth) {
        if (!(h_ > 0.0) || !std::isfinite(h_)) throw InputError("bandwidth must be positive and finite");
    }

    double operator()(double t) const noexcept {
        auto jumps = base_.jumps();
        // only jumps with s > t - h contribute less than their full mass
        auto lo = std::lower_bound(jumps.begin(), jumps.end(), t - h_,
                                   [](const Jump& j, double x) { return j.s <= x; });
        double full = lo == jumps.begin() ? 0.0 : base_(std::prev(lo)->s);
        double acc = full;
        for (auto it = lo; it != jumps.end() && it->s < t + h_; ++it) {
            acc += it->p * SmoothKernel::cdf((t - it->s) / h_);
        }
        return std::clamp(acc, 0.0, 1.0);
    }

    // Derivative in t: sum_j p_j K_h(t - s_j).
    double density(double t) const noexcept {
        double acc = 0.0;
        for (const auto& j : base_.jumps()) acc += j.p * SmoothKernel::density((t - j.s) / h_) / h_;
        return acc;
    }

    const StepDistribution& base() const noexcept { return base_; }
    double bandwidth() const noexcept { return h_; }

private:
    StepDistribution base_;
    double h_;
};

inline double smle_eval(const SmoothedDistribution& dist, double t) noexcept { return dist(t); }

// Either estimator can serve as a bootstrap source.
class SourceDistribution {
public:
    SourceDistribution(StepDistribution d) : impl_(std::move(d)) {}
    SourceDistribution(SmoothedDistribution d) : impl_(std::move(d)) {}

    double operator()(double t) const {
        return std::visit([t](const auto& d) { return d(t); }, impl_);
    }

private:
    std::variant<StepDistribution, SmoothedDistribution> impl_;
};

// sup over a 201-point grid on [-1,1] of n^{1/3}|F(t0 + n^{-1/3}u) - F(t0) - f0 n^{-1/3} u|.
// Near zero for smooth estimators, bounded away from zero at a jump.
template <EvaluableDistribution D>
double check_local_linearity(const D& dist, double t0, double f0, long n) {
    if (!(f0 > 0.0)) throw InputError("density value must be positive");
    if (n < 1) throw InputError("sample size must be positive");
    const double scale = std::cbrt(static_cast<double>(n));
    const double base = dist(t0);
    double worst = 0.0;
    for (int i = 0; i <= 200; ++i) {
        double u = -1.0 + i / 100.0;
        double dev = dist(t0 + u / scale) - base - f0 * u / scale;
        worst = std::max(worst, scale * std::abs(dev));
    }
    return worst;
}

}  // namespace icboot
