#pragma once

// Model-based bootstrap: examination times stay fixed, each subject's cell is
// redrawn from a fitted distribution (the NPMLE or its kernel-smoothed
// version), and the estimator is refitted.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "icboot/data.hpp"
#include "icboot/distribution.hpp"
#include "icboot/error.hpp"
#include "icboot/npmle.hpp"
#include "icboot/one_step.hpp"
#include "icboot/parallel.hpp"
#include "icboot/random.hpp"
#include "icboot/stats.hpp"

namespace icboot {

struct FromNpmle {
    friend bool operator==(const FromNpmle&, const FromNpmle&) = default;
};

struct FromSmle {
    double bandwidth;
    friend bool operator==(const FromSmle&, const FromSmle&) = default;
};

using BootstrapScheme = std::variant<FromNpmle, FromSmle>;

inline void validate(const BootstrapScheme& scheme) {
    if (const auto* s = std::get_if<FromSmle>(&scheme); s && !(s->bandwidth > 0.0 && std::isfinite(s->bandwidth))) {
        throw InputError("smoothed bootstrap bandwidth must be positive");
    }
}

// How replicates are refitted. current_status and mixed refit the NPMLE;
// case2 runs one ICM step started at the bootstrap source and scales roots by
// (n log n)^{1/3}.
enum class Design { current_status, case2, mixed };

inline double root_rate(Design design, std::size_t n) {
    const double nn = static_cast<double>(n);
    if (design == Design::case2) return std::cbrt(nn * std::log(nn));
    return std::cbrt(nn);
}

// Domains of the stream key path; keep distinct so different consumers never
// share numbers.
namespace stream_domain {
inline constexpr std::uint64_t roots = 1;
inline constexpr std::uint64_t bmse = 2;
inline constexpr std::uint64_t data = 3;
inline constexpr std::uint64_t nested_boot = 4;
inline constexpr std::uint64_t sequence = 5;
inline constexpr std::uint64_t figure = 6;
}  // namespace stream_domain

// Seed for a nested consumer (e.g. the bootstrap inside replicate r).
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    return Stream::derive(master, path)();
}

// ---------------------------------------------------------------------------
// Resampling one subject
// ---------------------------------------------------------------------------

// Cumulative cell probabilities for cells (T_{k-1}, T_k], k = 1..K+1, after
// clamping negative cells to zero. Last entry is the normalising total.
template <EvaluableDistribution D>
std::vector<double> cell_cumulative(std::span<const double> times, const D& source) {
    std::vector<double> cum;
    cum.reserve(times.size() + 1);
    double prev_f = 0.0, acc = 0.0;
    for (double t : times) {
        double f = source(t);
        acc += std::max(f - prev_f, 0.0);
        cum.push_back(acc);
        prev_f = std::max(prev_f, f);
    }
    acc += std::max(1.0 - prev_f, 0.0);
    cum.push_back(acc);
    if (!(acc > 0.0)) throw NumericalError("bootstrap source gives zero probability to every cell");
    return cum;
}

inline int draw_category(std::span<const double> cum, Stream& rng) {
    double u = rng.uniform() * cum.back();
    auto it = std::upper_bound(cum.begin(), cum.end(), u);
    if (it == cum.end()) {
        // u rounded up to the total: take the last cell of positive width
        it = std::prev(cum.end());
        while (it != cum.begin() && *it == *std::prev(it)) --it;
    }
    return static_cast<int>(it - cum.begin()) + 1;
}

template <EvaluableDistribution D>
int resample_subject(std::span<const double> times, const D& source, Stream& rng) {
    auto cum = cell_cumulative(times, source);
    return draw_category(cum, rng);
}

// ---------------------------------------------------------------------------
// Estimation on a fixed design
// ---------------------------------------------------------------------------

// Subjects (canonically ordered) plus the design-specific machinery to refit
// quickly for new categories.
class BootstrapDesign {
public:
    BootstrapDesign(MixedCaseSample subjects, Design design, IntervalNpmleOptions opts = {})
        : subjects_(canonical_order(std::move(subjects))), design_(design), opts_(opts) {
        if (subjects_.empty()) throw InputError("sample is empty");
        validate(subjects_);
        if (design_ == Design::current_status) {
            std::vector<double> times;
            for (const auto& s : subjects_) {
                if (s.times.size() != 1) throw InputError("current status design needs one examination per subject");
                times.push_back(s.times[0]);
            }
            cs_.emplace(times);
        }
    }

    const MixedCaseSample& subjects() const noexcept { return subjects_; }
    Design design() const noexcept { return design_; }
    std::size_t size() const noexcept { return subjects_.size(); }
    const IntervalNpmleOptions& options() const noexcept { return opts_; }

    std::vector<int> categories() const {
        std::vector<int> c;
        c.reserve(subjects_.size());
        for (const auto& s : subjects_) c.push_back(s.category);
        return c;
    }

    // NPMLE for the given categories (current status: GCM; otherwise ICM).
    StepDistribution npmle(const std::vector<int>& categories) const {
        if (cs_) {
            std::vector<char> delta(categories.size());
            for (std::size_t i = 0; i < categories.size(); ++i) delta[i] = categories[i] == 1;
            return cs_->fit(delta);
        }
        std::vector<CensoringInterval> iv;
        iv.reserve(subjects_.size());
        for (std::size_t i = 0; i < subjects_.size(); ++i) {
            MixedCaseSubject s{subjects_[i].times, categories[i]};
            iv.push_back(reduce_to_interval(s));
        }
        return npmle_interval_censored(iv, opts_).distribution();
    }

    StepDistribution npmle() const { return npmle(categories()); }

private:
    MixedCaseSample subjects_;
    Design design_;
    IntervalNpmleOptions opts_;
    std::optional<CurrentStatusDesign> cs_;
};

inline SourceDistribution make_source(const StepDistribution& npmle, const BootstrapScheme& scheme) {
    validate(scheme);
    if (const auto* s = std::get_if<FromSmle>(&scheme)) return SmoothedDistribution(npmle, s->bandwidth);
    return npmle;
}

struct BootstrapResult {
    std::vector<double> roots;     // successful replicates, in replicate order
    double source_center = 0.0;    // F_n(t0) of the bootstrap source
    double npmle_center = 0.0;     // NPMLE at t0 on the observed data
    double rate = 1.0;             // n^{1/3} or (n log n)^{1/3}
    int B = 0;
    std::uint64_t seed = 0;
    std::size_t failures = 0;
    std::size_t n = 0;
};

namespace detail {

// Runs fn(stream) for replicate b, retrying once on a numerical failure with a
// derived stream. Returns false if both attempts failed.
template <class Fn>
bool run_replicate(std::uint64_t seed, std::uint64_t domain, std::size_t b, Fn&& fn) {
    for (std::uint64_t attempt = 0; attempt < 2; ++attempt) {
        Stream rng = Stream::derive(seed, {domain, static_cast<std::uint64_t>(b), attempt});
        try {
            fn(rng);
            return true;
        } catch (const NumericalError&) {
        }
    }
    return false;
}

inline void check_failures(std::size_t failures, int B) {
    if (static_cast<double>(failures) > 0.01 * B) {
        throw NumericalError(std::to_string(failures) + " of " + std::to_string(B) +
                             " bootstrap replicates failed (limit 1%)");
    }
}

}  // namespace detail

// Redraws categories for all subjects (canonical order, one stream per
// replicate).
template <EvaluableDistribution D>
class CategorySampler {
public:
    CategorySampler(const MixedCaseSample& subjects, const D& source) {
        cells_.reserve(subjects.size());
        for (const auto& s : subjects) cells_.push_back(cell_cumulative(s.times, source));
    }

    std::vector<int> draw(Stream& rng) const {
        std::vector<int> c;
        c.reserve(cells_.size());
        for (const auto& cum : cells_) c.push_back(draw_category(cum, rng));
        return c;
    }

private:
    std::vector<std::vector<double>> cells_;
};

inline BootstrapResult bootstrap_roots(const BootstrapDesign& data, double t0, const BootstrapScheme& scheme, int B,
                                       std::uint64_t seed) {
    if (B < 1) throw InputError("number of bootstrap replicates must be positive");
    if (!std::isfinite(t0)) throw InputError("t0 must be finite");
    const auto npmle = data.npmle();
    const auto source = make_source(npmle, scheme);

    BootstrapResult res;
    res.B = B;
    res.seed = seed;
    res.n = data.size();
    res.npmle_center = npmle(t0);
    res.source_center = source(t0);
    res.rate = root_rate(data.design(), data.size());

    CategorySampler sampler(data.subjects(), source);
    std::optional<OneStepDesign> one_step;
    if (data.design() == Design::case2) one_step.emplace(data.subjects(), source);

    std::vector<double> roots(static_cast<std::size_t>(B));
    std::vector<char> ok(static_cast<std::size_t>(B), 0);
    parallel_for(static_cast<std::size_t>(B), [&](std::size_t b) {
        ok[b] = detail::run_replicate(seed, stream_domain::roots, b, [&](Stream& rng) {
            auto cats = sampler.draw(rng);
            double est = one_step ? one_step->fit(cats).distribution(t0) : data.npmle(cats)(t0);
            roots[b] = res.rate * (est - res.source_center);
        });
    });
    for (std::size_t b = 0; b < roots.size(); ++b) {
        if (ok[b]) res.roots.push_back(roots[b]);
        else ++res.failures;
    }
    detail::check_failures(res.failures, B);
    return res;
}

struct ConfidenceInterval {
    double lo;
    double hi;
    double length() const noexcept { return hi - lo; }
    bool contains(double x) const noexcept { return x >= lo && x <= hi; }
};

// Root inversion around the NPMLE at t0:
// [F(t0) - q_{1-a/2}/rate, F(t0) - q_{a/2}/rate], clamped to [0, 1].
inline ConfidenceInterval basic_ci(const BootstrapResult& result, double level) {
    if (!(level > 0.0 && level < 1.0)) throw InputError("confidence level must lie in (0, 1)");
    if (result.roots.size() < 20) throw InputError("basic interval needs at least 20 bootstrap roots");
    const double alpha = 1.0 - level;
    std::vector<double> sorted = result.roots;
    std::sort(sorted.begin(), sorted.end());
    const double q_lo = quantile_sorted(sorted, alpha / 2.0);
    const double q_hi = quantile_sorted(sorted, 1.0 - alpha / 2.0);
    const double c = result.npmle_center;
    return {std::clamp(c - q_hi / result.rate, 0.0, 1.0), std::clamp(c - q_lo / result.rate, 0.0, 1.0)};
}

// ---------------------------------------------------------------------------
// Bandwidth selection
// ---------------------------------------------------------------------------

struct BmsePoint {
    double h;
    double bmse;
};

// BMSE(h) = mean_b {SMLE*_h(t0) - c}^2 with c the source at t0. The same B
// resampled datasets serve every h.
inline std::vector<BmsePoint> bmse_curve(const BootstrapDesign& data, double t0, const BootstrapScheme& source_scheme,
                                         std::span<const double> h_grid, int B, std::uint64_t seed) {
    if (B < 1) throw InputError("number of bootstrap replicates must be positive");
    if (h_grid.empty()) throw InputError("bandwidth grid is empty");
    for (double h : h_grid) {
        if (!(h > 0.0) || !std::isfinite(h)) throw InputError("bandwidth grid values must be positive");
    }
    const auto npmle = data.npmle();
    const auto source = make_source(npmle, source_scheme);
    const double c = source(t0);
    CategorySampler sampler(data.subjects(), source);

    const std::size_t G = h_grid.size();
    std::vector<double> sq(static_cast<std::size_t>(B) * G, 0.0);
    std::vector<char> ok(static_cast<std::size_t>(B), 0);
    parallel_for(static_cast<std::size_t>(B), [&](std::size_t b) {
        ok[b] = detail::run_replicate(seed, stream_domain::bmse, b, [&](Stream& rng) {
            auto fit = data.npmle(sampler.draw(rng));
            for (std::size_t g = 0; g < G; ++g) {
                double v = SmoothedDistribution(fit, h_grid[g])(t0) - c;
                sq[b * G + g] = v * v;
            }
        });
    });
    std::size_t failures = 0, good = 0;
    std::vector<double> sum(G, 0.0);
    for (std::size_t b = 0; b < static_cast<std::size_t>(B); ++b) {
        if (!ok[b]) {
            ++failures;
            continue;
        }
        ++good;
        for (std::size_t g = 0; g < G; ++g) sum[g] += sq[b * G + g];
    }
    detail::check_failures(failures, B);
    std::vector<BmsePoint> curve;
    curve.reserve(G);
    for (std::size_t g = 0; g < G; ++g) curve.push_back({h_grid[g], sum[g] / static_cast<double>(good)});
    return curve;
}

// Minimiser of the curve; ties go to the smaller h.
inline double select_bandwidth(std::span<const BmsePoint> curve) {
    if (curve.empty()) throw InputError("empty BMSE curve");
    const BmsePoint* best = &curve.front();
    for (const auto& p : curve) {
        if (p.bmse < best->bmse || (p.bmse == best->bmse && p.h < best->h)) best = &p;
    }
    return best->h;
}

}  // namespace icboot
