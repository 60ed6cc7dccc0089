#pragma once

// Nonparametric maximum likelihood for current status and general
// interval-censored observations.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "icboot/data.hpp"
#include "icboot/distribution.hpp"
#include "icboot/error.hpp"
#include "icboot/gcm.hpp"

namespace icboot {

inline constexpr double kProbabilityFloor = 1e-12;

inline double clamp_probability(double p) noexcept {
    return std::clamp(p, kProbabilityFloor, 1.0 - kProbabilityFloor);
}

// ---------------------------------------------------------------------------
// Current status
// ---------------------------------------------------------------------------

// Distinct sorted examination times with per-time counts. Bootstrap replicates
// keep the times fixed, so this is built once and refitted many times.
class CurrentStatusDesign {
public:
    explicit CurrentStatusDesign(std::span<const double> times) {
        if (times.empty()) throw InputError("current status sample is empty");
        order_.resize(times.size());
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        std::stable_sort(order_.begin(), order_.end(),
                         [&](std::size_t a, std::size_t b) { return times[a] < times[b]; });
        group_of_.resize(times.size());
        for (std::size_t r = 0; r < order_.size(); ++r) {
            double t = times[order_[r]];
            if (!std::isfinite(t) || t < 0.0) throw InputError("current status time must be finite and >= 0");
            if (distinct_.empty() || t > distinct_.back()) {
                distinct_.push_back(t);
                counts_.push_back(0.0);
            }
            counts_.back() += 1.0;
            group_of_[order_[r]] = distinct_.size() - 1;
        }
    }

    std::span<const double> distinct_times() const noexcept { return distinct_; }
    std::span<const double> counts() const noexcept { return counts_; }
    std::size_t group_of(std::size_t subject) const { return group_of_[subject]; }
    std::size_t size() const noexcept { return group_of_.size(); }

    // NPMLE values at the distinct times for indicators given in input order.
    template <class Indicators>
    std::vector<double> fit_values(const Indicators& delta) const {
        std::vector<double> events(distinct_.size(), 0.0);
        for (std::size_t i = 0; i < group_of_.size(); ++i) events[group_of_[i]] += delta[i] ? 1.0 : 0.0;
        auto slopes = gcm_left_slopes(CusumDiagram::from_increments(counts_, events));
        for (auto& v : slopes) v = std::clamp(v, 0.0, 1.0);
        return slopes;
    }

    template <class Indicators>
    StepDistribution fit(const Indicators& delta) const {
        auto values = fit_values(delta);
        return StepDistribution::from_values(distinct_, values);
    }

private:
    std::vector<std::size_t> order_;
    std::vector<std::size_t> group_of_;
    std::vector<double> distinct_;
    std::vector<double> counts_;
};

inline StepDistribution npmle_current_status(const CurrentStatusSample& sample) {
    if (sample.empty()) throw InputError("current status sample is empty");
    validate(sample);
    std::vector<double> times;
    std::vector<int> delta;
    times.reserve(sample.size());
    delta.reserve(sample.size());
    for (const auto& r : sample) {
        times.push_back(r.t);
        delta.push_back(r.delta);
    }
    return CurrentStatusDesign(times).fit(delta);
}

// Log-likelihood of a candidate distribution on current status data, with
// probabilities clamped away from 0 and 1.
template <EvaluableDistribution D>
double current_status_loglik(const CurrentStatusSample& sample, const D& dist) {
    double ll = 0.0;
    for (const auto& r : sample) {
        double p = clamp_probability(dist(r.t));
        ll += r.delta ? std::log(p) : std::log1p(-p);
    }
    return ll;
}

// ---------------------------------------------------------------------------
// Interval censoring
// ---------------------------------------------------------------------------

// Maximal intersections: every left endpoint immediately followed by a right
// endpoint once all endpoints are sorted, a left endpoint sorting after a right
// endpoint at the same value.
inline std::vector<CensoringInterval> turnbull_support(std::span<const CensoringInterval> intervals) {
    if (intervals.empty()) throw InputError("no intervals");
    std::vector<std::pair<double, int>> ends;  // 0 = right, 1 = left
    ends.reserve(2 * intervals.size());
    for (const auto& iv : intervals) {
        ends.emplace_back(iv.l, 1);
        ends.emplace_back(iv.r, 0);
    }
    std::sort(ends.begin(), ends.end());
    std::vector<CensoringInterval> support;
    for (std::size_t i = 0; i + 1 < ends.size(); ++i) {
        if (ends[i].second == 1 && ends[i + 1].second == 0) {
            support.emplace_back(ends[i].first, ends[i + 1].first);
        }
    }
    return support;
}

struct IntervalNpmleOptions {
    double tol = 1e-8;
    int max_iter = 500;
};

struct IntervalNpmle {
    std::vector<CensoringInterval> support;
    std::vector<double> masses;
    double loglik = 0.0;
    double fenchel_violation = 0.0;
    int iterations = 0;
    std::vector<double> loglik_trace;

    // Mass sits at the right end of each support interval; mass on (l, inf)
    // stays unassigned.
    StepDistribution distribution() const {
        std::vector<Jump> jumps;
        for (std::size_t k = 0; k < support.size(); ++k) {
            if (masses[k] > 0.0 && !support[k].right_censored()) jumps.push_back({support[k].r, masses[k]});
        }
        return StepDistribution(std::move(jumps));
    }
};

namespace detail {

// Observations collapsed to (first, last) support index with multiplicity.
struct SupportProblem {
    std::vector<CensoringInterval> support;
    std::vector<std::size_t> first;
    std::vector<std::size_t> last;
    std::vector<double> count;
    double n = 0.0;
};

inline SupportProblem build_support_problem(std::span<const CensoringInterval> intervals) {
    SupportProblem prob;
    prob.support = turnbull_support(intervals);
    const auto& sup = prob.support;
    std::map<std::pair<std::size_t, std::size_t>, double> groups;
    for (const auto& iv : intervals) {
        auto a = static_cast<std::size_t>(
            std::lower_bound(sup.begin(), sup.end(), iv.l,
                             [](const CensoringInterval& s, double x) { return s.l < x; }) -
            sup.begin());
        auto b_end = std::upper_bound(sup.begin(), sup.end(), iv.r,
                                      [](double x, const CensoringInterval& s) { return x < s.r; });
        if (a >= sup.size() || b_end == sup.begin()) {
            throw NumericalError("observation interval contains no support interval");
        }
        auto b = static_cast<std::size_t>(b_end - sup.begin()) - 1;
        if (a > b) throw NumericalError("observation interval contains no support interval");
        groups[{a, b}] += 1.0;
    }
    for (const auto& [key, c] : groups) {
        prob.first.push_back(key.first);
        prob.last.push_back(key.second);
        prob.count.push_back(c);
        prob.n += c;
    }
    return prob;
}

// cum has size m+1: cum[0] = 0, cum[m] = 1.
inline void interval_probabilities(const SupportProblem& prob, std::span<const double> cum,
                                   std::vector<double>& p) {
    p.resize(prob.first.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = cum[prob.last[i] + 1] - cum[prob.first[i]];
}

inline double loglik_of(const SupportProblem& prob, std::span<const double> p) {
    double ll = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p[i] > 0.0)) return -kInfinity;
        ll += prob.count[i] * std::log(p[i]);
    }
    return ll;
}

// Directional derivatives toward each support point, normalised by n:
// d_k = (1/n) sum_i c_i 1{k in obs i} / P_i - 1.
inline std::vector<double> mass_derivatives(const SupportProblem& prob, std::span<const double> p) {
    const std::size_t m = prob.support.size();
    std::vector<double> diff(m + 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        double v = prob.count[i] / p[i];
        diff[prob.first[i]] += v;
        diff[prob.last[i] + 1] -= v;
    }
    std::vector<double> d(m);
    double acc = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        acc += diff[k];
        d[k] = acc / prob.n - 1.0;
    }
    return d;
}

inline double fenchel_violation(std::span<const double> masses, std::span<const double> d) {
    double worst = 0.0;
    for (std::size_t k = 0; k < masses.size(); ++k) {
        worst = std::max(worst, masses[k] > 0.0 ? std::abs(d[k]) : std::max(d[k], 0.0));
    }
    return worst;
}

}  // namespace detail

// ICM on the cumulative masses at the right ends of the support intervals,
// with step halving to keep the likelihood nondecreasing and an EM step when
// halving stalls. Stops once the Fenchel conditions hold to opts.tol.
inline IntervalNpmle npmle_interval_censored(std::span<const CensoringInterval> intervals,
                                             IntervalNpmleOptions opts = {}) {
    if (intervals.empty()) throw InputError("interval-censored sample is empty");
    if (!(opts.tol > 0.0)) throw InputError("tolerance must be positive");
    if (opts.max_iter < 1) throw InputError("max_iter must be positive");

    auto prob = detail::build_support_problem(intervals);
    const std::size_t m = prob.support.size();
    const std::size_t nobs = prob.first.size();

    IntervalNpmle out;
    out.support = prob.support;

    std::vector<double> cum(m + 1);
    for (std::size_t k = 0; k <= m; ++k) cum[k] = static_cast<double>(k) / static_cast<double>(m);
    cum[m] = 1.0;

    auto masses_of = [&](std::span<const double> c) {
        std::vector<double> ms(m);
        for (std::size_t k = 0; k < m; ++k) ms[k] = std::max(c[k + 1] - c[k], 0.0);
        return ms;
    };

    std::vector<double> p, p_try;
    detail::interval_probabilities(prob, cum, p);
    double ll = detail::loglik_of(prob, p);
    out.loglik_trace.push_back(ll);

    std::vector<double> grad(m), weight(m), target, w_free, trial(m + 1);
    int it = 0, polish = 0;
    double violation = 0.0;
    for (;; ++it) {
        auto masses = masses_of(cum);
        auto d = detail::mass_derivatives(prob, p);
        violation = detail::fenchel_violation(masses, d);
        // a few extra sweeps once the tolerance is met; the cumulative masses
        // settle much later than the Fenchel violation does
        const bool met = violation <= opts.tol;
        if (m == 1 || violation <= 1e-3 * opts.tol || (met && (polish == 5 || it >= opts.max_iter))) {
            out.masses = std::move(masses);
            break;
        }
        if (it >= opts.max_iter) {
            throw ConvergenceError("interval NPMLE did not converge in " + std::to_string(opts.max_iter) +
                                       " iterations (Fenchel violation " + std::to_string(violation) + ")",
                                   std::move(masses), violation, it);
        }
        polish += met;

        // gradient and diagonal curvature with respect to cum[1..m-1]
        std::fill(grad.begin(), grad.end(), 0.0);
        std::fill(weight.begin(), weight.end(), 0.0);
        for (std::size_t i = 0; i < nobs; ++i) {
            double inv = 1.0 / p[i];
            double c = prob.count[i];
            std::size_t hi = prob.last[i] + 1;
            std::size_t lo = prob.first[i];
            if (hi < m) {
                grad[hi] += c * inv;
                weight[hi] += c * inv * inv;
            }
            if (lo > 0) {
                grad[lo] -= c * inv;
                weight[lo] += c * inv * inv;
            }
        }
        target.assign(m - 1, 0.0);
        w_free.assign(m - 1, 0.0);
        for (std::size_t j = 1; j < m; ++j) {
            target[j - 1] = cum[j] + grad[j] / weight[j];
            w_free[j - 1] = weight[j];
        }
        auto proposal = isotonic_weighted(target, w_free).values;
        for (auto& v : proposal) v = std::clamp(v, 0.0, 1.0);

        // The gain is accumulated as sum c log1p(dP / P) so that it stays
        // resolvable when the step is far below the scale of the log-likelihood.
        bool accepted = false;
        double lambda = 1.0;
        for (int halving = 0; halving <= 30; ++halving, lambda *= 0.5) {
            trial[0] = 0.0;
            trial[m] = 1.0;
            for (std::size_t j = 1; j < m; ++j) {
                trial[j] = halving == 0 ? proposal[j - 1] : cum[j] + lambda * (proposal[j - 1] - cum[j]);
            }
            detail::interval_probabilities(prob, trial, p_try);
            double gain = 0.0;
            for (std::size_t i = 0; i < nobs && gain > -kInfinity; ++i) {
                if (!(p_try[i] > 0.0)) {
                    gain = -kInfinity;
                    break;
                }
                double dp = (trial[prob.last[i] + 1] - cum[prob.last[i] + 1]) -
                            (trial[prob.first[i]] - cum[prob.first[i]]);
                gain += prob.count[i] * std::log1p(dp / p[i]);
            }
            if (gain >= 0.0) {
                cum.swap(trial);
                p.swap(p_try);
                ll += gain;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            // self-consistency step
            std::vector<double> next(m);
            for (std::size_t k = 0; k < m; ++k) next[k] = masses[k] * (1.0 + d[k]);
            double total = std::accumulate(next.begin(), next.end(), 0.0);
            cum[0] = 0.0;
            for (std::size_t k = 0; k < m; ++k) cum[k + 1] = cum[k] + next[k] / total;
            cum[m] = 1.0;
            detail::interval_probabilities(prob, cum, p);
            ll = detail::loglik_of(prob, p);
        }
        out.loglik_trace.push_back(ll);
    }
    out.loglik = ll;
    out.fenchel_violation = violation;
    out.iterations = it;
    return out;
}

inline IntervalNpmle npmle_interval_censored(std::span<const CensoringInterval> intervals, double tol,
                                             int max_iter) {
    return npmle_interval_censored(intervals, IntervalNpmleOptions{tol, max_iter});
}

// Mixed-case log-likelihood of a candidate distribution.
template <EvaluableDistribution D>
double interval_loglik(std::span<const CensoringInterval> intervals, const D& dist) {
    double ll = 0.0;
    for (const auto& iv : intervals) {
        double lo = iv.l > 0.0 ? dist(iv.l) : 0.0;
        double hi = iv.right_censored() ? 1.0 : dist(iv.r);
        ll += std::log(std::max(hi - lo, kProbabilityFloor));
    }
    return ll;
}

}  // namespace icboot
