#pragma once

// One iteration of the iterative convex minorant algorithm from a given start
// distribution F0. The weight process W2 accumulates the diagonal curvature of
// the interval-censored log-likelihood at F0, W1 its gradient; the new
// estimate is the left derivative of the GCM of {(W2(u), W1(u) + int_0^u F0 dW2)}.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "icboot/data.hpp"
#include "icboot/distribution.hpp"
#include "icboot/error.hpp"
#include "icboot/gcm.hpp"
#include "icboot/npmle.hpp"

namespace icboot {

struct OneStepResult {
    std::vector<double> times;            // examination times with positive weight
    std::vector<DiagramPoint> diagram;    // (W2, V) at those times, origin first
    std::vector<double> values;           // clamped GCM slopes
    StepDistribution distribution;
};

// Examination times and F0 fixed; categories vary between calls.
class OneStepDesign {
public:
    template <EvaluableDistribution D>
    OneStepDesign(const MixedCaseSample& subjects, const D& start) : subjects_(subjects) {
        if (subjects_.empty()) throw InputError("one-step estimator needs a nonempty sample");
        validate(subjects_);
        for (const auto& s : subjects_) times_.insert(times_.end(), s.times.begin(), s.times.end());
        std::sort(times_.begin(), times_.end());
        times_.erase(std::unique(times_.begin(), times_.end()), times_.end());
        f0_.reserve(times_.size());
        for (double u : times_) f0_.push_back(std::clamp(static_cast<double>(start(u)), 0.0, 1.0));
        index_.reserve(subjects_.size());
        for (const auto& s : subjects_) {
            std::vector<std::size_t> idx;
            for (double t : s.times) {
                idx.push_back(static_cast<std::size_t>(std::lower_bound(times_.begin(), times_.end(), t) - times_.begin()));
            }
            index_.push_back(std::move(idx));
        }
    }

    std::size_t size() const noexcept { return subjects_.size(); }

    // categories[i] replaces subjects[i].category.
    OneStepResult fit(const std::vector<int>& categories) const {
        const std::size_t m = times_.size();
        std::vector<double> grad(m, 0.0), weight(m, 0.0);
        for (std::size_t i = 0; i < subjects_.size(); ++i) {
            const auto& idx = index_[i];
            const auto k = static_cast<std::size_t>(categories[i]);
            const std::size_t K = idx.size();
            if (k < 1 || k > K + 1) throw InputError("category out of range");
            const bool has_left = k > 1;
            const bool has_right = k <= K;
            const std::size_t li = has_left ? idx[k - 2] : 0;
            const std::size_t ri = has_right ? idx[k - 1] : 0;
            double p;
            if (!has_left) {
                p = clamp_probability(f0_[ri]);
            } else if (!has_right) {
                p = 1.0 - clamp_probability(f0_[li]);
            } else {
                double diff = f0_[ri] - f0_[li];
                if (!(diff > 0.0)) {
                    throw NumericalError("start distribution puts no mass on (" + std::to_string(times_[li]) + ", " +
                                         std::to_string(times_[ri]) + "]");
                }
                p = std::max(diff, kProbabilityFloor);
            }
            const double inv = 1.0 / p;
            if (has_left) {
                grad[li] -= inv;
                weight[li] += inv * inv;
            }
            if (has_right) {
                grad[ri] += inv;
                weight[ri] += inv * inv;
            }
        }

        OneStepResult out;
        out.diagram.push_back({0.0, 0.0});
        for (std::size_t j = 0; j < m; ++j) {
            if (!(weight[j] > 0.0)) continue;
            const auto& prev = out.diagram.back();
            out.diagram.push_back({prev.x + weight[j], prev.y + grad[j] + f0_[j] * weight[j]});
            out.times.push_back(times_[j]);
        }
        out.values = gcm_left_slopes(CusumDiagram(out.diagram));
        for (auto& v : out.values) v = std::clamp(v, 0.0, 1.0);
        out.distribution = StepDistribution::from_values(out.times, out.values);
        return out;
    }

    OneStepResult fit() const {
        std::vector<int> cats;
        cats.reserve(subjects_.size());
        for (const auto& s : subjects_) cats.push_back(s.category);
        return fit(cats);
    }

private:
    MixedCaseSample subjects_;
    std::vector<double> times_;
    std::vector<double> f0_;
    std::vector<std::vector<std::size_t>> index_;
};

template <EvaluableDistribution D>
OneStepResult icm_one_step(const MixedCaseSample& sample, const D& start) {
    return OneStepDesign(sample, start).fit();
}

}  // namespace icboot
