#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "icboot/error.hpp"

namespace icboot {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct CurrentStatusRecord {
    double t;
    int delta;  // 1 if the event happened by t
};

using CurrentStatusSample = std::vector<CurrentStatusRecord>;

inline void validate(const CurrentStatusSample& sample) {
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const auto& r = sample[i];
        if (!std::isfinite(r.t) || r.t < 0.0) {
            throw InputError("current status time must be finite and >= 0 (record " + std::to_string(i) + ")");
        }
        if (r.delta != 0 && r.delta != 1) {
            throw InputError("current status indicator must be 0 or 1 (record " + std::to_string(i) + ")");
        }
    }
}

// One subject of a mixed-case design: K examination times and the 1-based
// index of the cell (T_{k-1}, T_k] holding the event; K+1 means after T_K.
struct MixedCaseSubject {
    std::vector<double> times;
    int category = 1;

    std::size_t exams() const noexcept { return times.size(); }

    friend auto operator<=>(const MixedCaseSubject&, const MixedCaseSubject&) = default;
};

using MixedCaseSample = std::vector<MixedCaseSubject>;

inline void validate(const MixedCaseSubject& s) {
    if (s.times.empty()) throw InputError("subject has no examination times");
    for (std::size_t k = 0; k < s.times.size(); ++k) {
        if (!std::isfinite(s.times[k]) || !(s.times[k] > 0.0)) {
            throw InputError("examination times must be finite and positive");
        }
        if (k > 0 && !(s.times[k] > s.times[k - 1])) {
            throw InputError("examination times must be strictly increasing");
        }
    }
    if (s.category < 1 || s.category > static_cast<int>(s.times.size()) + 1) {
        throw InputError("subject category out of range 1..K+1");
    }
}

inline void validate(const MixedCaseSample& sample) {
    for (const auto& s : sample) validate(s);
}

// Half-open (l, r]; r may be +inf.
struct CensoringInterval {
    double l = 0.0;
    double r = kInfinity;

    CensoringInterval() = default;
    CensoringInterval(double left, double right) : l(left), r(right) {
        if (!(l >= 0.0) || !std::isfinite(l)) throw InputError("interval left endpoint must be finite and >= 0");
        if (!(r > l)) throw InputError("interval right endpoint must exceed the left endpoint");
    }

    bool right_censored() const noexcept { return std::isinf(r); }
    bool contains(double x) const noexcept { return x > l && x <= r; }

    friend bool operator==(const CensoringInterval&, const CensoringInterval&) = default;
};

inline CensoringInterval reduce_to_interval(const MixedCaseSubject& subject) {
    validate(subject);
    const auto k = static_cast<std::size_t>(subject.category);
    double left = k == 1 ? 0.0 : subject.times[k - 2];
    double right = k <= subject.times.size() ? subject.times[k - 1] : kInfinity;
    return {left, right};
}

inline std::vector<CensoringInterval> reduce_to_intervals(const MixedCaseSample& sample) {
    std::vector<CensoringInterval> out;
    out.reserve(sample.size());
    for (const auto& s : sample) out.push_back(reduce_to_interval(s));
    return out;
}

inline MixedCaseSample to_mixed_case(const CurrentStatusSample& sample) {
    validate(sample);
    MixedCaseSample out;
    out.reserve(sample.size());
    for (const auto& r : sample) {
        if (!(r.t > 0.0)) throw InputError("current status time 0 cannot be expressed as an examination");
        out.push_back({{r.t}, r.delta == 1 ? 1 : 2});
    }
    return out;
}

// Inverse of reduce_to_interval for data that arrive only as intervals: the
// finite endpoints become the examination times.
inline MixedCaseSubject subject_from_interval(const CensoringInterval& iv) {
    if (iv.l == 0.0 && iv.right_censored()) {
        throw InputError("interval (0, inf) carries no information");
    }
    if (iv.l == 0.0) return {{iv.r}, 1};
    if (iv.right_censored()) return {{iv.l}, 2};
    return {{iv.l, iv.r}, 2};
}

inline MixedCaseSample subjects_from_intervals(const std::vector<CensoringInterval>& intervals) {
    MixedCaseSample out;
    out.reserve(intervals.size());
    for (const auto& iv : intervals) out.push_back(subject_from_interval(iv));
    return out;
}

// Sort by (times, category). Bootstrap streams are consumed in this order, so
// permuted inputs resample identically.
inline MixedCaseSample canonical_order(MixedCaseSample sample) {
    std::stable_sort(sample.begin(), sample.end());
    return sample;
}

inline CurrentStatusSample canonical_order(CurrentStatusSample sample) {
    std::stable_sort(sample.begin(), sample.end(), [](const auto& a, const auto& b) {
        return a.t < b.t || (a.t == b.t && a.delta < b.delta);
    });
    return sample;
}

}  // namespace icboot
