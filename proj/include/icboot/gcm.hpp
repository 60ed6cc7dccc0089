#pragma once

// Greatest convex minorant of a cumulative sum diagram and weighted isotonic
// regression. Every estimator in the library reduces to one of these two.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "icboot/error.hpp"

namespace icboot {

inline constexpr double kGcmTolerance = 1e-12;

struct DiagramPoint {
    double x;
    double y;
};

// Cumulative sum diagram: origin followed by at least one point, x strictly
// increasing. Callers building a diagram from data merge tied x values first
// (see from_increments).
class CusumDiagram {
public:
    explicit CusumDiagram(std::vector<DiagramPoint> points) : points_(std::move(points)) {
        if (points_.size() < 2) {
            throw InputError("cumulative sum diagram needs the origin and at least one point");
        }
        for (std::size_t i = 1; i < points_.size(); ++i) {
            if (!(points_[i].x > points_[i - 1].x)) {
                throw InputError("cumulative sum diagram x coordinates must be strictly increasing (index " +
                                 std::to_string(i) + ")");
            }
        }
    }

    // Diagram through the origin with the given increments. Zero-width
    // increments are folded into their predecessor, so dx must be >= 0 and the
    // first must be > 0.
    static CusumDiagram from_increments(std::span<const double> dx, std::span<const double> dy) {
        if (dx.size() != dy.size()) {
            throw InputError("increment sequences differ in length");
        }
        std::vector<DiagramPoint> pts{{0.0, 0.0}};
        for (std::size_t i = 0; i < dx.size(); ++i) {
            if (dx[i] < 0.0) throw InputError("negative diagram increment");
            if (dx[i] == 0.0 && pts.size() > 1) {
                pts.back().y += dy[i];
                continue;
            }
            if (dx[i] == 0.0) throw InputError("first diagram increment has zero width");
            pts.push_back({pts.back().x + dx[i], pts.back().y + dy[i]});
        }
        return CusumDiagram(std::move(pts));
    }

    std::span<const DiagramPoint> points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size() - 1; }

private:
    std::vector<DiagramPoint> points_;
};

// Left derivatives of the greatest convex minorant at every non-origin point.
// Lower hull by the monotone chain, then each point reads the slope of the hull
// segment ending at or straddling it.
inline std::vector<double> gcm_left_slopes(const CusumDiagram& diagram) {
    auto pts = diagram.points();
    std::vector<std::size_t> hull;
    hull.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (hull.size() >= 2) {
            const auto& a = pts[hull[hull.size() - 2]];
            const auto& b = pts[hull.back()];
            const auto& c = pts[i];
            // b is dropped unless it lies strictly below the chord a-c
            double cross = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
            if (cross <= kGcmTolerance * (c.x - a.x)) {
                hull.pop_back();
            } else {
                break;
            }
        }
        hull.push_back(i);
    }

    std::vector<double> slopes(pts.size() - 1);
    std::size_t seg = 1;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        while (pts[hull[seg]].x < pts[i].x) ++seg;
        const auto& a = pts[hull[seg - 1]];
        const auto& b = pts[hull[seg]];
        slopes[i - 1] = (b.y - a.y) / (b.x - a.x);
    }
    return slopes;
}

struct IsotonicFit {
    std::vector<double> values;
    std::vector<double> weights;
};

// Weighted least-squares projection onto nondecreasing sequences, by a
// stack-based pool-adjacent-violators pass.
inline IsotonicFit isotonic_weighted(std::span<const double> values, std::span<const double> weights) {
    if (values.empty()) throw InputError("isotonic regression of an empty sequence");
    if (values.size() != weights.size()) throw InputError("values and weights differ in length");

    struct Block {
        double sum;
        double weight;
        std::size_t count;
        double mean;
    };
    std::vector<Block> stack;
    stack.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
            throw InputError("isotonic weights must be positive and finite (index " + std::to_string(i) + ")");
        }
        Block cur{values[i] * weights[i], weights[i], 1, values[i]};
        while (!stack.empty() && stack.back().mean > cur.mean) {
            cur.sum += stack.back().sum;
            cur.weight += stack.back().weight;
            cur.count += stack.back().count;
            cur.mean = cur.sum / cur.weight;
            stack.pop_back();
        }
        stack.push_back(cur);
    }

    IsotonicFit fit;
    fit.values.reserve(values.size());
    for (const auto& b : stack) fit.values.insert(fit.values.end(), b.count, b.mean);
    fit.weights.assign(weights.begin(), weights.end());
    return fit;
}

}  // namespace icboot
