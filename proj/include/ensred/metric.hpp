#pragma once

#include <cmath>
#include <functional>
#include <span>

namespace ensred {

/// Similarity metric contract: symmetric, d(x,x) = 0, non-negative.
/// The triangle inequality is not assumed; learned metrics are pseudo-metrics.
using MetricFn =
    std::function<double(std::span<const double>, std::span<const double>)>;

/// Scalar scoring of an observation (e.g. a regressor's predicted OIP).
using ScorerFn = std::function<double(std::span<const double>)>;

inline double euclidean_distance(std::span<const double> a,
                                 std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

inline MetricFn euclidean_metric() {
    return [](std::span<const double> a, std::span<const double> b) {
        return euclidean_distance(a, b);
    };
}

/// Pseudo-metric induced by a scalar scorer: d(x, y) = |s(x) - s(y)|.
inline MetricFn score_difference_metric(ScorerFn scorer) {
    return [scorer = std::move(scorer)](std::span<const double> a,
                                        std::span<const double> b) {
        return std::abs(scorer(a) - scorer(b));
    };
}

}  // namespace ensred
