#pragma once

#include <cmath>
#include <span>
#include <stdexcept>

namespace ensred {

struct ErrorMetrics {
    double mse = 0.0;
    double rmse = 0.0;
    double mae = 0.0;
};

inline ErrorMetrics error_metrics(std::span<const double> y_true,
                                  std::span<const double> y_pred) {
    if (y_true.empty() || y_true.size() != y_pred.size())
        throw std::invalid_argument("error_metrics: empty or mismatched input");
    double se = 0.0, ae = 0.0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const double d = y_pred[i] - y_true[i];
        se += d * d;
        ae += std::abs(d);
    }
    const double n = static_cast<double>(y_true.size());
    return {se / n, std::sqrt(se / n), ae / n};
}

}  // namespace ensred
