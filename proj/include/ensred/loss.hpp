#pragma once

#include <cmath>
#include <stdexcept>

namespace ensred {

struct HuberResult {
    double loss = 0.0;
    double gradient = 0.0;  // d loss / d residual
};

/// Huber loss of a residual: quadratic within |r| <= delta, linear beyond.
inline HuberResult huber_loss(double residual, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("huber_loss: delta must be > 0");
    const double a = std::abs(residual);
    if (a <= delta) return {0.5 * residual * residual, residual};
    const double sign = residual > 0.0 ? 1.0 : -1.0;
    return {delta * (a - 0.5 * delta), delta * sign};
}

}  // namespace ensred
