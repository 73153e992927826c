#include "dqlab/weights.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace dqlab {

Weights::Weights(std::vector<double> w) : w_(std::move(w)) {
    if (w_.empty()) throw std::invalid_argument("Weights: empty vector");
    double total = 0.0;
    for (double x : w_) {
        if (x < 0.0) throw std::invalid_argument("Weights: negative component");
        total += x;
    }
    if (std::fabs(total - 1.0) > 1e-12)
        throw std::invalid_argument("Weights: components must sum to 1 within 1e-12");
}

Weights Weights::equal(std::size_t n) {
    if (n == 0) throw std::invalid_argument("Weights: n must be positive");
    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    // Nudge the first entry so the sum is exactly 1 in floating point.
    double total = 0.0;
    for (double x : w) total += x;
    w[0] += 1.0 - total;
    return Weights(std::move(w));
}

Weights Weights::normalized(std::vector<double> w) {
    double total = 0.0;
    for (double x : w) {
        if (x < 0.0) throw std::invalid_argument("Weights: negative component");
        total += x;
    }
    if (!(total > 0.0)) throw std::invalid_argument("Weights: sum must be positive");
    for (double& x : w) x /= total;
    total = 0.0;
    for (double x : w) total += x;
    w[0] += 1.0 - total;
    if (w[0] < 0.0) w[0] = 0.0;
    return Weights(std::move(w));
}

} // namespace dqlab
