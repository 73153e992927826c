#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dqlab {

// Long-only portfolio weights: nonnegative, summing to 1 within 1e-12.
class Weights {
public:
    explicit Weights(std::vector<double> w);

    static Weights equal(std::size_t n);
    // Normalizes a nonnegative vector with positive sum onto the simplex.
    static Weights normalized(std::vector<double> w);

    std::size_t size() const { return w_.size(); }
    double operator[](std::size_t i) const { return w_[i]; }
    std::span<const double> values() const { return w_; }

private:
    std::vector<double> w_;
};

} // namespace dqlab
