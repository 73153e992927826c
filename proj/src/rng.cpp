#include "dqlab/rng.hpp"

#include "dqlab/special_functions.hpp"

#include <cmath>
#include <stdexcept>

namespace dqlab {

namespace {

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) {
    return mix64(base ^ mix64(tag + 0x6a09e667f3bcc909ULL));
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix64(seed ^ mix64(stream + 0x517cc1b727220a95ULL))) {}

std::uint64_t CounterRng::next_u64() {
    ++counter_;
    return mix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
}

double CounterRng::next_uniform() {
    const std::uint64_t bits = next_u64() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double CounterRng::next_gaussian() {
    return normal_quantile(next_uniform());
}

double CounterRng::next_gamma(double shape) {
    if (!(shape > 0.0))
        throw std::invalid_argument("CounterRng::next_gamma: shape must be positive");
    if (shape < 1.0) {
        const double x = next_gamma(shape + 1.0);
        const double u = next_uniform();
        return x * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x;
        double v;
        do {
            x = next_gaussian();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = next_uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double CounterRng::next_chi_square(double dof) {
    return 2.0 * next_gamma(0.5 * dof);
}

} // namespace dqlab
