#pragma once

#include <cstdint>

namespace dqlab {

// Counter-based generator keyed by (seed, stream). Each draw hashes the next
// counter value, so a stream's output depends only on (seed, stream, counter)
// and results are independent of how work is chunked across threads.
// Stable derivation of a child seed from a base seed and a point index, so
// sweeps can seed each grid point independently of evaluation order.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag);

class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();
    double next_uniform();   // strictly inside (0,1)
    double next_gaussian();  // inverse-cdf transform of next_uniform()
    double next_gamma(double shape);        // unit scale, Marsaglia-Tsang
    double next_chi_square(double dof);

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace dqlab
