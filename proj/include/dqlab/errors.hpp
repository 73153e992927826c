#pragma once

#include <stdexcept>
#include <string>

namespace dqlab {

// Raised when a risk measure is requested for a model that does not support
// it, e.g. Expected Shortfall of an infinite-mean distribution.
class unsupported_measure_error : public std::domain_error {
public:
    explicit unsupported_measure_error(const std::string& what)
        : std::domain_error(what) {}
};

// Raised when an iterative routine fails to converge or a calibration has no
// solution in its admissible range.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what)
        : std::runtime_error(what) {}
};

} // namespace dqlab
