#ifndef STELLAR_ERRORS_HPP
#define STELLAR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace stellar {

// Base class for all library errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Mode-count or index mismatch between operands.
struct dimension_error : error {
    using error::error;
};

// Parameter outside its admissible range (e.g. |r| > r_max).
struct parameter_error : error {
    using error::error;
};

// Requested tensor exceeds the configured memory budget.
struct capacity_error : error {
    using error::error;
};

// Truncation-quality failure: mass pushed past the cutoff.
struct truncation_error : error {
    double leak;
    truncation_error(const std::string& msg, double leak_) : error(msg), leak(leak_) {}
};

// Degenerate construction or projection (zero weight / zero norm).
struct degenerate_error : error {
    using error::error;
};

// Quadrature or resolution did not converge to the requested tolerance.
struct precision_error : error {
    using error::error;
};

// Optimizer exhausted its budget without a single feasible evaluation.
struct infeasible_error : error {
    using error::error;
};

// Malformed state/scenario specification.
struct spec_error : error {
    using error::error;
};

} // namespace stellar

#endif
