#ifndef BQRAY_ERRORS_HPP
#define BQRAY_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bqray {

// A stated hypothesis of the computation does not hold for the given input
// (wrong congruence class, non-squarefree discriminant, ...).  CLI exit 1.
struct hypothesis_error : std::runtime_error {
    explicit hypothesis_error(const std::string &m) : std::runtime_error(m) {}
};

// A certification (imaginary residual, integer rounding, Frobenius margin)
// failed at the maximum allowed precision.  CLI exit 2.
struct precision_error : std::runtime_error {
    explicit precision_error(const std::string &m) : std::runtime_error(m) {}
};

// Exponent-range overflow in the numeric kernel; never silently saturated.
struct overflow_error : std::runtime_error {
    explicit overflow_error(const std::string &m) : std::runtime_error(m) {}
};

// Violated internal invariant; indicates a bug, not bad input.
struct internal_error : std::logic_error {
    explicit internal_error(const std::string &m) : std::logic_error(m) {}
};

} // namespace bqray

#endif
