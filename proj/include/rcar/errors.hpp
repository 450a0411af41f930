#ifndef RCAR_ERRORS_HPP
#define RCAR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rcar {

// Argument validation failures throw std::invalid_argument directly. The types
// below mark the failure modes a caller is expected to branch on.

/// The symmetric-innovation hypothesis behind the scale formula does not hold.
class TheoremHypothesisViolation : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A truncated series cannot meet the requested tolerance with the given term count.
class TruncationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A quadrature or root solve did not reach its tolerance.
class NumericToleranceError : public std::runtime_error {
public:
    NumericToleranceError(const std::string& what, double point, double estimate, double error_estimate)
        : std::runtime_error(what), point_(point), estimate_(estimate), error_estimate_(error_estimate) {}

    double point() const noexcept { return point_; }
    double estimate() const noexcept { return estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double point_;
    double estimate_;
    double error_estimate_;
};

/// The empirical characteristic function is numerically 0 or 1 on the probe grid.
class DegenerateEcfError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace rcar

#endif // RCAR_ERRORS_HPP
