#ifndef RCAR_PROCESS_SIM_HPP
#define RCAR_PROCESS_SIM_HPP

#include "rcar/innovation.hpp"
#include "rcar/random.hpp"

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace rcar {

/// Arrival-time origin used by the first step of the recursion.
///
/// The recursion X_k = (G_k / G_{k-1})^a X_{k-1} + eps_k needs G_0 at k = 1.
/// Only G_0 = 1 makes the unrolled path equal
/// (G_n/n)^a (1 + sum eps_k / G_k^a) after normalization, so that is the value
/// used here. It is a convention for the multiplier, not the Poisson origin.
inline constexpr double kArrivalOrigin = 1.0;

/// Initial state X_0.
inline constexpr double kInitialState = 1.0;

/// Arrival times G_1 < ... < G_n of a unit-intensity Poisson process.
///
/// Other intensities reduce to this one by rescaling time.
struct ArrivalSequence {
    std::vector<double> times;      ///< G_1..G_n
    std::vector<double> increments; ///< the exponential draws, G_k - G_{k-1}

    std::size_t size() const noexcept { return times.size(); }

    /// G_k for k >= 1; k = 0 yields the recursion origin.
    double at(std::size_t k) const { return k == 0 ? kArrivalOrigin : times.at(k - 1); }
};

/// One realization of the recursion.
struct ProcessPath {
    double a = 0.0;
    ArrivalSequence arrivals;
    std::vector<double> raw;        ///< X_0..X_n
    std::vector<double> normalized; ///< X_k / k^a for k >= 1; entry 0 repeats X_0

    std::size_t steps() const noexcept { return arrivals.size(); }
    double terminal() const { return normalized.back(); }
};

/// Rejects exponents at or below 1/2 (plus a 1e-12 guard keeping alpha = 1/a < 2).
inline void validate_exponent(double a)
{
    if (!std::isfinite(a) || !(a > 0.5 + 1e-12))
        throw std::invalid_argument("exponent a must exceed 1/2");
}

namespace detail {

inline double pow_exponent(double x, double a) noexcept
{
    if (a == 1.0)
        return x;
    if (a == 2.0)
        return x * x;
    return std::pow(x, a);
}

inline void validate_steps(std::size_t n)
{
    if (n == 0)
        throw std::invalid_argument("number of steps must be at least 1");
}

/// Running state of the normalized closed form
///   X_k / k^a = (G_k / k)^a (1 + sum_{j<=k} eps_j / G_j^a).
/// Shared by the path and terminal-value simulators so both round identically.
class ClosedFormAccumulator {
public:
    explicit ClosedFormAccumulator(double a) : a_(a) {}

    void step(double increment, double eps)
    {
        arrival_ += increment;
        series_ += eps / pow_exponent(arrival_, a_);
    }

    double arrival() const noexcept { return arrival_; }

    double normalized(std::size_t k) const
    {
        return pow_exponent(arrival_ / static_cast<double>(k), a_) * (1.0 + series_);
    }

private:
    double a_;
    double arrival_ = 0.0;
    double series_ = 0.0;
};

} // namespace detail

/// Cumulative sums of n unit-rate exponential draws.
inline ArrivalSequence sample_arrivals(std::size_t n, Stream& stream)
{
    detail::validate_steps(n);
    ArrivalSequence out;
    out.times.reserve(n);
    out.increments.reserve(n);
    double g = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double e = stream.exponential();
        g += e;
        out.increments.push_back(e);
        out.times.push_back(g);
    }
    return out;
}

/// Runs X_k = (G_k / G_{k-1})^a X_{k-1} + eps_k from X_0 = 1.
///
/// Each step draws the exponential increment first and then eps_k, so the
/// closed-form simulator fed the same stream sees identical draws.
inline ProcessPath simulate_recursive(double a, std::size_t n, const InnovationSpec& innov, Stream& stream)
{
    validate_exponent(a);
    detail::validate_steps(n);

    ProcessPath path;
    path.a = a;
    path.arrivals.times.reserve(n);
    path.arrivals.increments.reserve(n);
    path.raw.reserve(n + 1);
    path.normalized.reserve(n + 1);
    path.raw.push_back(kInitialState);
    path.normalized.push_back(kInitialState);

    double previous = kArrivalOrigin;
    double g = 0.0;
    double x = kInitialState;
    for (std::size_t k = 1; k <= n; ++k) {
        const double e = stream.exponential();
        const double eps = innov.draw(stream);
        g += e;
        x = detail::pow_exponent(g / previous, a) * x + eps;
        previous = g;

        path.arrivals.increments.push_back(e);
        path.arrivals.times.push_back(g);
        path.raw.push_back(x);
        path.normalized.push_back(x / detail::pow_exponent(static_cast<double>(k), a));
    }
    return path;
}

/// Evaluates the normalized closed form at every step on the same draw order
/// as simulate_recursive; raw values are recovered as normalized * k^a.
inline ProcessPath simulate_closed_form(double a, std::size_t n, const InnovationSpec& innov, Stream& stream)
{
    validate_exponent(a);
    detail::validate_steps(n);

    ProcessPath path;
    path.a = a;
    path.arrivals.times.reserve(n);
    path.arrivals.increments.reserve(n);
    path.raw.reserve(n + 1);
    path.normalized.reserve(n + 1);
    path.raw.push_back(kInitialState);
    path.normalized.push_back(kInitialState);

    detail::ClosedFormAccumulator acc(a);
    for (std::size_t k = 1; k <= n; ++k) {
        const double e = stream.exponential();
        const double eps = innov.draw(stream);
        acc.step(e, eps);

        const double normalized = acc.normalized(k);
        path.arrivals.increments.push_back(e);
        path.arrivals.times.push_back(acc.arrival());
        path.normalized.push_back(normalized);
        path.raw.push_back(normalized * detail::pow_exponent(static_cast<double>(k), a));
    }
    return path;
}

/// X_n / n^a only, bit-identical to simulate_closed_form(...).terminal().
inline double simulate_terminal(double a, std::size_t n, const InnovationSpec& innov, Stream& stream)
{
    validate_exponent(a);
    detail::validate_steps(n);

    detail::ClosedFormAccumulator acc(a);
    for (std::size_t k = 1; k <= n; ++k) {
        const double e = stream.exponential();
        const double eps = innov.draw(stream);
        acc.step(e, eps);
    }
    return acc.normalized(n);
}

struct LlnSummary {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t paths = 0;
};

/// Sample mean and standard error of (G_n / n)^a over equal-length sequences.
inline LlnSummary lln_diagnostic(std::span<const ArrivalSequence> paths, double a)
{
    if (paths.empty())
        throw std::invalid_argument("lln_diagnostic: no arrival sequences");
    if (!std::isfinite(a) || !(a > 0.0))
        throw std::invalid_argument("lln_diagnostic: exponent must be positive");
    const std::size_t n = paths.front().size();
    if (n < 100)
        throw std::invalid_argument("lln_diagnostic: sequences need at least 100 arrivals");

    double mean = 0.0;
    double m2 = 0.0;
    std::size_t count = 0;
    for (const auto& seq : paths) {
        if (seq.size() != n)
            throw std::invalid_argument("lln_diagnostic: sequences differ in length");
        const double v = detail::pow_exponent(seq.times.back() / static_cast<double>(n), a);
        ++count;
        const double delta = v - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (v - mean);
    }

    LlnSummary out;
    out.mean = mean;
    out.paths = count;
    out.std_error = count > 1 ? std::sqrt(m2 / static_cast<double>(count - 1) / static_cast<double>(count)) : 0.0;
    return out;
}

} // namespace rcar

#endif // RCAR_PROCESS_SIM_HPP
