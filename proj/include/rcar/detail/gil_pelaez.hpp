#ifndef RCAR_DETAIL_GIL_PELAEZ_HPP
#define RCAR_DETAIL_GIL_PELAEZ_HPP

#include "rcar/errors.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

namespace rcar::detail {

/// 15-point Kronrod rule with its embedded 7-point Gauss rule on [lo, hi].
/// Returns the Kronrod value; `error` receives |K15 - G7| on the same scale.
template <class F>
double kronrod15(const F& f, double lo, double hi, double& error)
{
    static constexpr std::array<double, 8> nodes = {
        0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
        0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
    };
    static constexpr std::array<double, 8> kronrod_weights = {
        0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
        0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
    };
    static constexpr std::array<double, 4> gauss_weights = {
        0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
        0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
    };

    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(center);
    double kronrod = kronrod_weights[7] * fc;
    double gauss = gauss_weights[3] * fc;
    for (std::size_t i = 0; i < 7; ++i) {
        const double dx = half * nodes[i];
        const double pair = f(center - dx) + f(center + dx);
        kronrod += kronrod_weights[i] * pair;
        if (i % 2 == 1)
            gauss += gauss_weights[i / 2] * pair;
    }
    error = std::abs((kronrod - gauss) * half);
    return kronrod * half;
}

/// Adaptive bisection over kronrod15 with an absolute tolerance. Accumulates
/// the error estimates of accepted intervals into `error`.
template <class F>
double adaptive_kronrod(const F& f, double lo, double hi, double tol, unsigned depth, double& error)
{
    double local_error = 0.0;
    const double estimate = kronrod15(f, lo, hi, local_error);
    if (local_error <= tol || depth == 0 || !std::isfinite(estimate)) {
        error += local_error;
        return estimate;
    }
    const double mid = 0.5 * (lo + hi);
    return adaptive_kronrod(f, lo, mid, 0.5 * tol, depth - 1, error)
        + adaptive_kronrod(f, mid, hi, 0.5 * tol, depth - 1, error);
}

/// Wynn's epsilon extrapolation of a sequence of partial sums. Returns the
/// deepest even-column entry that could be formed.
inline double wynn_epsilon(std::span<const double> sums)
{
    if (sums.empty())
        return std::numeric_limits<double>::quiet_NaN();
    std::vector<double> previous(sums.size(), 0.0);
    std::vector<double> current(sums.begin(), sums.end());
    double best = sums.back();
    for (std::size_t column = 1; current.size() > 1; ++column) {
        std::vector<double> next(current.size() - 1);
        for (std::size_t i = 0; i + 1 < current.size(); ++i) {
            const double diff = current[i + 1] - current[i];
            if (diff == 0.0 || !std::isfinite(diff))
                return best;
            next[i] = previous[i + 1] + 1.0 / diff;
        }
        previous.swap(current);
        current.swap(next);
        if (column % 2 == 0) {
            if (!std::isfinite(current.back()))
                return best;
            best = current.back();
        }
    }
    return best;
}

struct HalfLineIntegral {
    double value = 0.0;
    double error = 0.0;
    std::size_t panels = 0;
};

/// Integrates f over (0, inf) where |f(s)| <= exp(-s^alpha) * s^power
/// (power is -1 or 0) and f oscillates with angular frequency about omega.
///
/// The first panel ends at the first zero of the carrier, or at s = 1 when
/// omega < 1, and is integrated in w = sqrt(s) to absorb the s^(alpha-1)
/// behaviour at the origin. Later panels are half periods of the carrier (or
/// geometrically growing when the carrier is slow). The loop stops when the
/// remaining envelope mass is below tol or when Wynn extrapolation of the
/// panel partial sums has settled to tol.
template <class F>
HalfLineIntegral integrate_half_line(const F& f, double omega, double alpha, double power, double first_zero,
                                     double tol)
{
    constexpr double pi = std::numbers::pi;
    constexpr std::size_t max_panels = 4000;
    constexpr std::size_t window = 24;
    constexpr unsigned depth = 14;

    const bool oscillating = omega >= 1.0;
    const double half_period = oscillating ? pi / omega : std::numeric_limits<double>::infinity();
    const double panel_tol = 1e-2 * tol;

    HalfLineIntegral out;
    double quad_error = 0.0;

    const double first_end = oscillating ? first_zero * half_period : 1.0;
    const auto in_root = [&f](double w) { return 2.0 * w * f(w * w); };
    double sum = adaptive_kronrod(in_root, 0.0, std::sqrt(first_end), panel_tol, depth, quad_error);
    out.panels = 1;

    std::vector<double> partial;
    partial.reserve(64);
    partial.push_back(sum);

    const auto tail_bound = [&](double b) {
        // int_b^inf exp(-s^a) s^power ds <= b^power * Gamma(1/a, b^a) / a
        const double ba = std::pow(b, alpha);
        if (ba < 20.0)
            return std::numeric_limits<double>::infinity();
        return std::pow(b, power) * boost::math::tgamma(1.0 / alpha, ba) / alpha;
    };

    double left = first_end;
    double last_estimate = std::numeric_limits<double>::quiet_NaN();
    double last_change = std::numeric_limits<double>::infinity();
    while (out.panels < max_panels) {
        const double width = std::min(half_period, std::max(pi, left));
        const double right = left + width;
        sum += adaptive_kronrod(f, left, right, panel_tol, depth, quad_error);
        partial.push_back(sum);
        ++out.panels;
        left = right;

        const double tail = tail_bound(left);
        if (tail < tol) {
            out.value = sum;
            out.error = tail + quad_error;
            return out;
        }

        if (oscillating && partial.size() >= 8) {
            const std::size_t take = std::min(window, partial.size());
            const double estimate = wynn_epsilon(std::span<const double>(partial).last(take));
            const double change = std::abs(estimate - last_estimate);
            if (change < tol && last_change < tol) {
                out.value = estimate;
                out.error = change + quad_error;
                return out;
            }
            last_change = change;
            last_estimate = estimate;
        }
    }

    if (last_change < 1e3 * tol) {
        out.value = last_estimate;
        out.error = last_change + quad_error;
        return out;
    }
    throw NumericToleranceError("Gil-Pelaez quadrature did not converge", omega, last_estimate, last_change);
}

} // namespace rcar::detail

#endif // RCAR_DETAIL_GIL_PELAEZ_HPP
