#ifndef RCAR_STABLE_HPP
#define RCAR_STABLE_HPP

#include "rcar/detail/gil_pelaez.hpp"
#include "rcar/errors.hpp"
#include "rcar/random.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rcar {

/// Parameters of a stable law S(alpha, beta, sigma, mu).
///
/// The characteristic function is
///   phi(t) = exp(i mu t - sigma^alpha |t|^alpha (1 - i beta sign(t) tan(pi alpha / 2)))
/// for alpha != 1 and exp(i mu t - sigma |t|) for alpha = 1 (beta = 0 only).
/// This is the parameterization in which the LePage series
/// sum eps_k G_k^(-1/alpha) has scale (E|eps|^alpha / c_alpha)^(1/alpha).
/// Gaussian case: alpha = 2 has variance 2 sigma^2. Converting from the
/// "0-parameterization" shifts mu by beta sigma tan(pi alpha / 2).
///
/// Supported: beta = 0 with any alpha in (0, 2], and the Levy law
/// alpha = 1/2, beta = 1. At alpha = 2 beta is ignored.
struct StableParams {
    double alpha = 2.0;
    double beta = 0.0;
    double sigma = 1.0;
    double mu = 0.0;

    friend bool operator==(const StableParams&, const StableParams&) = default;
};

inline bool is_levy(const StableParams& p) noexcept { return p.alpha == 0.5 && p.beta == 1.0; }

/// Validates `p` and returns it with beta cleared at alpha = 2.
inline StableParams validate(StableParams p)
{
    if (!(p.alpha > 0.0 && p.alpha <= 2.0))
        throw std::invalid_argument("stable: alpha must lie in (0, 2]");
    if (!(p.beta >= -1.0 && p.beta <= 1.0))
        throw std::invalid_argument("stable: beta must lie in [-1, 1]");
    if (!(p.sigma > 0.0) || !std::isfinite(p.sigma))
        throw std::invalid_argument("stable: sigma must be positive and finite");
    if (!std::isfinite(p.mu))
        throw std::invalid_argument("stable: mu must be finite");
    if (p.alpha == 2.0)
        p.beta = 0.0;
    if (p.beta != 0.0 && !is_levy(p))
        throw std::invalid_argument("stable: skewed laws are supported only for alpha = 1/2, beta = 1");
    return p;
}

inline std::complex<double> char_fn(const StableParams& params, double t)
{
    const StableParams p = validate(params);
    const double at = std::abs(t);
    if (at == 0.0)
        return {1.0, 0.0};
    const double magnitude = std::pow(p.sigma * at, p.alpha);
    double phase = p.mu * t;
    if (p.beta != 0.0)
        phase += magnitude * p.beta * (t > 0 ? 1.0 : -1.0) * std::tan(std::numbers::pi * p.alpha / 2.0);
    return std::polar(std::exp(-magnitude), phase);
}

/// Chambers-Mallows-Stuck draw: one uniform angle, then one unit exponential.
inline double sample_cms(const StableParams& params, Stream& stream)
{
    const StableParams p = validate(params);
    constexpr double pi = std::numbers::pi;
    const double v = pi * (stream.uniform() - 0.5);
    const double w = stream.exponential();
    const double a = p.alpha;

    double x;
    if (a == 1.0) {
        x = std::tan(v);
    } else if (p.beta == 0.0) {
        x = std::sin(a * v) / std::pow(std::cos(v), 1.0 / a) * std::pow(std::cos((1.0 - a) * v) / w, (1.0 - a) / a);
    } else {
        const double skew = p.beta * std::tan(pi * a / 2.0);
        const double shift = std::atan(skew) / a;
        const double scale = std::pow(1.0 + skew * skew, 1.0 / (2.0 * a));
        x = scale * std::sin(a * (v + shift)) / std::pow(std::cos(v), 1.0 / a)
            * std::pow(std::cos(v - a * (v + shift)) / w, (1.0 - a) / a);
    }
    return p.sigma * x + p.mu;
}

/// Levy closed-form scale c for S(1/2, 1, sigma, mu); the density is
/// sqrt(c / 2 pi) (x - mu)^(-3/2) exp(-c / (2 (x - mu))). Matching
/// exp(-sqrt(-2 i c t)) with the characteristic function above gives c = sigma;
/// the cross-check against Gil-Pelaez inversion lives in the tests.
inline constexpr double kLevyScalePerSigma = 1.0;

inline double levy_scale(const StableParams& p) noexcept { return kLevyScalePerSigma * p.sigma; }

namespace detail {

inline double skew_factor(const StableParams& p)
{
    return p.beta == 0.0 ? 0.0 : p.beta * std::tan(std::numbers::pi * p.alpha / 2.0);
}

inline constexpr double kCdfIntegralTolerance = 1e-10;
inline constexpr double kPdfIntegralTolerance = 1e-10;

} // namespace detail

/// F(x) = 1/2 - (1/pi) int_0^inf Im(exp(-i t x) phi(t)) / t dt by quadrature,
/// for any supported parameter set.
inline double cdf_inversion(const StableParams& params, double x)
{
    const StableParams p = validate(params);
    double z = (x - p.mu) / p.sigma;
    const double k = detail::skew_factor(p);
    const double a = p.alpha;
    bool mirrored = false;
    if (k == 0.0) {
        if (z == 0.0)
            return 0.5;
        if (z < 0.0) {
            z = -z;
            mirrored = true;
        }
    }
    const auto integrand = [a, z, k](double s) {
        const double sa = std::pow(s, a);
        return std::exp(-sa) * std::sin(s * z - k * sa) / s;
    };
    const auto res = detail::integrate_half_line(integrand, std::abs(z), a, -1.0, 1.0, detail::kCdfIntegralTolerance);
    double f = 0.5 + res.value / std::numbers::pi;
    if (mirrored)
        f = 1.0 - f;
    return std::clamp(f, 0.0, 1.0);
}

/// f(x) = (1 / pi sigma) int_0^inf Re(exp(-i s z) phi_std(s)) ds by quadrature.
inline double pdf_inversion(const StableParams& params, double x)
{
    const StableParams p = validate(params);
    const double z = (x - p.mu) / p.sigma;
    const double k = detail::skew_factor(p);
    const double a = p.alpha;
    const double zz = k == 0.0 ? std::abs(z) : z;
    const auto integrand = [a, zz, k](double s) {
        const double sa = std::pow(s, a);
        return std::exp(-sa) * std::cos(s * zz - k * sa);
    };
    const auto res = detail::integrate_half_line(integrand, std::abs(z), a, 0.0, 0.5, detail::kPdfIntegralTolerance);
    return std::max(0.0, res.value / (std::numbers::pi * p.sigma));
}

inline double cdf(const StableParams& params, double x)
{
    const StableParams p = validate(params);
    if (std::isnan(x))
        throw std::invalid_argument("stable cdf: x is NaN");
    if (std::isinf(x))
        return x > 0 ? 1.0 : 0.0;
    const double z = (x - p.mu) / p.sigma;
    if (p.alpha == 2.0)
        return 0.5 * std::erfc(-z / 2.0);
    if (p.alpha == 1.0)
        return 0.5 + std::atan(z) / std::numbers::pi;
    if (is_levy(p)) {
        if (z <= 0.0)
            return 0.0;
        return std::erfc(std::sqrt(levy_scale(p) / (2.0 * (x - p.mu))));
    }
    return cdf_inversion(p, x);
}

inline double pdf(const StableParams& params, double x)
{
    const StableParams p = validate(params);
    if (std::isnan(x))
        throw std::invalid_argument("stable pdf: x is NaN");
    if (std::isinf(x))
        return 0.0;
    constexpr double pi = std::numbers::pi;
    const double z = (x - p.mu) / p.sigma;
    if (p.alpha == 2.0)
        return std::exp(-z * z / 4.0) / (2.0 * std::sqrt(pi) * p.sigma);
    if (p.alpha == 1.0)
        return 1.0 / (pi * p.sigma * (1.0 + z * z));
    if (is_levy(p)) {
        const double d = x - p.mu;
        if (d <= 0.0)
            return 0.0;
        const double c = levy_scale(p);
        return std::sqrt(c / (2.0 * pi)) * std::pow(d, -1.5) * std::exp(-c / (2.0 * d));
    }
    return pdf_inversion(p, x);
}

/// Inverse of cdf: closed forms where they exist, otherwise an Illinois
/// false-position solve inside an expanding bracket, to 1e-8 in q.
inline double quantile(const StableParams& params, double q)
{
    const StableParams p = validate(params);
    if (!(q > 0.0 && q < 1.0))
        throw std::invalid_argument("stable quantile: q must lie in (0, 1)");
    constexpr double pi = std::numbers::pi;
    if (p.alpha == 2.0)
        return p.mu - 2.0 * p.sigma * boost::math::erfc_inv(2.0 * q);
    if (p.alpha == 1.0)
        return p.mu + p.sigma * std::tan(pi * (q - 0.5));
    if (is_levy(p)) {
        const double r = boost::math::erfc_inv(q);
        return p.mu + levy_scale(p) / (2.0 * r * r);
    }
    if (q == 0.5)
        return p.mu;

    // Symmetric law: solve on the right half and mirror.
    const double target = std::max(q, 1.0 - q);
    const double sign = q >= 0.5 ? 1.0 : -1.0;
    const StableParams standard{p.alpha, 0.0, 1.0, 0.0};
    const auto g = [&](double z) { return cdf(standard, z) - target; };

    double lo = 0.0;
    double glo = 0.5 - target;
    double hi = 1.0;
    double ghi = g(hi);
    while (ghi < 0.0) {
        lo = hi;
        glo = ghi;
        hi *= 4.0;
        if (hi > 1e300)
            throw NumericToleranceError("stable quantile: bracket expansion failed", q, hi, ghi);
        ghi = g(hi);
    }

    double best = std::abs(glo) < std::abs(ghi) ? lo : hi;
    double best_gap = std::min(std::abs(glo), std::abs(ghi));
    int side = 0;
    for (int iter = 0; iter < 300 && best_gap > 1e-11; ++iter) {
        double mid = (lo * ghi - hi * glo) / (ghi - glo);
        // Fall back to bisection when false position stalls at an end.
        if (!(mid > lo && mid < hi) || iter % 8 == 7)
            mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if (std::abs(gm) < best_gap) {
            best_gap = std::abs(gm);
            best = mid;
        }
        if (gm == 0.0)
            break;
        if ((gm < 0.0) == (glo < 0.0)) {
            lo = mid;
            glo = gm;
            if (side == -1)
                ghi *= 0.5;
            side = -1;
        } else {
            hi = mid;
            ghi = gm;
            if (side == 1)
                glo *= 0.5;
            side = 1;
        }
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi)
            break;
    }
    if (best_gap > 1e-8)
        throw NumericToleranceError("stable quantile: root solve missed tolerance", q, best, best_gap);
    return p.mu + sign * p.sigma * best;
}

} // namespace rcar

#endif // RCAR_STABLE_HPP
