#ifndef RCAR_TESTS_ORACLES_HPP
#define RCAR_TESTS_ORACLES_HPP

// Reference computations that avoid the library's own numerics. Only the
// random Stream is shared, so that draws can be replayed.

#include <rcar/innovation.hpp>
#include <rcar/random.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

/// c_alpha straight from its definition, in long double.
inline long double c_alpha_direct(long double alpha)
{
    const long double pil = std::numbers::pi_v<long double>;
    return (1.0L - alpha) / (std::tgamma(2.0L - alpha) * std::cos(pil * alpha / 2.0L));
}

/// Standard symmetric stable survival function 1 - F(z) for alpha < 1 and
/// z > 0, from the convergent series in z^-alpha.
inline double sas_survival_small_alpha(double alpha, double z)
{
    const long double pil = std::numbers::pi_v<long double>;
    long double sum = 0.0L;
    long double log_z = std::log(static_cast<long double>(z));
    for (int k = 1; k < 400; ++k) {
        const long double kl = k;
        const long double mag = std::exp(std::lgamma(kl * alpha) - std::lgamma(kl + 1.0L) - kl * alpha * log_z);
        const long double term = mag * std::sin(kl * pil * alpha / 2.0L);
        sum += (k % 2 == 1) ? term : -term;
        if (mag < 1e-22L && k > 10)
            break;
    }
    return static_cast<double>(sum / pil);
}

/// Standard symmetric stable density for alpha < 1, z > 0.
inline double sas_pdf_small_alpha(double alpha, double z)
{
    const long double pil = std::numbers::pi_v<long double>;
    long double sum = 0.0L;
    long double log_z = std::log(static_cast<long double>(z));
    for (int k = 1; k < 400; ++k) {
        const long double kl = k;
        const long double mag =
            std::exp(std::lgamma(kl * alpha + 1.0L) - std::lgamma(kl + 1.0L) - (kl * alpha + 1.0L) * log_z);
        const long double term = mag * std::sin(kl * pil * alpha / 2.0L);
        sum += (k % 2 == 1) ? term : -term;
        if (mag < 1e-22L && k > 10)
            break;
    }
    return static_cast<double>(sum / pil);
}

/// Standard symmetric stable CDF for alpha > 1 from the power series at the origin.
inline double sas_cdf_large_alpha(double alpha, double z)
{
    const long double pil = std::numbers::pi_v<long double>;
    long double sum = 0.0L;
    const long double az = std::abs(static_cast<long double>(z));
    if (az == 0.0L)
        return 0.5;
    for (int k = 0; k < 400; ++k) {
        const long double m = 2.0L * k + 1.0L;
        const long double mag = std::exp(std::lgamma(m / alpha) - std::lgamma(m + 1.0L) + m * std::log(az));
        sum += (k % 2 == 0) ? mag : -mag;
        if (mag < 1e-22L && k > 5)
            break;
    }
    const long double half = sum / (pil * alpha);
    return static_cast<double>(z > 0 ? 0.5L + half : 0.5L - half);
}

/// Standard symmetric stable density for alpha > 1.
inline double sas_pdf_large_alpha(double alpha, double z)
{
    const long double pil = std::numbers::pi_v<long double>;
    long double sum = 0.0L;
    const long double az = std::abs(static_cast<long double>(z));
    for (int k = 0; k < 400; ++k) {
        const long double m = 2.0L * k;
        const long double mag = std::exp(std::lgamma((m + 1.0L) / alpha) - std::lgamma(m + 1.0L) +
                                         (k == 0 ? 0.0L : m * std::log(az)));
        sum += (k % 2 == 0) ? mag : -mag;
        if (mag < 1e-22L && k > 5)
            break;
        if (az == 0.0L)
            break;
    }
    return static_cast<double>(sum / (pil * alpha));
}

inline double gaussian_var2_cdf(double z) { return 0.5 * std::erfc(-z / 2.0); }
inline double cauchy_cdf(double z) { return 0.5 + std::atan(z) / pi; }

/// Levy law with location 0 and scale c.
inline double levy_cdf(double c, double x) { return x <= 0 ? 0.0 : std::erfc(std::sqrt(c / (2.0 * x))); }
inline double levy_pdf(double c, double x)
{
    return x <= 0 ? 0.0 : std::sqrt(c / (2.0 * pi)) * std::pow(x, -1.5) * std::exp(-c / (2.0 * x));
}

/// X_n from the unrolled sum, replaying a stream with the documented draw order
/// (increment, then innovation, per step).
struct UnrolledPath {
    long double g_n = 0.0L;
    long double x_n = 0.0L;
};

inline UnrolledPath unrolled(double a, std::size_t n, const rcar::InnovationSpec& innov, std::uint64_t seed)
{
    rcar::Stream s(seed);
    std::vector<long double> g(n + 1);
    std::vector<long double> eps(n + 1);
    g[0] = 0.0L;
    for (std::size_t k = 1; k <= n; ++k) {
        g[k] = g[k - 1] + s.exponential();
        eps[k] = innov.draw(s);
    }
    const long double al = a;
    long double x = std::pow(g[n], al);
    for (std::size_t k = 1; k <= n; ++k)
        x += std::pow(g[n] / g[k], al) * eps[k];
    return {g[n], x};
}

/// O(n^2) one-sample KS: for every sample point count directly how many are below/at it.
inline double brute_ks(std::span<const double> xs, const std::function<double(double)>& cdf)
{
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (const double x : xs) {
        std::size_t below = 0;
        std::size_t at_or_below = 0;
        for (const double y : xs) {
            below += y < x;
            at_or_below += y <= x;
        }
        const double f = cdf(x);
        d = std::max({d, static_cast<double>(at_or_below) / n - f, f - static_cast<double>(below) / n});
    }
    return d;
}

/// O((n+m)^2) two-sample KS over the pooled points.
inline double brute_ks2(std::span<const double> a, std::span<const double> b)
{
    auto frac_le = [](std::span<const double> v, double x) {
        return static_cast<double>(std::count_if(v.begin(), v.end(), [x](double y) { return y <= x; })) /
               static_cast<double>(v.size());
    };
    double d = 0.0;
    for (const auto* v : {&a, &b})
        for (const double x : *v)
            d = std::max(d, std::abs(frac_le(a, x) - frac_le(b, x)));
    return d;
}

/// Composite Simpson rule with an even number of intervals.
inline double simpson(const std::function<double(double)>& f, double lo, double hi, int intervals)
{
    if (intervals % 2)
        ++intervals;
    const double h = (hi - lo) / intervals;
    double s = f(lo) + f(hi);
    for (int i = 1; i < intervals; ++i)
        s += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

/// Pareto(alpha) on [1, inf) by inversion.
inline std::vector<double> pareto(double alpha, std::size_t n, std::uint64_t seed)
{
    rcar::Stream s(seed);
    std::vector<double> out(n);
    for (auto& x : out)
        x = std::pow(s.uniform(), -1.0 / alpha);
    return out;
}

inline double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

inline double sample_quantile(std::vector<double> v, double q)
{
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto i = static_cast<std::size_t>(pos);
    const std::size_t j = std::min(i + 1, v.size() - 1);
    return v[i] + (pos - static_cast<double>(i)) * (v[j] - v[i]);
}

} // namespace oracle

#endif
