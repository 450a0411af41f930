#ifndef RCAR_INFERENCE_HPP
#define RCAR_INFERENCE_HPP

#include "rcar/errors.hpp"
#include "rcar/stable.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace rcar {

/// Symmetric stable fit from the empirical characteristic function.
struct EcfFit {
    double alpha_hat = 0.0;
    double sigma_hat = 0.0;
    std::vector<double> t_grid; ///< probe frequencies on the sample scale
    double r2 = 0.0;
    std::size_t n = 0;
    bool boundary = false; ///< regression slope exceeded 2
};

struct GofReport {
    double ks_stat = 0.0;
    double ks_critical_1pct = 0.0;
    std::size_t n = 0;
    std::size_t n_reference = 0; ///< second sample size for two-sample tests
    bool passed = false;
    std::optional<double> ad_stat;
};

/// Asymptotic 1% critical constant of the Kolmogorov distribution.
inline constexpr double kKsCritical1pct = 1.628;
inline constexpr std::size_t kMinGofSamples = 100;
inline constexpr std::size_t kMinEcfSamples = 1000;
inline constexpr double kEcfAlphaCeiling = 2.2;

namespace detail {

inline double median_inplace(std::vector<double>& v)
{
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1)
        return upper;
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

inline std::vector<double> ecf_modulus(std::span<const double> scaled, std::span<const double> grid)
{
    std::vector<double> out;
    out.reserve(grid.size());
    const double n = static_cast<double>(scaled.size());
    for (const double t : grid) {
        double re = 0.0;
        double im = 0.0;
        for (const double y : scaled) {
            re += std::cos(t * y);
            im += std::sin(t * y);
        }
        out.push_back(std::hypot(re / n, im / n));
    }
    return out;
}

/// Which way the grid must move: +1 when some |phi| is numerically 1, -1 when numerically 0.
inline int ecf_grid_defect(std::span<const double> modulus)
{
    constexpr double eps = 1e-12;
    for (const double m : modulus) {
        if (!(m < 1.0 - eps))
            return 1;
        if (!(m > eps))
            return -1;
    }
    return 0;
}

} // namespace detail

/// Regresses log(-log|phi_hat(t)|) on log t; slope is alpha, intercept alpha log sigma.
///
/// Samples are centered at `location` and divided by their median absolute
/// value before probing t in {0.1, ..., 1.0}, which keeps |phi_hat| inside a
/// well-conditioned band whatever the scale. If |phi_hat| is numerically 1 or
/// 0 somewhere, the grid is rescaled by 10 once before giving up.
inline EcfFit ecf_fit_symmetric(std::span<const double> samples, double location)
{
    if (samples.size() < kMinEcfSamples)
        throw std::invalid_argument("ecf_fit_symmetric: need at least 1000 samples");

    std::vector<double> centered(samples.size());
    std::transform(samples.begin(), samples.end(), centered.begin(), [location](double x) { return x - location; });

    std::vector<double> magnitudes(centered.size());
    std::transform(centered.begin(), centered.end(), magnitudes.begin(), [](double x) { return std::abs(x); });
    const double spread = detail::median_inplace(magnitudes);
    if (!(spread > 0.0) || !std::isfinite(spread))
        throw DegenerateEcfError("ecf_fit_symmetric: median absolute deviation is zero");
    for (auto& x : centered)
        x /= spread;

    std::vector<double> grid;
    for (int i = 1; i <= 10; ++i)
        grid.push_back(0.1 * i);

    std::vector<double> modulus = detail::ecf_modulus(centered, grid);
    if (const int defect = detail::ecf_grid_defect(modulus); defect != 0) {
        const double factor = defect > 0 ? 10.0 : 0.1;
        for (auto& t : grid)
            t *= factor;
        modulus = detail::ecf_modulus(centered, grid);
        if (detail::ecf_grid_defect(modulus) != 0)
            throw DegenerateEcfError("ecf_fit_symmetric: |phi_hat| is numerically 0 or 1 on the probe grid");
    }

    const std::size_t m = grid.size();
    std::vector<double> u(m);
    std::vector<double> v(m);
    for (std::size_t i = 0; i < m; ++i) {
        u[i] = std::log(grid[i]);
        v[i] = std::log(-std::log(modulus[i]));
    }
    const double mu_u = std::accumulate(u.begin(), u.end(), 0.0) / static_cast<double>(m);
    const double mu_v = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(m);
    double suu = 0.0;
    double suv = 0.0;
    double svv = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        suu += (u[i] - mu_u) * (u[i] - mu_u);
        suv += (u[i] - mu_u) * (v[i] - mu_v);
        svv += (v[i] - mu_v) * (v[i] - mu_v);
    }
    const double slope = suv / suu;
    const double intercept = mu_v - slope * mu_u;
    if (!(slope > 0.0) || !std::isfinite(slope))
        throw DegenerateEcfError("ecf_fit_symmetric: non-positive regression slope");

    EcfFit fit;
    fit.n = samples.size();
    fit.boundary = slope > 2.0;
    fit.alpha_hat = std::min(slope, kEcfAlphaCeiling);
    fit.sigma_hat = spread * std::exp(intercept / slope);
    fit.r2 = svv > 0.0 ? (suv * suv) / (suu * svv) : 1.0;
    fit.t_grid.reserve(m);
    for (const double t : grid)
        fit.t_grid.push_back(t / spread);
    return fit;
}

/// round(n^(2/3)), kept inside the estimator's admissible range.
inline std::size_t default_hill_k(std::size_t n)
{
    const auto k = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(n), 2.0 / 3.0)));
    return std::clamp<std::size_t>(k, 10, n > 22 ? (n - 1) / 2 : 10);
}

/// Hill tail-index estimate from the k largest values of |x - location|:
/// 1 / mean(log(X_(i) / X_(k+1))), i = 1..k.
inline double hill_estimator(std::span<const double> samples, std::size_t k, double location = 0.0)
{
    const std::size_t n = samples.size();
    if (k < 10 || 2 * k >= n)
        throw std::invalid_argument("hill_estimator: need 10 <= k < n/2");

    std::vector<double> mag(n);
    std::transform(samples.begin(), samples.end(), mag.begin(), [location](double x) { return std::abs(x - location); });
    std::nth_element(mag.begin(), mag.begin() + static_cast<std::ptrdiff_t>(k), mag.end(), std::greater<>());
    const double threshold = mag[k];
    if (!(threshold > 0.0))
        throw std::invalid_argument("hill_estimator: non-positive magnitude among the top order statistics");

    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i)
        sum += std::log(mag[i] / threshold);
    return static_cast<double>(k) / sum;
}

/// One-sample KS against an arbitrary continuous CDF, plus Anderson-Darling.
template <class Cdf>
GofReport ks_one_sample_with(std::span<const double> samples, Cdf&& model_cdf)
{
    const std::size_t n = samples.size();
    if (n < kMinGofSamples)
        throw std::invalid_argument("ks_one_sample: need at least 100 samples");

    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i)
        f[i] = model_cdf(sorted[i]);

    const double nn = static_cast<double>(n);
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double above = static_cast<double>(i + 1) / nn - f[i];
        const double below = f[i] - static_cast<double>(i) / nn;
        d = std::max({d, above, below});
    }

    constexpr double tiny = std::numeric_limits<double>::min();
    double ad = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = std::max(f[i], tiny);
        const double hi = std::max(1.0 - f[n - 1 - i], tiny);
        ad += static_cast<double>(2 * i + 1) * (std::log(lo) + std::log(hi));
    }

    GofReport out;
    out.n = n;
    out.ks_stat = std::clamp(d, 0.0, 1.0);
    out.ks_critical_1pct = kKsCritical1pct / std::sqrt(nn);
    out.passed = out.ks_stat < out.ks_critical_1pct;
    out.ad_stat = -nn - ad / nn;
    return out;
}

/// D_n = sup |F_n(x) - F(x)| against a supported stable law; critical value 1.628 / sqrt(n).
inline GofReport ks_one_sample(std::span<const double> samples, const StableParams& params)
{
    const StableParams p = validate(params);
    return ks_one_sample_with(samples, [&p](double x) { return cdf(p, x); });
}

/// Two-sample sup-gap; critical value 1.628 sqrt((n_a + n_b) / (n_a n_b)).
inline GofReport ks_two_sample(std::span<const double> a_samples, std::span<const double> b_samples)
{
    if (a_samples.empty() || b_samples.empty())
        throw std::invalid_argument("ks_two_sample: empty sample");
    if (a_samples.size() < kMinGofSamples || b_samples.size() < kMinGofSamples)
        throw std::invalid_argument("ks_two_sample: need at least 100 samples on each side");

    std::vector<double> a(a_samples.begin(), a_samples.end());
    std::vector<double> b(b_samples.begin(), b_samples.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());

    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x)
            ++i;
        while (j < b.size() && b[j] <= x)
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    // Once one side is exhausted its ECDF is 1, and the gap only shrinks.

    GofReport out;
    out.n = a.size();
    out.n_reference = b.size();
    out.ks_stat = std::clamp(d, 0.0, 1.0);
    out.ks_critical_1pct = kKsCritical1pct * std::sqrt((na + nb) / (na * nb));
    out.passed = out.ks_stat < out.ks_critical_1pct;
    return out;
}

/// Levy scale fitted from the sample median: for S(1/2, 1, sigma, mu) the
/// median is mu + sigma / (2 erfc^-1(1/2)^2).
inline double fit_levy_scale(std::span<const double> samples, double location)
{
    if (samples.empty())
        throw std::invalid_argument("fit_levy_scale: empty sample");
    std::vector<double> copy(samples.begin(), samples.end());
    const double median = detail::median_inplace(copy);
    if (!(median > location))
        throw std::invalid_argument("fit_levy_scale: sample median must exceed the location");
    const double r = boost::math::erfc_inv(0.5);
    return 2.0 * (median - location) * r * r;
}

} // namespace rcar

#endif // RCAR_INFERENCE_HPP
