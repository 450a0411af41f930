#ifndef RCAR_LEPAGE_HPP
#define RCAR_LEPAGE_HPP

#include "rcar/errors.hpp"
#include "rcar/innovation.hpp"
#include "rcar/process_sim.hpp"
#include "rcar/random.hpp"
#include "rcar/stable.hpp"

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

namespace rcar {

/// c_alpha = (1 - alpha) / (Gamma(2 - alpha) cos(pi alpha / 2)), with c_1 = 2 / pi.
///
/// cos(pi alpha / 2) is evaluated as sin(pi (1 - alpha) / 2) so the removable
/// singularity at alpha = 1 cancels without loss of precision.
inline double c_alpha(double alpha)
{
    if (!(alpha > 0.0 && alpha < 2.0))
        throw std::invalid_argument("c_alpha: alpha must lie in (0, 2)");
    if (alpha == 1.0)
        return 2.0 / std::numbers::pi;
    const double gap = 1.0 - alpha;
    return gap / (std::tgamma(2.0 - alpha) * std::sin(std::numbers::pi * gap / 2.0));
}

/// Predicted limit law of X_n / n^a for symmetric innovations.
struct TheoremOnePrediction {
    double alpha = 0.0;
    double beta = 0.0;
    double sigma = 0.0;
    double mu = 1.0;
    double c_alpha = 0.0;
    double frac_moment = 0.0; ///< E|eps|^alpha

    StableParams law() const { return {alpha, beta, sigma, mu}; }
};

/// alpha = 1/a, beta = 0, mu = 1 and sigma = (E|eps|^alpha / c_alpha)^a.
///
/// Throws TheoremHypothesisViolation for non-symmetric innovations; their limit
/// is stable too, but its parameters are only estimated from data here.
/// Innovations that vanish identically have a point-mass limit at 1 and are
/// rejected with std::invalid_argument.
inline TheoremOnePrediction predict_theorem_one(double a, const InnovationSpec& innov)
{
    validate_exponent(a);
    if (!innov.symmetric())
        throw TheoremHypothesisViolation("scale prediction requires symmetric innovations, got " + innov.to_string());

    TheoremOnePrediction out;
    out.alpha = 1.0 / a;
    out.beta = 0.0;
    out.mu = 1.0;
    out.c_alpha = c_alpha(out.alpha);
    out.frac_moment = fractional_abs_moment(innov, out.alpha);
    if (!(out.frac_moment > 0.0))
        throw std::invalid_argument("degenerate innovations: the limit is the point mass at 1");
    out.sigma = std::pow(out.frac_moment / out.c_alpha, a);
    return out;
}

/// Truncated LePage series sum_{k<=K} eps_k / G_k^a.
struct LePageConfig {
    double a = 2.0;
    std::size_t K = 10000;
    InnovationSpec innov = InnovationSpec::rademacher();
    /// When set, sampling refuses K whose tail bound exceeds this value.
    std::optional<double> tolerance;

    double alpha() const noexcept { return 1.0 / a; }
};

inline constexpr std::size_t kMinTruncation = 100;
inline constexpr std::size_t kDefaultTruncation = 10000;

/// Heuristic size of the omitted tail, K^-(a - 1/2): the standard deviation of
/// sum_{k>K} eps_k / G_k^a scales like this when E eps^2 is finite.
inline double truncation_tail_bound(double a, std::size_t K)
{
    return std::pow(static_cast<double>(K), -(a - 0.5));
}

/// max(10^4, ceil(tol^(-1 / (a - 1/2)))).
inline std::size_t default_truncation(double a, double tol)
{
    validate_exponent(a);
    if (!(tol > 0.0 && tol < 1.0))
        throw std::invalid_argument("truncation tolerance must lie in (0, 1)");
    const double needed = std::ceil(std::pow(tol, -1.0 / (a - 0.5)));
    if (needed > 1e12)
        throw TruncationError("truncation tolerance needs more than 1e12 terms");
    return std::max(kDefaultTruncation, static_cast<std::size_t>(needed));
}

inline void validate(const LePageConfig& cfg)
{
    validate_exponent(cfg.a);
    if (cfg.K < kMinTruncation)
        throw std::invalid_argument("LePage truncation K must be at least 100");
    if (cfg.tolerance) {
        const double tol = *cfg.tolerance;
        if (!(tol > 0.0))
            throw std::invalid_argument("LePage tolerance must be positive");
        if (truncation_tail_bound(cfg.a, cfg.K) > tol)
            throw TruncationError("K = " + std::to_string(cfg.K) + " is too small for tolerance "
                                  + std::to_string(tol));
    }
}

/// One draw of the truncated series on a fresh arrival sequence. Draw order
/// per term matches the process simulators: exponential increment, then eps.
inline double sample_lepage(const LePageConfig& cfg, Stream& stream)
{
    validate(cfg);
    double arrival = 0.0;
    double sum = 0.0;
    for (std::size_t k = 0; k < cfg.K; ++k) {
        arrival += stream.exponential();
        const double eps = cfg.innov.draw(stream);
        sum += eps / detail::pow_exponent(arrival, cfg.a);
    }
    return sum;
}

/// 1 + sample_lepage: a draw from the (truncated) limit law of X_n / n^a.
inline double sample_limit(const LePageConfig& cfg, Stream& stream) { return 1.0 + sample_lepage(cfg, stream); }

} // namespace rcar

#endif // RCAR_LEPAGE_HPP
