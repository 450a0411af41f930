#ifndef RCAR_INNOVATION_HPP
#define RCAR_INNOVATION_HPP

#include "rcar/random.hpp"

#include <charconv>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rcar {

enum class InnovationFamily {
    rademacher,      ///< +1 or -1 with probability 1/2
    gaussian_std,    ///< N(0, 1)
    uniform_sym,     ///< Uniform(-h, h), parameter h > 0
    exponential_pos, ///< Exponential with rate lambda > 0
    point_mass,      ///< The constant v
};

/// The law of the additive noise terms of the recursion.
///
/// Draw costs per family: rademacher, uniform_sym and exponential_pos use one
/// engine word, gaussian_std follows the polar method, point_mass uses none.
class InnovationSpec {
public:
    static InnovationSpec rademacher() { return {InnovationFamily::rademacher, 0.0}; }
    static InnovationSpec gaussian() { return {InnovationFamily::gaussian_std, 0.0}; }

    static InnovationSpec uniform_symmetric(double half_width)
    {
        if (!(half_width > 0.0) || !std::isfinite(half_width))
            throw std::invalid_argument("uniform_sym: half width must be positive and finite");
        return {InnovationFamily::uniform_sym, half_width};
    }

    static InnovationSpec exponential(double rate)
    {
        if (!(rate > 0.0) || !std::isfinite(rate))
            throw std::invalid_argument("exponential_pos: rate must be positive and finite");
        return {InnovationFamily::exponential_pos, rate};
    }

    static InnovationSpec point_mass(double value)
    {
        if (!std::isfinite(value))
            throw std::invalid_argument("point_mass: value must be finite");
        return {InnovationFamily::point_mass, value};
    }

    /// Parses "rademacher", "gaussian_std", "uniform_sym:<h>", "exponential_pos:<rate>"
    /// or "point_mass:<v>". The parameter defaults to 1 (0 for point_mass).
    static InnovationSpec parse(std::string_view text);

    InnovationFamily family() const noexcept { return family_; }
    double parameter() const noexcept { return parameter_; }

    /// point_mass(0) counts as symmetric; the other point masses do not.
    bool symmetric() const noexcept
    {
        return family_ != InnovationFamily::exponential_pos
            && !(family_ == InnovationFamily::point_mass && parameter_ != 0.0);
    }

    bool nonnegative() const noexcept
    {
        return family_ == InnovationFamily::exponential_pos
            || (family_ == InnovationFamily::point_mass && parameter_ >= 0.0);
    }

    /// True when the draws are almost surely zero.
    bool degenerate_zero() const noexcept
    {
        return family_ == InnovationFamily::point_mass && parameter_ == 0.0;
    }

    double draw(Stream& stream) const
    {
        switch (family_) {
        case InnovationFamily::rademacher: return stream.sign();
        case InnovationFamily::gaussian_std: return stream.normal();
        case InnovationFamily::uniform_sym: return parameter_ * (2.0 * stream.uniform() - 1.0);
        case InnovationFamily::exponential_pos: return stream.exponential() / parameter_;
        case InnovationFamily::point_mass: return parameter_;
        }
        return 0.0;
    }

    std::string to_string() const;

    friend bool operator==(const InnovationSpec&, const InnovationSpec&) = default;

private:
    InnovationSpec(InnovationFamily family, double parameter) : family_(family), parameter_(parameter) {}

    InnovationFamily family_;
    double parameter_;
};

inline std::string_view family_name(InnovationFamily family) noexcept
{
    switch (family) {
    case InnovationFamily::rademacher: return "rademacher";
    case InnovationFamily::gaussian_std: return "gaussian_std";
    case InnovationFamily::uniform_sym: return "uniform_sym";
    case InnovationFamily::exponential_pos: return "exponential_pos";
    case InnovationFamily::point_mass: return "point_mass";
    }
    return "unknown";
}

inline std::string InnovationSpec::to_string() const
{
    std::string out(family_name(family_));
    if (family_ == InnovationFamily::uniform_sym || family_ == InnovationFamily::exponential_pos
        || family_ == InnovationFamily::point_mass) {
        char buf[32];
        auto res = std::to_chars(buf, buf + sizeof buf, parameter_);
        out += ':';
        out.append(buf, res.ptr);
    }
    return out;
}

inline InnovationSpec InnovationSpec::parse(std::string_view text)
{
    const auto colon = text.find(':');
    const std::string_view name = text.substr(0, colon);
    bool has_param = colon != std::string_view::npos;
    double param = 0.0;
    if (has_param) {
        const std::string_view digits = text.substr(colon + 1);
        auto res = std::from_chars(digits.data(), digits.data() + digits.size(), param);
        if (res.ec != std::errc{} || res.ptr != digits.data() + digits.size())
            throw std::invalid_argument("innovation: bad parameter in '" + std::string(text) + "'");
    }

    if (name == "rademacher" && !has_param)
        return rademacher();
    if ((name == "gaussian_std" || name == "gaussian") && !has_param)
        return gaussian();
    if (name == "uniform_sym" || name == "uniform")
        return uniform_symmetric(has_param ? param : 1.0);
    if (name == "exponential_pos" || name == "exponential")
        return exponential(has_param ? param : 1.0);
    if (name == "point_mass" || name == "point")
        return point_mass(param);
    throw std::invalid_argument("innovation: unknown family '" + std::string(text) + "'");
}

/// E|eps|^p in closed form, for p in (0, 2).
inline double fractional_abs_moment(const InnovationSpec& innov, double p)
{
    if (!(p > 0.0 && p < 2.0))
        throw std::invalid_argument("fractional_abs_moment: p must lie in (0, 2)");

    const double v = innov.parameter();
    switch (innov.family()) {
    case InnovationFamily::rademacher: return 1.0;
    case InnovationFamily::uniform_sym: return std::pow(v, p) / (p + 1.0);
    case InnovationFamily::gaussian_std:
        return std::pow(2.0, p / 2.0) * std::tgamma((p + 1.0) / 2.0) / std::sqrt(std::numbers::pi);
    case InnovationFamily::exponential_pos: return std::tgamma(1.0 + p) / std::pow(v, p);
    case InnovationFamily::point_mass: return std::pow(std::abs(v), p);
    }
    throw std::invalid_argument("fractional_abs_moment: unsupported family");
}

struct MonteCarloEstimate {
    double value;
    double std_error;
};

/// Sample-mean estimate of E|eps|^p with its standard error; the fallback for
/// laws without a closed form, also used to cross-check the closed forms.
inline MonteCarloEstimate fractional_abs_moment_mc(const InnovationSpec& innov, double p, std::size_t draws,
                                                   Stream& stream)
{
    if (!(p > 0.0 && p < 2.0))
        throw std::invalid_argument("fractional_abs_moment_mc: p must lie in (0, 2)");
    if (draws < 2)
        throw std::invalid_argument("fractional_abs_moment_mc: need at least two draws");

    // Welford update
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t i = 0; i < draws; ++i) {
        const double x = std::pow(std::abs(innov.draw(stream)), p);
        const double delta = x - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (x - mean);
    }
    const double n = static_cast<double>(draws);
    return {mean, std::sqrt(m2 / (n - 1.0) / n)};
}

} // namespace rcar

#endif // RCAR_INNOVATION_HPP
