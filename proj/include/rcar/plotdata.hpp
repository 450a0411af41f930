#ifndef RCAR_PLOTDATA_HPP
#define RCAR_PLOTDATA_HPP

#include "rcar/io.hpp"
#include "rcar/stable.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace rcar {

enum class PlotKind { histogram, qq, ecdf_overlay };

inline PlotKind parse_plot_kind(std::string_view name)
{
    if (name == "histogram")
        return PlotKind::histogram;
    if (name == "qq")
        return PlotKind::qq;
    if (name == "ecdf-overlay" || name == "ecdf_overlay")
        return PlotKind::ecdf_overlay;
    throw std::invalid_argument("unknown plot kind '" + std::string(name) + "'");
}

struct HistogramBin {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;
};

inline constexpr std::size_t kMaxHistogramBins = 1000;

/// Freedman-Diaconis bins (width 2 IQR n^(-1/3)) spanning [min, max]. The bin
/// count is capped at max_bins; heavy tails would otherwise ask for millions.
/// A sample without spread gets a single bin.
inline std::vector<HistogramBin> histogram(std::span<const double> samples, std::size_t max_bins = kMaxHistogramBins)
{
    if (samples.empty())
        throw std::invalid_argument("histogram: empty sample");
    if (max_bins == 0)
        throw std::invalid_argument("histogram: max_bins must be positive");

    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double lo = sorted.front();
    const double hi = sorted.back();
    const double n = static_cast<double>(sorted.size());
    const auto at = [&](double q) {
        const double pos = q * (n - 1.0);
        const auto i = static_cast<std::size_t>(pos);
        const std::size_t j = std::min(i + 1, sorted.size() - 1);
        return sorted[i] + (pos - static_cast<double>(i)) * (sorted[j] - sorted[i]);
    };
    const double width = 2.0 * (at(0.75) - at(0.25)) / std::cbrt(n);
    const double range = hi - lo;

    std::size_t bins = 1;
    if (range > 0.0 && width > 0.0)
        bins = std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(range / width)), 1, max_bins);

    std::vector<HistogramBin> out(bins);
    const double step = range / static_cast<double>(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        out[b].lo = lo + step * static_cast<double>(b);
        out[b].hi = b + 1 == bins ? hi : lo + step * static_cast<double>(b + 1);
    }
    for (const double x : sorted) {
        std::size_t b = range > 0.0 ? static_cast<std::size_t>((x - lo) / step) : 0;
        out[std::min(b, bins - 1)].count += 1;
    }
    return out;
}

struct QqPair {
    double model = 0.0;
    double sample = 0.0;
};

/// Sorted sample against model quantiles at (i + 1/2) / n.
inline std::vector<QqPair> qq_pairs(std::span<const double> samples, const StableParams& model)
{
    if (samples.empty())
        throw std::invalid_argument("qq_pairs: empty sample");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    std::vector<QqPair> out(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i)
        out[i] = {quantile(model, (static_cast<double>(i) + 0.5) / n), sorted[i]};
    return out;
}

struct EcdfRow {
    double x = 0.0;
    double ecdf_before = 0.0; ///< (i - 1) / n, the left limit at x
    double ecdf = 0.0;        ///< i / n
    double model_cdf = 0.0;
    double gap = 0.0; ///< max(ecdf - model, model - ecdf_before)
};

/// Empirical against model CDF at each sorted sample; max(gap) is the KS statistic.
inline std::vector<EcdfRow> ecdf_overlay(std::span<const double> samples, const StableParams& model)
{
    if (samples.empty())
        throw std::invalid_argument("ecdf_overlay: empty sample");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    std::vector<EcdfRow> out(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        EcdfRow& r = out[i];
        r.x = sorted[i];
        r.ecdf_before = static_cast<double>(i) / n;
        r.ecdf = static_cast<double>(i + 1) / n;
        r.model_cdf = cdf(model, r.x);
        r.gap = std::max(r.ecdf - r.model_cdf, r.model_cdf - r.ecdf_before);
    }
    return out;
}

/// Writes the requested table as CSV. qq and ecdf-overlay need a model law.
inline void emit_plot_data(std::span<const double> samples, PlotKind kind, const std::optional<StableParams>& model,
                           std::ostream& out)
{
    if (samples.empty())
        throw std::invalid_argument("emit_plot_data: empty sample");
    io::CsvWriter csv(out);
    switch (kind) {
    case PlotKind::histogram: {
        csv.header({"bin_lo", "bin_hi", "count"});
        for (const auto& b : histogram(samples))
            csv.row(b.lo, b.hi, static_cast<std::uint64_t>(b.count));
        return;
    }
    case PlotKind::qq: {
        if (!model)
            throw std::invalid_argument("qq plot data needs a model law");
        csv.header({"model_quantile", "sample_quantile"});
        for (const auto& p : qq_pairs(samples, *model))
            csv.row(p.model, p.sample);
        return;
    }
    case PlotKind::ecdf_overlay: {
        if (!model)
            throw std::invalid_argument("ecdf-overlay plot data needs a model law");
        csv.header({"x", "ecdf_before", "ecdf", "model_cdf", "gap"});
        for (const auto& r : ecdf_overlay(samples, *model))
            csv.row(r.x, r.ecdf_before, r.ecdf, r.model_cdf, r.gap);
        return;
    }
    }
}

} // namespace rcar

#endif // RCAR_PLOTDATA_HPP
