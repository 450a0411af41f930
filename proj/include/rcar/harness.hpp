#ifndef RCAR_HARNESS_HPP
#define RCAR_HARNESS_HPP

#include "rcar/errors.hpp"
#include "rcar/inference.hpp"
#include "rcar/innovation.hpp"
#include "rcar/io.hpp"
#include "rcar/json_io.hpp"
#include "rcar/lepage.hpp"
#include "rcar/parallel.hpp"
#include "rcar/process_sim.hpp"
#include "rcar/random.hpp"
#include "rcar/stable.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rcar {

/// Named experiment presets. Each fixes (a, innovations):
///   charge: a = 2, rademacher      (symmetric, alpha = 1/2)
///   mass:   a = 2, exponential(1)  (positive, Levy limit)
///   risk:   a = 1, gaussian        (surplus trajectories)
/// The charge preset's noise family is a choice; any symmetric law with a
/// finite E|eps|^(1/2) gives the same alpha.
enum class Scenario { charge, mass, risk };

inline std::string_view to_string(Scenario s) noexcept
{
    switch (s) {
    case Scenario::charge: return "charge";
    case Scenario::mass: return "mass";
    case Scenario::risk: return "risk";
    }
    return "unknown";
}

inline Scenario parse_scenario(std::string_view name)
{
    if (name == "charge")
        return Scenario::charge;
    if (name == "mass")
        return Scenario::mass;
    if (name == "risk")
        return Scenario::risk;
    throw std::invalid_argument("unknown scenario '" + std::string(name) + "'");
}

struct ExperimentConfig {
    double a = 2.0;
    InnovationSpec innov = InnovationSpec::rademacher();
    std::size_t n_steps = 5000;
    std::size_t n_paths = 20000;
    std::size_t lepage_K = kDefaultTruncation;
    std::uint64_t seed = 0;
    std::optional<Scenario> scenario;
    std::filesystem::path output_dir;
    std::size_t hill_k = 0;       ///< 0 selects round(n_paths^(2/3))
    std::size_t export_paths = 0; ///< leading paths written in full to paths.csv
};

/// Sets (a, innov) from the preset and records it on the config.
inline ExperimentConfig apply_scenario(ExperimentConfig cfg, Scenario s)
{
    cfg.scenario = s;
    switch (s) {
    case Scenario::charge:
        cfg.a = 2.0;
        cfg.innov = InnovationSpec::rademacher();
        break;
    case Scenario::mass:
        cfg.a = 2.0;
        cfg.innov = InnovationSpec::exponential(1.0);
        break;
    case Scenario::risk:
        cfg.a = 1.0;
        cfg.innov = InnovationSpec::gaussian();
        break;
    }
    return cfg;
}

inline void validate(const ExperimentConfig& cfg)
{
    validate_exponent(cfg.a);
    if (cfg.n_steps == 0)
        throw std::invalid_argument("n_steps must be at least 1");
    if (cfg.n_paths < kMinGofSamples)
        throw std::invalid_argument("n_paths must be at least 100");
    if (cfg.lepage_K < kMinTruncation)
        throw std::invalid_argument("lepage_K must be at least 100");
    if (cfg.hill_k != 0 && (cfg.hill_k < 10 || 2 * cfg.hill_k >= cfg.n_paths))
        throw std::invalid_argument("hill_k must satisfy 10 <= k < n_paths / 2");
    if (cfg.export_paths > cfg.n_paths)
        throw std::invalid_argument("export_paths exceeds n_paths");
}

/// Result-determining fields only, keys sorted; the output directory is not part of it.
inline nlohmann::json canonical_json(const ExperimentConfig& cfg)
{
    nlohmann::json j;
    j["a"] = cfg.a;
    j["innov"] = cfg.innov;
    j["n_steps"] = cfg.n_steps;
    j["n_paths"] = cfg.n_paths;
    j["lepage_K"] = cfg.lepage_K;
    j["seed"] = cfg.seed;
    j["scenario"] = cfg.scenario ? nlohmann::json(to_string(*cfg.scenario)) : nlohmann::json(nullptr);
    j["hill_k"] = cfg.hill_k;
    j["export_paths"] = cfg.export_paths;
    return j;
}

/// 16 hex digits of FNV-1a over the canonical serialization.
inline std::string config_hash(const ExperimentConfig& cfg)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(io::fnv1a64(canonical_json(cfg).dump())));
    return buf;
}

/// Reads a JSON config. A "scenario" entry is applied first so that explicit
/// "a" or "innov" entries still override it.
inline ExperimentConfig config_from_json(const nlohmann::json& j)
{
    ExperimentConfig cfg;
    if (j.contains("scenario") && !j["scenario"].is_null())
        cfg = apply_scenario(cfg, parse_scenario(j["scenario"].get<std::string>()));
    cfg.a = j.value("a", cfg.a);
    if (j.contains("innov"))
        cfg.innov = InnovationSpec::parse(j["innov"].get<std::string>());
    cfg.n_steps = j.value("n_steps", cfg.n_steps);
    cfg.n_paths = j.value("n_paths", cfg.n_paths);
    cfg.lepage_K = j.value("lepage_K", cfg.lepage_K);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.hill_k = j.value("hill_k", cfg.hill_k);
    cfg.export_paths = j.value("export_paths", cfg.export_paths);
    if (j.contains("output_dir"))
        cfg.output_dir = j["output_dir"].get<std::string>();
    return cfg;
}

/// Where a sub-result's inputs came from.
struct SampleSource {
    StreamPurpose stream = StreamPurpose::process;
    std::uint64_t root_seed = 0;
    std::string file; ///< empty when nothing was written
};

template <class T>
struct Tracked {
    T result;
    std::vector<SampleSource> sources;
};

struct ConvergenceReport {
    ExperimentConfig config;
    std::string config_hash;

    std::optional<TheoremOnePrediction> prediction;
    std::string prediction_note; ///< why the prediction is absent
    std::optional<StableParams> cms_law;
    std::string cms_law_source; ///< "prediction" or "levy_median_fit"

    std::optional<Tracked<EcfFit>> ecf;
    std::optional<Tracked<double>> hill;
    std::optional<Tracked<GofReport>> ks_vs_prediction;
    std::optional<Tracked<GofReport>> ks_vs_lepage;
    std::optional<Tracked<GofReport>> ks_vs_cms;

    /// Sub-tests that could not produce a result, as "name: message".
    std::vector<std::string> errors;
    double runtime_seconds = 0.0;

    // Samples behind the report; written to CSV, not to the JSON.
    std::vector<double> samples;
    std::vector<double> lepage_samples;
    std::vector<double> cms_samples;

    /// Every KS verdict that was produced passed at the 1% level.
    bool gates_passed() const
    {
        for (const auto* r : {&ks_vs_prediction, &ks_vs_lepage, &ks_vs_cms})
            if (r->has_value() && !(*r)->result.passed)
                return false;
        return true;
    }
};

struct RunOptions {
    unsigned workers = 0;
    bool write_files = true;
};

inline constexpr std::string_view kSamplesFile = "samples.csv";
inline constexpr std::string_view kLepageFile = "lepage.csv";
inline constexpr std::string_view kCmsFile = "cms.csv";
inline constexpr std::string_view kPathsFile = "paths.csv";
inline constexpr std::string_view kReportFile = "report.json";

inline nlohmann::json report_to_json(const ConvergenceReport& r)
{
    auto sources = [](const std::vector<SampleSource>& list) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& s : list)
            out.push_back({{"stream", to_string(s.stream)}, {"root_seed", s.root_seed}, {"file", s.file}});
        return out;
    };
    auto tracked = [&](const auto& t) {
        nlohmann::json j;
        j["result"] = t.result;
        j["sources"] = sources(t.sources);
        return j;
    };

    nlohmann::json j;
    j["config"] = canonical_json(r.config);
    j["config_hash"] = r.config_hash;
    j["prediction"] = r.prediction ? nlohmann::json(*r.prediction) : nlohmann::json(nullptr);
    if (!r.prediction_note.empty())
        j["prediction_note"] = r.prediction_note;
    j["cms_law"] = r.cms_law ? nlohmann::json(*r.cms_law) : nlohmann::json(nullptr);
    j["cms_law_source"] = r.cms_law_source;
    j["ecf"] = r.ecf ? tracked(*r.ecf) : nlohmann::json(nullptr);
    j["hill"] = r.hill ? tracked(*r.hill) : nlohmann::json(nullptr);
    j["ks_vs_prediction"] = r.ks_vs_prediction ? tracked(*r.ks_vs_prediction) : nlohmann::json(nullptr);
    j["ks_vs_lepage"] = r.ks_vs_lepage ? tracked(*r.ks_vs_lepage) : nlohmann::json(nullptr);
    j["ks_vs_cms"] = r.ks_vs_cms ? tracked(*r.ks_vs_cms) : nlohmann::json(nullptr);
    j["errors"] = r.errors;
    j["gates_passed"] = r.gates_passed();
    j["runtime_seconds"] = r.runtime_seconds;
    return j;
}

namespace detail {

template <class Draw>
std::vector<double> draw_batch(std::size_t count, unsigned workers, std::uint64_t root, StreamPurpose purpose,
                               const Draw& draw)
{
    std::vector<double> out(count);
    parallel_for(count, workers, [&](std::size_t i) {
        Stream stream = Stream::derived(root, i, purpose);
        out[i] = draw(stream);
    });
    return out;
}

template <class Fn>
void record_failure(std::vector<std::string>& errors, std::string_view name, Fn&& fn)
{
    try {
        fn();
    } catch (const std::exception& e) {
        errors.push_back(std::string(name) + ": " + e.what());
    }
}

} // namespace detail

/// Simulates n_paths terminal values X_n / n^a and confronts them with the
/// predicted stable law (symmetric innovations), with truncated LePage draws
/// of the limit, and with CMS draws of the predicted or fitted law.
///
/// Path i of each batch uses the stream derived from (seed, i, purpose), so
/// results do not depend on the worker count. Numeric failures of individual
/// sub-tests are recorded in `errors` and do not abort the report.
inline ConvergenceReport run_convergence(const ExperimentConfig& cfg, const RunOptions& options = {})
{
    validate(cfg);
    const auto started = std::chrono::steady_clock::now();

    ConvergenceReport report;
    report.config = cfg;
    report.config_hash = config_hash(cfg);

    const bool write = options.write_files && !cfg.output_dir.empty();
    const auto file_name = [write](std::string_view name) { return write ? std::string(name) : std::string(); };
    const SampleSource process_src{StreamPurpose::process, cfg.seed, file_name(kSamplesFile)};
    const SampleSource lepage_src{StreamPurpose::lepage, cfg.seed, file_name(kLepageFile)};
    const SampleSource cms_src{StreamPurpose::cms, cfg.seed, file_name(kCmsFile)};

    report.samples = detail::draw_batch(cfg.n_paths, options.workers, cfg.seed, StreamPurpose::process,
                                        [&](Stream& s) { return simulate_terminal(cfg.a, cfg.n_steps, cfg.innov, s); });

    if (cfg.innov.symmetric()) {
        try {
            report.prediction = predict_theorem_one(cfg.a, cfg.innov);
        } catch (const std::exception& e) {
            report.prediction_note = e.what();
        }
    } else {
        report.prediction_note = "innovations are not symmetric; limit parameters are estimated from data";
    }

    const LePageConfig lepage{cfg.a, cfg.lepage_K, cfg.innov, std::nullopt};
    report.lepage_samples = detail::draw_batch(cfg.n_paths, options.workers, cfg.seed, StreamPurpose::lepage,
                                               [&](Stream& s) { return sample_limit(lepage, s); });

    if (cfg.innov.degenerate_zero()) {
        // Zero innovations leave (G_n/n)^a, whose spread vanishes as n grows:
        // the limit is the point mass at 1 and has no characteristic exponent.
        report.errors.push_back("ecf: degenerate-ecf: innovations vanish, the limit law is the point mass at 1");
    } else {
        detail::record_failure(report.errors, "ecf", [&] {
            report.ecf = Tracked<EcfFit>{ecf_fit_symmetric(report.samples, 1.0), {process_src}};
        });
    }

    detail::record_failure(report.errors, "hill", [&] {
        const std::size_t k = cfg.hill_k != 0 ? cfg.hill_k : default_hill_k(report.samples.size());
        report.hill = Tracked<double>{hill_estimator(report.samples, k, 1.0), {process_src}};
    });

    if (report.prediction) {
        detail::record_failure(report.errors, "ks_vs_prediction", [&] {
            report.ks_vs_prediction =
                Tracked<GofReport>{ks_one_sample(report.samples, report.prediction->law()), {process_src}};
        });
    }

    detail::record_failure(report.errors, "ks_vs_lepage", [&] {
        report.ks_vs_lepage =
            Tracked<GofReport>{ks_two_sample(report.samples, report.lepage_samples), {process_src, lepage_src}};
    });

    if (report.prediction) {
        report.cms_law = report.prediction->law();
        report.cms_law_source = "prediction";
    } else if (cfg.a == 2.0 && cfg.innov.nonnegative() && !cfg.innov.degenerate_zero()) {
        detail::record_failure(report.errors, "levy_fit", [&] {
            report.cms_law = StableParams{0.5, 1.0, fit_levy_scale(report.samples, 1.0), 1.0};
            report.cms_law_source = "levy_median_fit";
        });
    }
    if (report.cms_law) {
        const StableParams law = *report.cms_law;
        report.cms_samples = detail::draw_batch(cfg.n_paths, options.workers, cfg.seed, StreamPurpose::cms,
                                                [&](Stream& s) { return sample_cms(law, s); });
        detail::record_failure(report.errors, "ks_vs_cms", [&] {
            report.ks_vs_cms =
                Tracked<GofReport>{ks_two_sample(report.samples, report.cms_samples), {process_src, cms_src}};
        });
    }

    report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    if (write) {
        std::filesystem::create_directories(cfg.output_dir);
        io::write_samples_csv(cfg.output_dir / kSamplesFile, report.samples);
        io::write_samples_csv(cfg.output_dir / kLepageFile, report.lepage_samples);
        if (!report.cms_samples.empty())
            io::write_samples_csv(cfg.output_dir / kCmsFile, report.cms_samples);
        if (cfg.export_paths > 0) {
            auto out = io::open_output(cfg.output_dir / kPathsFile);
            io::CsvWriter csv(out);
            csv.header({"path", "k", "G_k", "X_k", "X_k/k^a"});
            for (std::size_t i = 0; i < cfg.export_paths; ++i) {
                Stream stream = Stream::derived(cfg.seed, i, StreamPurpose::process);
                const ProcessPath path = simulate_closed_form(cfg.a, cfg.n_steps, cfg.innov, stream);
                for (std::size_t k = 1; k <= path.steps(); ++k)
                    csv.row(static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(k), path.arrivals.at(k),
                            path.raw[k], path.normalized[k]);
            }
        }
        auto out = io::open_output(cfg.output_dir / kReportFile);
        out << report_to_json(report).dump(2) << '\n';
    }
    return report;
}

struct SurplusRow {
    std::size_t path = 0;
    std::size_t k = 0;
    double time = 0.0;    ///< G_k
    double surplus = 0.0; ///< X_k
};

struct StepQuantiles {
    std::size_t k = 0;
    double q05 = 0.0;
    double q25 = 0.0;
    double median = 0.0;
    double q75 = 0.0;
    double q95 = 0.0;
};

struct RiskReport {
    std::vector<SurplusRow> rows; ///< n_paths * horizon rows, path-major
    std::vector<StepQuantiles> summary;
};

namespace detail {

/// Linear-interpolation sample quantile of sorted data.
inline double sorted_quantile(std::span<const double> sorted, double q)
{
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

} // namespace detail

inline constexpr std::string_view kRiskPathsFile = "risk_paths.csv";
inline constexpr std::string_view kRiskSummaryFile = "risk_summary.csv";

/// Surplus trajectories of the recursion: time G_k and surplus X_k for each
/// path and step, plus per-step quantiles across paths. Uses cfg.a and
/// cfg.innov as given; the risk preset supplies a = 1 with gaussian claims.
inline RiskReport run_risk(const ExperimentConfig& cfg, std::size_t horizon, const RunOptions& options = {})
{
    validate_exponent(cfg.a);
    if (horizon == 0)
        throw std::invalid_argument("risk horizon must be at least 1");
    if (cfg.n_paths == 0)
        throw std::invalid_argument("risk needs at least one path");

    std::vector<ProcessPath> paths(cfg.n_paths);
    parallel_for(cfg.n_paths, options.workers, [&](std::size_t i) {
        Stream stream = Stream::derived(cfg.seed, i, StreamPurpose::risk);
        paths[i] = simulate_recursive(cfg.a, horizon, cfg.innov, stream);
    });

    RiskReport report;
    report.rows.reserve(cfg.n_paths * horizon);
    for (std::size_t i = 0; i < cfg.n_paths; ++i)
        for (std::size_t k = 1; k <= horizon; ++k)
            report.rows.push_back({i, k, paths[i].arrivals.at(k), paths[i].raw[k]});

    std::vector<double> column(cfg.n_paths);
    report.summary.reserve(horizon);
    for (std::size_t k = 1; k <= horizon; ++k) {
        for (std::size_t i = 0; i < cfg.n_paths; ++i)
            column[i] = paths[i].raw[k];
        std::sort(column.begin(), column.end());
        report.summary.push_back({k, detail::sorted_quantile(column, 0.05), detail::sorted_quantile(column, 0.25),
                                  detail::sorted_quantile(column, 0.5), detail::sorted_quantile(column, 0.75),
                                  detail::sorted_quantile(column, 0.95)});
    }

    if (options.write_files && !cfg.output_dir.empty()) {
        {
            auto out = io::open_output(cfg.output_dir / kRiskPathsFile);
            io::CsvWriter csv(out);
            csv.header({"path", "k", "G_k", "X_k"});
            for (const auto& r : report.rows)
                csv.row(static_cast<std::uint64_t>(r.path), static_cast<std::uint64_t>(r.k), r.time, r.surplus);
        }
        auto out = io::open_output(cfg.output_dir / kRiskSummaryFile);
        io::CsvWriter csv(out);
        csv.header({"k", "q05", "q25", "median", "q75", "q95"});
        for (const auto& s : report.summary)
            csv.row(static_cast<std::uint64_t>(s.k), s.q05, s.q25, s.median, s.q75, s.q95);
    }
    return report;
}

} // namespace rcar

#endif // RCAR_HARNESS_HPP
