// Command-line front end for simulation, stable-law numerics and the
// convergence experiments.
//
// Exit codes: 0 success (all statistical gates passed), 1 runtime or usage
// error, 2 a statistical gate failed.

#include "rcar/rcar.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitGateFailed = 2;

/// Output target: a file when a path is given, stdout otherwise.
class Sink {
public:
    explicit Sink(const std::string& path)
    {
        if (!path.empty() && path != "-")
            file_ = rcar::io::open_output(path);
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::optional<std::ofstream> file_;
};

struct StableOptions {
    double alpha = 2.0;
    double beta = 0.0;
    double sigma = 1.0;
    double mu = 0.0;

    rcar::StableParams params() const { return rcar::validate(rcar::StableParams{alpha, beta, sigma, mu}); }
};

void add_stable_options(CLI::App* app, StableOptions& opts, bool required)
{
    auto* alpha = app->add_option("--alpha", opts.alpha, "Index of stability in (0, 2]");
    if (required)
        alpha->required();
    app->add_option("--beta", opts.beta, "Skewness (0, or 1 with alpha = 0.5)");
    app->add_option("--sigma", opts.sigma, "Scale");
    app->add_option("--mu", opts.mu, "Location");
}

nlohmann::json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config " + path);
    return nlohmann::json::parse(in);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Random-coefficient autoregression: simulation, stable limits and convergence checks"};
    app.require_subcommand(1);
    int exit_code = kExitOk;

    // simulate
    struct {
        std::optional<std::string> scenario;
        double a = 2.0;
        std::size_t n = 1000;
        std::string innov = "rademacher";
        std::uint64_t seed = 0;
        std::uint64_t path_index = 0;
        std::string method = "recursive";
        std::string format = "csv";
        std::string out;
    } sim;
    auto* simulate = app.add_subcommand("simulate", "Simulate one path of the recursion");
    simulate->add_option("--scenario", sim.scenario, "Preset: charge, mass or risk");
    simulate->add_option("--a", sim.a, "Exponent a > 1/2");
    simulate->add_option("--n", sim.n, "Number of steps");
    simulate->add_option("--innov", sim.innov, "Innovation law, e.g. rademacher, gaussian_std, uniform_sym:1");
    simulate->add_option("--seed", sim.seed, "Root seed")->required();
    simulate->add_option("--path-index", sim.path_index, "Index of the derived path stream");
    simulate->add_option("--method", sim.method, "recursive or closed-form")
        ->check(CLI::IsMember({"recursive", "closed-form"}));
    simulate->add_option("--format", sim.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    simulate->add_option("--out", sim.out, "Output file (default stdout)");
    simulate->callback([&] {
        double a = sim.a;
        rcar::InnovationSpec innov = rcar::InnovationSpec::parse(sim.innov);
        if (sim.scenario) {
            const auto cfg = rcar::apply_scenario({}, rcar::parse_scenario(*sim.scenario));
            if (simulate->count("--a") == 0)
                a = cfg.a;
            if (simulate->count("--innov") == 0)
                innov = cfg.innov;
        }
        rcar::Stream stream = rcar::Stream::derived(sim.seed, sim.path_index, rcar::StreamPurpose::process);
        const rcar::ProcessPath path = sim.method == "recursive" ? rcar::simulate_recursive(a, sim.n, innov, stream)
                                                                 : rcar::simulate_closed_form(a, sim.n, innov, stream);
        Sink sink(sim.out);
        if (sim.format == "csv")
            rcar::io::write_path_csv(sink.stream(), path);
        else
            sink.stream() << rcar::path_to_json(path).dump(2) << '\n';
    });

    // lepage
    struct {
        std::optional<std::string> scenario;
        double a = 2.0;
        std::size_t K = rcar::kDefaultTruncation;
        std::string innov = "rademacher";
        std::size_t draws = 10000;
        std::uint64_t seed = 0;
        std::optional<double> tol;
        bool limit = false;
        std::string out = "lepage.csv";
        std::string sidecar;
        unsigned workers = 0;
    } lp;
    auto* lepage = app.add_subcommand("lepage", "Draw truncated LePage series samples");
    lepage->add_option("--scenario", lp.scenario, "Preset: charge, mass or risk");
    lepage->add_option("--a", lp.a, "Exponent a > 1/2");
    lepage->add_option("--K", lp.K, "Number of series terms");
    lepage->add_option("--innov", lp.innov, "Innovation law");
    lepage->add_option("--draws", lp.draws, "Number of draws");
    lepage->add_option("--seed", lp.seed, "Root seed")->required();
    lepage->add_option("--tol", lp.tol, "Reject K whose tail bound exceeds this");
    lepage->add_flag("--limit", lp.limit, "Add the unit location (draws of 1 + Z)");
    lepage->add_option("--out", lp.out, "Samples CSV");
    lepage->add_option("--sidecar", lp.sidecar, "JSON sidecar (default: <out>.json)");
    lepage->add_option("--workers", lp.workers, "Worker threads (0 = all cores)");
    lepage->callback([&] {
        rcar::LePageConfig cfg{lp.a, lp.K, rcar::InnovationSpec::parse(lp.innov), lp.tol};
        if (lp.scenario) {
            const auto preset = rcar::apply_scenario({}, rcar::parse_scenario(*lp.scenario));
            if (lepage->count("--a") == 0)
                cfg.a = preset.a;
            if (lepage->count("--innov") == 0)
                cfg.innov = preset.innov;
        }
        rcar::validate(cfg);
        std::vector<double> samples(lp.draws);
        rcar::parallel_for(lp.draws, lp.workers, [&](std::size_t i) {
            rcar::Stream stream = rcar::Stream::derived(lp.seed, i, rcar::StreamPurpose::lepage);
            samples[i] = lp.limit ? rcar::sample_limit(cfg, stream) : rcar::sample_lepage(cfg, stream);
        });
        rcar::io::write_samples_csv(lp.out, samples);

        nlohmann::json side;
        side["a"] = cfg.a;
        side["alpha"] = cfg.alpha();
        side["K"] = cfg.K;
        side["innov"] = cfg.innov;
        side["seed"] = lp.seed;
        side["draws"] = lp.draws;
        side["limit"] = lp.limit;
        side["tolerance"] = cfg.tolerance ? nlohmann::json(*cfg.tolerance) : nlohmann::json(nullptr);
        side["tail_bound"] = rcar::truncation_tail_bound(cfg.a, cfg.K);
        side["samples_file"] = lp.out;
        try {
            side["prediction"] = rcar::predict_theorem_one(cfg.a, cfg.innov);
        } catch (const std::exception& e) {
            side["prediction"] = nullptr;
            side["prediction_note"] = e.what();
        }
        auto out = rcar::io::open_output(lp.sidecar.empty() ? lp.out + ".json" : lp.sidecar);
        out << side.dump(2) << '\n';
    });

    // stable sample|cdf|pdf|tabulate
    auto* stable = app.add_subcommand("stable", "Stable-law sampling and numerics");
    stable->require_subcommand(1);
    StableOptions st;
    struct {
        std::size_t count = 1000;
        std::uint64_t seed = 0;
        std::string out;
        std::vector<double> xs;
        double from = -10.0;
        double to = 10.0;
        std::size_t points = 201;
    } sto;

    auto* st_sample = stable->add_subcommand("sample", "Chambers-Mallows-Stuck draws");
    add_stable_options(st_sample, st, true);
    st_sample->add_option("--count", sto.count, "Number of draws");
    st_sample->add_option("--seed", sto.seed, "Root seed")->required();
    st_sample->add_option("--out", sto.out, "Output CSV (default stdout)");
    st_sample->callback([&] {
        const auto p = st.params();
        std::vector<double> samples(sto.count);
        for (std::size_t i = 0; i < sto.count; ++i) {
            rcar::Stream stream = rcar::Stream::derived(sto.seed, i, rcar::StreamPurpose::cms);
            samples[i] = rcar::sample_cms(p, stream);
        }
        Sink sink(sto.out);
        rcar::io::write_samples_csv(sink.stream(), samples);
    });

    for (const char* which : {"cdf", "pdf"}) {
        auto* sub = stable->add_subcommand(which, std::string("Evaluate the ") + which);
        add_stable_options(sub, st, true);
        sub->add_option("--x", sto.xs, "Evaluation points")->required();
        const bool is_cdf = std::string(which) == "cdf";
        sub->callback([&, is_cdf] {
            const auto p = st.params();
            rcar::io::CsvWriter csv(std::cout);
            csv.header({"x", is_cdf ? "cdf" : "pdf"});
            for (const double x : sto.xs)
                csv.row(x, is_cdf ? rcar::cdf(p, x) : rcar::pdf(p, x));
        });
    }

    auto* st_tab = stable->add_subcommand("tabulate", "Tabulate pdf and cdf on a uniform grid");
    add_stable_options(st_tab, st, true);
    st_tab->add_option("--from", sto.from, "Grid start");
    st_tab->add_option("--to", sto.to, "Grid end");
    st_tab->add_option("--points", sto.points, "Number of grid points")->check(CLI::Range(2, 10000000));
    st_tab->add_option("--out", sto.out, "Output CSV (default stdout)");
    st_tab->callback([&] {
        const auto p = st.params();
        Sink sink(sto.out);
        rcar::io::CsvWriter csv(sink.stream());
        csv.header({"x", "pdf", "cdf"});
        const double step = (sto.to - sto.from) / static_cast<double>(sto.points - 1);
        for (std::size_t i = 0; i < sto.points; ++i) {
            const double x = sto.from + step * static_cast<double>(i);
            csv.row(x, rcar::pdf(p, x), rcar::cdf(p, x));
        }
    });

    // estimate
    struct {
        std::string in;
        double location = 1.0;
        std::size_t hill_k = 0;
        std::string out;
    } est;
    StableOptions est_model;
    auto* estimate = app.add_subcommand("estimate", "Fit stable parameters and test goodness of fit");
    estimate->add_option("--in", est.in, "Samples CSV")->required();
    estimate->add_option("--location", est.location, "Centering location");
    estimate->add_option("--hill-k", est.hill_k, "Hill top-order count (default n^(2/3))");
    add_stable_options(estimate, est_model, false);
    estimate->add_option("--out", est.out, "Report JSON (default stdout)");
    estimate->callback([&] {
        const auto samples = rcar::io::read_samples_csv(est.in);
        nlohmann::json report;
        report["input"] = est.in;
        report["n"] = samples.size();
        report["location"] = est.location;
        try {
            report["ecf"] = rcar::ecf_fit_symmetric(samples, est.location);
        } catch (const std::exception& e) {
            report["ecf"] = nullptr;
            report["ecf_error"] = e.what();
        }
        try {
            const std::size_t k = est.hill_k != 0 ? est.hill_k : rcar::default_hill_k(samples.size());
            report["hill"] = rcar::hill_estimator(samples, k, est.location);
            report["hill_k"] = k;
        } catch (const std::exception& e) {
            report["hill"] = nullptr;
            report["hill_error"] = e.what();
        }
        if (estimate->count("--alpha") != 0) {
            const auto p = est_model.params();
            const auto gof = rcar::ks_one_sample(samples, p);
            report["model"] = p;
            report["ks"] = gof;
            if (!gof.passed)
                exit_code = kExitGateFailed;
        }
        Sink sink(est.out);
        sink.stream() << report.dump(2) << '\n';
    });

    // converge
    struct {
        std::string config;
        std::optional<std::string> scenario;
        std::optional<double> a;
        std::optional<std::string> innov;
        std::optional<std::size_t> n_steps;
        std::optional<std::size_t> n_paths;
        std::optional<std::size_t> lepage_K;
        std::optional<std::uint64_t> seed;
        std::optional<std::size_t> hill_k;
        std::optional<std::size_t> export_paths;
        std::optional<std::string> out_dir;
        unsigned workers = 0;
    } conv;
    auto* converge = app.add_subcommand("converge", "Run the convergence experiment");
    converge->add_option("--config", conv.config, "JSON config file");
    converge->add_option("--scenario", conv.scenario, "Preset: charge, mass or risk");
    converge->add_option("--a", conv.a, "Exponent a > 1/2");
    converge->add_option("--innov", conv.innov, "Innovation law");
    converge->add_option("--n-steps", conv.n_steps, "Steps per path");
    converge->add_option("--n-paths", conv.n_paths, "Number of paths");
    converge->add_option("--lepage-K", conv.lepage_K, "LePage truncation");
    converge->add_option("--seed", conv.seed, "Root seed (required here or in the config)");
    converge->add_option("--hill-k", conv.hill_k, "Hill top-order count");
    converge->add_option("--export-paths", conv.export_paths, "Leading paths to export in full");
    converge->add_option("--out-dir", conv.out_dir, "Output directory");
    converge->add_option("--workers", conv.workers, "Worker threads (0 = all cores)");
    converge->callback([&] {
        nlohmann::json file = conv.config.empty() ? nlohmann::json::object() : read_json_file(conv.config);
        if (!conv.seed && !file.contains("seed"))
            throw std::runtime_error("converge needs an explicit seed (--seed or \"seed\" in the config)");
        rcar::ExperimentConfig cfg = rcar::config_from_json(file);
        if (conv.scenario)
            cfg = rcar::apply_scenario(cfg, rcar::parse_scenario(*conv.scenario));
        if (conv.a)
            cfg.a = *conv.a;
        if (conv.innov)
            cfg.innov = rcar::InnovationSpec::parse(*conv.innov);
        if (conv.n_steps)
            cfg.n_steps = *conv.n_steps;
        if (conv.n_paths)
            cfg.n_paths = *conv.n_paths;
        if (conv.lepage_K)
            cfg.lepage_K = *conv.lepage_K;
        if (conv.seed)
            cfg.seed = *conv.seed;
        if (conv.hill_k)
            cfg.hill_k = *conv.hill_k;
        if (conv.export_paths)
            cfg.export_paths = *conv.export_paths;
        if (conv.out_dir)
            cfg.output_dir = *conv.out_dir;
        if (cfg.output_dir.empty())
            cfg.output_dir = "converge_out";

        const auto report = rcar::run_convergence(cfg, {conv.workers, true});
        std::cout << rcar::report_to_json(report).dump(2) << '\n';
        if (!report.gates_passed())
            exit_code = kExitGateFailed;
    });

    // risk
    struct {
        std::string config;
        std::optional<double> a;
        std::optional<std::string> innov;
        std::size_t paths = 100;
        std::size_t horizon = 100;
        std::uint64_t seed = 0;
        std::string out_dir = "risk_out";
        unsigned workers = 0;
    } rk;
    auto* risk = app.add_subcommand("risk", "Surplus trajectories under the risk preset");
    risk->add_option("--config", rk.config, "JSON config file");
    risk->add_option("--a", rk.a, "Override the preset exponent");
    risk->add_option("--innov", rk.innov, "Override the preset claim law");
    risk->add_option("--paths", rk.paths, "Number of trajectories");
    risk->add_option("--horizon", rk.horizon, "Steps per trajectory");
    risk->add_option("--seed", rk.seed, "Root seed")->required();
    risk->add_option("--out-dir", rk.out_dir, "Output directory");
    risk->add_option("--workers", rk.workers, "Worker threads (0 = all cores)");
    risk->callback([&] {
        nlohmann::json file = rk.config.empty() ? nlohmann::json::object() : read_json_file(rk.config);
        rcar::ExperimentConfig cfg = rcar::apply_scenario(rcar::config_from_json(file), rcar::Scenario::risk);
        if (rk.a)
            cfg.a = *rk.a;
        if (rk.innov)
            cfg.innov = rcar::InnovationSpec::parse(*rk.innov);
        cfg.n_paths = rk.paths;
        cfg.seed = rk.seed;
        cfg.output_dir = rk.out_dir;
        const auto report = rcar::run_risk(cfg, rk.horizon, {rk.workers, true});
        std::cout << "wrote " << report.rows.size() << " surplus rows and " << report.summary.size()
                  << " step summaries to " << cfg.output_dir.string() << '\n';
    });

    // plotdata
    struct {
        std::string in;
        std::string kind = "histogram";
        std::string out;
    } pd;
    StableOptions pd_model;
    auto* plotdata = app.add_subcommand("plotdata", "Histogram, QQ or ECDF-overlay tables");
    plotdata->add_option("--in", pd.in, "Samples CSV")->required();
    plotdata->add_option("--kind", pd.kind, "histogram, qq or ecdf-overlay")
        ->check(CLI::IsMember({"histogram", "qq", "ecdf-overlay"}));
    add_stable_options(plotdata, pd_model, false);
    plotdata->add_option("--out", pd.out, "Output CSV (default stdout)");
    plotdata->callback([&] {
        const auto samples = rcar::io::read_samples_csv(pd.in);
        std::optional<rcar::StableParams> model;
        if (plotdata->count("--alpha") != 0)
            model = pd_model.params();
        Sink sink(pd.out);
        rcar::emit_plot_data(samples, rcar::parse_plot_kind(pd.kind), model, sink.stream());
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return exit_code;
}
