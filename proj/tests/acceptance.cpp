// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.
//
//   rcar_acceptance <path to rcar cli> <work dir> [criterion numbers...]

#include <rcar/rcar.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace rcar;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* format, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome identity()
{
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (double a : {0.6, 1.0, 2.0}) {
        for (std::uint64_t seed = 0; seed < 1000; ++seed) {
            Stream s1 = Stream::derived(seed, 0, StreamPurpose::process);
            Stream s2 = Stream::derived(seed, 0, StreamPurpose::process);
            const auto rec = simulate_recursive(a, 1000, InnovationSpec::rademacher(), s1);
            const auto cf = simulate_closed_form(a, 1000, InnovationSpec::rademacher(), s2);
            for (std::size_t k = 1; k <= 1000; ++k) {
                const double x = rec.normalized[k];
                const double y = cf.normalized[k];
                worst = std::max(worst, std::abs(x - y) / std::max(std::abs(x), std::abs(y)));
            }
        }
    }
    const double t = seconds_since(t0);
    return {worst < 1e-9 && t < 60.0, fmt("max relative gap %.3e (< 1e-9), runtime %.1f s (< 60 s)", worst, t)};
}

Outcome lln()
{
    std::string detail;
    bool pass = true;
    for (double a : {1.0, 2.0}) {
        std::vector<ArrivalSequence> paths(200);
        parallel_for(paths.size(), 0, [&](std::size_t i) {
            Stream s = Stream::derived(2, i, StreamPurpose::process);
            paths[i] = sample_arrivals(10000, s);
        });
        const auto summary = lln_diagnostic(paths, a);
        const double z = (summary.mean - 1.0) / summary.std_error;
        pass = pass && std::abs(z) < 3.0;
        detail += fmt("a=%g: mean %.6f, %.2f stderr; ", a, summary.mean, z);
    }
    return {pass, detail + "bound 3 stderr"};
}

Outcome constants()
{
    const double e1 = std::abs(c_alpha(1.0) - 2.0 / pi);
    const double e_half = std::abs(c_alpha(0.5) - std::sqrt(2.0 / pi));
    const double e_3half = std::abs(c_alpha(1.5) - 1.0 / std::sqrt(2.0 * pi));
    const double lo = std::abs(c_alpha(0.999) - 2.0 / pi);
    const double hi = std::abs(c_alpha(1.001) - 2.0 / pi);
    const bool pass = e1 < 1e-12 && e_half < 1e-10 && e_3half < 1e-10 && lo < 1e-3 && hi < 1e-3;
    return {pass, fmt("|c_1-2/pi|=%.1e |c_1/2-sqrt(2/pi)|=%.1e |c_3/2-1/sqrt(2pi)|=%.1e, near 1: %.2e, %.2e", e1,
                      e_half, e_3half, lo, hi)};
}

Outcome end_to_end(double a, const StableParams& expected, std::uint64_t seed, double runtime_limit)
{
    ExperimentConfig cfg;
    cfg.a = a;
    cfg.innov = InnovationSpec::rademacher();
    cfg.seed = seed;
    const auto t0 = std::chrono::steady_clock::now();
    const auto report = run_convergence(cfg);
    const double t = seconds_since(t0);
    if (!report.prediction || !report.ks_vs_prediction)
        return {false, "no prediction / KS result"};
    const StableParams law = report.prediction->law();
    const bool law_ok = std::abs(law.alpha - expected.alpha) < 1e-12 && law.beta == expected.beta
        && std::abs(law.sigma - expected.sigma) < 1e-12 && law.mu == expected.mu;
    const double d = report.ks_vs_prediction->result.ks_stat;
    return {law_ok && d < 0.02 && t <= runtime_limit,
            fmt("S(%g, %g, %.6f, %g), n_steps=%zu n_paths=%zu seed=%llu: D=%.4f (< 0.02), runtime %.1f s", law.alpha,
                law.beta, law.sigma, law.mu, cfg.n_steps, cfg.n_paths, static_cast<unsigned long long>(seed), d, t)};
}

Outcome lepage_vs_cms()
{
    const LePageConfig lepage{2.0, 10000, InnovationSpec::rademacher(), std::nullopt};
    const StableParams law = predict_theorem_one(2.0, InnovationSpec::rademacher()).law();
    const std::size_t n = 20000;
    int passes = 0;
    double worst = 0.0;
    const auto t0 = std::chrono::steady_clock::now();
    for (std::uint64_t rep = 0; rep < 100; ++rep) {
        std::vector<double> z(n);
        std::vector<double> c(n);
        parallel_for(n, 0, [&](std::size_t i) {
            Stream s = Stream::derived(1000 + rep, i, StreamPurpose::lepage);
            z[i] = sample_limit(lepage, s);
            Stream t = Stream::derived(1000 + rep, i, StreamPurpose::cms);
            c[i] = sample_cms(law, t);
        });
        const auto r = ks_two_sample(z, c);
        passes += r.passed;
        worst = std::max(worst, r.ks_stat);
    }
    return {passes >= 95, fmt("%d/100 repetitions pass at 1%% (>= 95), largest D=%.4f, runtime %.0f s", passes, worst,
                              seconds_since(t0))};
}

Outcome levy_case()
{
    ExperimentConfig cfg = apply_scenario({}, Scenario::mass);
    cfg.seed = 7;
    cfg.hill_k = 1000;
    const auto report = run_convergence(cfg);
    bool above = true;
    for (double x : report.lepage_samples)
        above = above && x > 1.0;
    if (!report.hill || !report.ks_vs_cms || !report.cms_law)
        return {false, "missing Hill / KS result"};
    const double hill = report.hill->result;
    const auto& ks = report.ks_vs_cms->result;
    const bool pass = above && hill >= 0.4 && hill <= 0.6 && ks.passed;
    return {pass, fmt("limit draws > 1: %s; Hill(k=1000)=%.4f in [0.4, 0.6]; fitted Levy sigma=%.4f, "
                      "two-sample D=%.4f vs critical %.4f",
                      above ? "yes" : "no", hill, report.cms_law->sigma, ks.ks_stat, ks.ks_critical_1pct)};
}

// Integral of the density over (mu, mu + R] in log space from 1e-8 scale units.
// R is where the asymptotic tail mass C R^-alpha falls below 1e-7; beyond it the
// weight x of the log substitution only amplifies quadrature noise.
double positive_mass(const StableParams& p)
{
    double reach = 50.0;
    if (p.alpha < 2.0) {
        double tail_const = std::tgamma(p.alpha) * std::sin(pi * p.alpha / 2.0) / pi;
        if (is_levy(p))
            tail_const *= 2.0;
        reach = std::min(1e12, std::pow(tail_const / 1e-7, 1.0 / p.alpha));
    }
    const double lo = std::log(1e-8 * p.sigma);
    const double hi = std::log(reach * p.sigma);
    const int m = 8000;
    const double h = (hi - lo) / m;
    auto g = [&](double u) {
        const double x = std::exp(u);
        return pdf(p, p.mu + x) * x;
    };
    double s = g(lo) + g(hi);
    for (int i = 1; i < m; ++i)
        s += g(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

Outcome stable_numerics()
{
    bool pass = true;
    std::string detail;
    double worst_ks_ratio = 0.0;
    double worst_mass = 0.0;
    double worst_round = 0.0;
    for (const auto& ab : {std::pair{2.0, 0.0}, {1.5, 0.0}, {1.0, 0.0}, {0.5, 0.0}, {0.5, 1.0}}) {
        for (double sigma : {1.0, pi / 2.0}) {
            const StableParams p{ab.first, ab.second, sigma, 0.0};
            std::vector<double> x(100000);
            for (std::size_t i = 0; i < x.size(); ++i) {
                Stream s = Stream::derived(8, i, StreamPurpose::cms);
                x[i] = sample_cms(p, s);
            }
            const auto ks = ks_one_sample(x, p);
            worst_ks_ratio = std::max(worst_ks_ratio, ks.ks_stat / ks.ks_critical_1pct);

            const double mass = is_levy(p) ? positive_mass(p) : 2.0 * positive_mass(p);
            worst_mass = std::max(worst_mass, std::abs(mass - 1.0));

            double round = 0.0;
            for (int i = 1; i <= 99; ++i) {
                const double q = i / 100.0;
                round = std::max(round, std::abs(cdf(p, quantile(p, q)) - q));
            }
            worst_round = std::max(worst_round, round);

            const bool ok = ks.passed && std::abs(mass - 1.0) < 1e-4 && round < 1e-6;
            if (!ok)
                detail += fmt("[fail at alpha=%g beta=%g sigma=%g] ", p.alpha, p.beta, p.sigma);
            pass = pass && ok;
        }
    }
    return {pass, detail + fmt("10 parameter sets: max D/critical=%.3f (< 1), max |mass-1|=%.2e (< 1e-4), "
                               "max round-trip error=%.2e (< 1e-6)",
                               worst_ks_ratio, worst_mass, worst_round)};
}

Outcome ecf_recovery()
{
    bool pass = true;
    std::string detail;
    for (double alpha : {0.5, 1.0, 1.5}) {
        const StableParams p{alpha, 0.0, 1.0, 0.0};
        std::vector<double> x(100000);
        for (std::size_t i = 0; i < x.size(); ++i) {
            Stream s = Stream::derived(9, i, StreamPurpose::cms);
            x[i] = sample_cms(p, s);
        }
        const auto fit = ecf_fit_symmetric(x, 0.0);
        const bool ok = std::abs(fit.alpha_hat - alpha) <= 0.05 && std::abs(fit.sigma_hat - 1.0) <= 0.05;
        pass = pass && ok;
        detail += fmt("alpha=%g: alpha_hat=%.4f sigma_hat=%.4f; ", alpha, fit.alpha_hat, fit.sigma_hat);
    }
    return {pass, detail + "bounds +-0.05 and +-5%"};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& cli, const std::string& args)
{
    const std::string cmd = "\"" + cli + "\" " + args + " > /dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome determinism(const std::string& cli, const fs::path& work)
{
    const std::string common = "converge --scenario charge --n-steps 500 --n-paths 4000 --lepage-K 1000 --seed 99";
    std::vector<fs::path> dirs;
    std::vector<int> codes;
    for (const auto& [tag, workers] : {std::pair{"w1", 1}, {"w4", 4}, {"w1_again", 1}, {"w3", 3}}) {
        const fs::path dir = work / "determinism" / tag;
        fs::remove_all(dir);
        codes.push_back(run_cli(cli, common + " --workers " + std::to_string(workers) + " --out-dir \"" +
                                         dir.string() + "\""));
        dirs.push_back(dir);
    }
    for (int c : codes)
        if (c != 0 && c != 2)
            return {false, fmt("converge exited with status %d", c)};
    bool same = true;
    std::size_t bytes = 0;
    for (const char* name : {"samples.csv", "lepage.csv", "cms.csv"}) {
        const std::string ref = slurp(dirs[0] / name);
        bytes += ref.size();
        same = same && !ref.empty();
        for (std::size_t i = 1; i < dirs.size(); ++i)
            same = same && slurp(dirs[i] / name) == ref;
    }
    return {same, fmt("4 runs (workers 1, 4, 1, 3): samples/lepage/cms CSVs %s (%zu bytes per run)",
                      same ? "byte-identical" : "DIFFER", bytes)};
}

} // namespace

int main(int argc, char** argv)
{
    if (argc < 3) {
        std::fprintf(stderr, "usage: %s <rcar cli> <work dir> [criteria...]\n", argv[0]);
        return 1;
    }
    const std::string cli = argv[1];
    const fs::path work = argv[2];
    fs::create_directories(work);
    std::set<int> only;
    for (int i = 3; i < argc; ++i)
        only.insert(std::atoi(argv[i]));

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"recursion and closed form agree", identity},
        {"law of large numbers for (G_n/n)^a", lln},
        {"c_alpha values and continuity", constants},
        {"charge preset converges to S(1/2, 0, pi/2, 1)",
         [] { return end_to_end(2.0, {0.5, 0.0, pi / 2.0, 1.0}, 2024, 600.0); }},
        {"Cauchy case converges to S(1, 0, pi/2, 1)",
         [] { return end_to_end(1.0, {1.0, 0.0, pi / 2.0, 1.0}, 2025, 1e9); }},
        {"LePage series vs CMS sampler", lepage_vs_cms},
        {"mass preset has a Levy limit", levy_case},
        {"stable numerics self-consistency", stable_numerics},
        {"ECF estimator recovery", ecf_recovery},
        {"converge output independent of worker count", [&] { return determinism(cli, work); }},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && !only.count(id))
            continue;
        Outcome out;
        try {
            out = criteria[i].second();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        failures += !out.pass;
        std::printf("%s  criterion %2d  %s: %s\n", out.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                    out.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
