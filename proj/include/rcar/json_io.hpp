#ifndef RCAR_JSON_IO_HPP
#define RCAR_JSON_IO_HPP

#include "rcar/inference.hpp"
#include "rcar/innovation.hpp"
#include "rcar/lepage.hpp"
#include "rcar/process_sim.hpp"
#include "rcar/stable.hpp"

#include <json.hpp>

namespace rcar {

inline void to_json(nlohmann::json& j, const InnovationSpec& innov) { j = innov.to_string(); }

inline void to_json(nlohmann::json& j, const StableParams& p)
{
    j = {{"alpha", p.alpha}, {"beta", p.beta}, {"sigma", p.sigma}, {"mu", p.mu}};
}

inline void from_json(const nlohmann::json& j, StableParams& p)
{
    p.alpha = j.at("alpha").get<double>();
    p.beta = j.value("beta", 0.0);
    p.sigma = j.value("sigma", 1.0);
    p.mu = j.value("mu", 0.0);
}

inline void to_json(nlohmann::json& j, const TheoremOnePrediction& p)
{
    j = {{"alpha", p.alpha},     {"beta", p.beta},       {"sigma", p.sigma},
         {"mu", p.mu},           {"c_alpha", p.c_alpha}, {"frac_moment", p.frac_moment}};
}

inline void to_json(nlohmann::json& j, const EcfFit& f)
{
    j = {{"alpha_hat", f.alpha_hat}, {"sigma_hat", f.sigma_hat}, {"t_grid", f.t_grid},
         {"r2", f.r2},               {"n", f.n},                 {"boundary", f.boundary}};
}

inline void to_json(nlohmann::json& j, const GofReport& r)
{
    j = {{"ks_stat", r.ks_stat}, {"ks_critical_1pct", r.ks_critical_1pct}, {"n", r.n}, {"passed", r.passed}};
    if (r.n_reference != 0)
        j["n_reference"] = r.n_reference;
    if (r.ad_stat)
        j["ad_stat"] = *r.ad_stat;
}

inline void to_json(nlohmann::json& j, const LlnSummary& s)
{
    j = {{"mean", s.mean}, {"std_error", s.std_error}, {"paths", s.paths}};
}

inline nlohmann::json path_to_json(const ProcessPath& path)
{
    return {{"a", path.a},
            {"n", path.steps()},
            {"G", path.arrivals.times},
            {"X", path.raw},
            {"normalized", path.normalized}};
}

} // namespace rcar

#endif // RCAR_JSON_IO_HPP
