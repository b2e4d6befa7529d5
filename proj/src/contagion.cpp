#include "hpt/contagion.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace hpt {

namespace {

// Savin-White 5% dL anchors for 1..5 slope regressors; linear in n between
// anchors, clamped outside, extrapolated linearly in k beyond 5.
struct DwAnchor {
    int n;
    std::array<double, 5> dl;
};

constexpr std::array<DwAnchor, 11> kDwTable = {{
    {15, {1.08, 0.95, 0.81, 0.69, 0.56}},
    {20, {1.20, 1.10, 1.00, 0.90, 0.79}},
    {25, {1.29, 1.21, 1.12, 1.04, 0.95}},
    {30, {1.35, 1.28, 1.21, 1.14, 1.07}},
    {40, {1.44, 1.39, 1.34, 1.29, 1.23}},
    {50, {1.50, 1.46, 1.42, 1.38, 1.34}},
    {60, {1.55, 1.51, 1.48, 1.44, 1.41}},
    {80, {1.61, 1.59, 1.56, 1.53, 1.51}},
    {100, {1.65, 1.63, 1.61, 1.59, 1.57}},
    {150, {1.72, 1.71, 1.69, 1.68, 1.66}},
    {200, {1.76, 1.75, 1.74, 1.73, 1.72}},
}};

double dl_at_anchor(const DwAnchor& a, int k) {
    if (k <= 5) return a.dl[static_cast<size_t>(k - 1)];
    const double slope = a.dl[4] - a.dl[3];
    return std::max(0.0, a.dl[4] + slope * (k - 5));
}

}  // namespace

double dw_lower_bound_5pct(int n_obs, int n_regressors) {
    if (n_regressors < 1) throw ConfigError("dw_lower_bound_5pct: need >= 1 regressor");
    const int k = n_regressors;
    if (n_obs <= kDwTable.front().n) return dl_at_anchor(kDwTable.front(), k);
    if (n_obs >= kDwTable.back().n) return dl_at_anchor(kDwTable.back(), k);
    for (size_t i = 1; i < kDwTable.size(); ++i) {
        if (n_obs <= kDwTable[i].n) {
            const auto& lo = kDwTable[i - 1];
            const auto& hi = kDwTable[i];
            const double w = static_cast<double>(n_obs - lo.n) / (hi.n - lo.n);
            return (1.0 - w) * dl_at_anchor(lo, k) + w * dl_at_anchor(hi, k);
        }
    }
    return dl_at_anchor(kDwTable.back(), k);
}

ContagionDesign build_design(const Series& satellite, const Series& primary, int n_lags,
                             const Series* interaction_z) {
    ContagionDesign d;
    QuarterId first = std::max(satellite.start, primary.start + n_lags);
    QuarterId last = std::min(satellite.end(), primary.end()) - 1;
    if (interaction_z) {
        first = std::max(first, interaction_z->start);
        last = std::min(last, interaction_z->end() - 1);
    }
    if (first > last) return d;

    d.first_obs = first;
    for (QuarterId t = first; t <= last; ++t) {
        std::vector<double> row;
        row.reserve(1 + static_cast<size_t>(n_lags + 1) * (interaction_z ? 2 : 1));
        row.push_back(1.0);
        for (int lag = 0; lag <= n_lags; ++lag) row.push_back(primary.at(t - lag));
        if (interaction_z) {
            const double z = interaction_z->at(t);
            for (int lag = 0; lag <= n_lags; ++lag) row.push_back(primary.at(t - lag) * z);
        }
        d.X.push_back(std::move(row));
        d.y.push_back(satellite.at(t));
    }
    return d;
}

Series boom_bust_residual(const Series& log_index) {
    if (log_index.length() < 12)
        throw DataError("boom_bust_residual: need at least 12 quarters, got " +
                        std::to_string(log_index.length()));
    TrendFit tf = time_trend_fit(log_index.values);
    Series z;
    z.start = log_index.start;
    z.values = tf.residuals;
    return z;
}

ContagionFit fit_contagion(const ContagionSpec& spec, const ContagionInputs& inputs) {
    if (spec.primary_msa == spec.satellite_msa)
        throw ConfigError("fit_contagion: primary and satellite are both '" +
                          spec.primary_msa + "'");
    const ReturnPanel& panel = *inputs.panel;
    auto sit = panel.series.find(spec.satellite_msa);
    auto pit = panel.series.find(spec.primary_msa);
    if (sit == panel.series.end())
        throw DataError("fit_contagion: satellite '" + spec.satellite_msa + "' not in panel");
    if (pit == panel.series.end())
        throw DataError("fit_contagion: primary '" + spec.primary_msa + "' not in panel");

    const Series* z = nullptr;
    if (spec.interaction != InteractionVariant::none) {
        const std::string key = spec.interaction == InteractionVariant::primary_city_residual
                                    ? spec.primary_msa
                                    : "ca";
        auto zit = inputs.residual_z.find(key);
        if (zit == inputs.residual_z.end())
            throw DataError("fit_contagion: missing interaction residual series '" + key + "'");
        z = &zit->second;
    }

    ContagionDesign d = build_design(sit->second, pit->second, spec.n_lags, z);
    const int n_params = 1 + (spec.n_lags + 1) * (z ? 2 : 1);
    if (static_cast<int>(d.y.size()) < 12 + n_params)
        throw DataError("fit_contagion: " + spec.primary_msa + "->" + spec.satellite_msa +
                        ": overlap " + std::to_string(d.y.size()) + " < required " +
                        std::to_string(12 + n_params));

    RegressionFit fit = ols_fit(d.X, d.y);

    ContagionFit out;
    out.primary_msa = spec.primary_msa;
    out.satellite_msa = spec.satellite_msa;
    out.n_lags = spec.n_lags;
    out.has_interaction = z != nullptr;

    bool want_co = spec.serial_policy == SerialPolicy::force_cochrane_orcutt;
    if (spec.serial_policy == SerialPolicy::auto_cochrane_orcutt)
        want_co = fit.durbin_watson < dw_lower_bound_5pct(fit.n_obs, n_params - 1);
    if (want_co) {
        try {
            CochraneOrcuttResult co = cochrane_orcutt(d.X, d.y);
            fit = co.fit;
            out.co_applied = true;
            out.rho = co.rho;
        } catch (const NumericError& e) {
            out.diagnostic = std::string("cochrane_orcutt failed, plain fit retained: ") +
                             e.what();
        }
    }

    out.n_obs = fit.n_obs;
    out.constant = fit.coefficients[0];
    out.constant_t = fit.t_stats[0];
    for (int lag = 0; lag <= spec.n_lags; ++lag) {
        out.lag_coeffs.push_back(fit.coefficients[static_cast<size_t>(1 + lag)]);
        out.lag_t_stats.push_back(fit.t_stats[static_cast<size_t>(1 + lag)]);
    }
    if (z) {
        const int base = 2 + spec.n_lags;
        for (int lag = 0; lag <= spec.n_lags; ++lag) {
            out.interaction_coeffs.push_back(fit.coefficients[static_cast<size_t>(base + lag)]);
            out.interaction_t_stats.push_back(fit.t_stats[static_cast<size_t>(base + lag)]);
        }
    }
    out.r_squared = fit.r_squared;
    out.durbin_watson = fit.durbin_watson;
    return out;
}

RegionConfig default_region_config() {
    RegionConfig rc;
    rc.groups = {
        {"Los Angeles",
         {"Bakersfield", "Fresno", "Oxnard", "Riverside", "San Diego", "Santa Ana",
          "Santa Barbara"}},
        {"San Francisco",
         {"Merced", "Modesto", "Napa", "Oakland", "Sacramento", "Salinas", "San Jose",
          "Santa Cruz", "Santa Rosa", "Stockton", "Vallejo"}},
        {"Santa Barbara", {"Oxnard", "San Luis Obispo"}},
    };
    return rc;
}

namespace {

// Accepts either an msa_id or a display name.
const std::string* resolve_msa(const ReturnPanel& panel, const std::string& key) {
    auto it = panel.series.find(key);
    if (it != panel.series.end()) return &it->first;
    for (const auto& [id, meta] : panel.metadata)
        if (meta.name == key && panel.series.count(id)) return &panel.series.find(id)->first;
    return nullptr;
}

}  // namespace

ContagionSuite contagion_suite(const RegionConfig& region, const ReturnPanel& panel,
                               InteractionVariant variant, SerialPolicy policy, int n_lags,
                               const std::vector<std::string>* ca_subset) {
    ContagionSuite suite;
    ContagionInputs inputs;
    inputs.panel = &panel;

    if (variant == InteractionVariant::equal_weight_ca_residual) {
        std::vector<std::string> subset;
        if (ca_subset) {
            subset = *ca_subset;
        } else {
            for (const auto& [id, meta] : panel.metadata)
                if (meta.census_division == kDivisionCalifornia && panel.series.count(id))
                    subset.push_back(id);
        }
        if (subset.empty())
            throw DataError("contagion_suite: no California MSAs for the equal-weighted index");
        inputs.residual_z["ca"] = boom_bust_residual(equal_weighted_log_index(panel, subset));
    }

    for (const auto& [primary_key, satellites] : region.groups) {
        const std::string* primary = resolve_msa(panel, primary_key);
        if (!primary) {
            suite.diagnostics.push_back("primary '" + primary_key + "' not in panel, group skipped");
            continue;
        }
        if (variant == InteractionVariant::primary_city_residual &&
            !inputs.residual_z.count(*primary)) {
            const Series& pr = panel.series.at(*primary);
            inputs.residual_z[*primary] =
                boom_bust_residual(cumulative_log_level(pr, pr.start - 1));
        }
        for (const auto& sat_key : satellites) {
            const std::string* sat = resolve_msa(panel, sat_key);
            if (!sat) {
                suite.diagnostics.push_back("satellite '" + sat_key + "' not in panel, row skipped");
                continue;
            }
            ContagionSpec spec;
            spec.primary_msa = *primary;
            spec.satellite_msa = *sat;
            spec.n_lags = n_lags;
            spec.serial_policy = policy;
            try {
                spec.interaction = InteractionVariant::none;
                suite.plain.push_back(fit_contagion(spec, inputs));
                spec.interaction = variant == InteractionVariant::none
                                       ? InteractionVariant::primary_city_residual
                                       : variant;
                if (spec.interaction == InteractionVariant::primary_city_residual &&
                    !inputs.residual_z.count(*primary)) {
                    const Series& pr = panel.series.at(*primary);
                    inputs.residual_z[*primary] =
                        boom_bust_residual(cumulative_log_level(pr, pr.start - 1));
                }
                suite.interacted.push_back(fit_contagion(spec, inputs));
            } catch (const DataError& e) {
                suite.diagnostics.push_back(e.what());
            }
        }
    }
    return suite;
}

}  // namespace hpt
