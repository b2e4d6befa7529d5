#pragma once

#include <map>
#include <string>
#include <vector>

#include "hpt/linreg.hpp"
#include "hpt/panel_ops.hpp"
#include "hpt/series.hpp"

namespace hpt {

enum class InteractionVariant { none, primary_city_residual, equal_weight_ca_residual };
enum class SerialPolicy { plain, auto_cochrane_orcutt, force_cochrane_orcutt };

struct ContagionSpec {
    std::string primary_msa;
    std::string satellite_msa;
    int n_lags = 3;
    InteractionVariant interaction = InteractionVariant::none;
    SerialPolicy serial_policy = SerialPolicy::auto_cochrane_orcutt;
};

struct ContagionFit {
    std::string primary_msa;
    std::string satellite_msa;
    int n_obs = 0;
    int n_lags = 3;
    bool has_interaction = false;
    double constant = 0.0;
    double constant_t = 0.0;
    std::vector<double> lag_coeffs;          // lag 0..n_lags
    std::vector<double> lag_t_stats;
    std::vector<double> interaction_coeffs;  // empty unless has_interaction
    std::vector<double> interaction_t_stats;
    double r_squared = 0.0;
    double durbin_watson = 2.0;
    bool co_applied = false;
    double rho = 0.0;
    std::string diagnostic;
};

// 5% Durbin-Watson lower bound dL for a regression with an intercept and
// n_regressors slope terms. Interpolated in n from the standard table;
// extrapolated in k beyond 5 regressors.
double dw_lower_bound_5pct(int n_obs, int n_regressors);

// y = satellite return at t; X = intercept, primary at t..t-n_lags, plus each
// primary lag times the contemporaneous residual z_t when z is non-null.
struct ContagionDesign {
    std::vector<double> y;
    std::vector<std::vector<double>> X;
    QuarterId first_obs;
};

ContagionDesign build_design(const Series& satellite, const Series& primary, int n_lags,
                             const Series* interaction_z);

// Residuals of a linear time trend on a (rebased) log price index. Positive in
// booms, negative in busts.
Series boom_bust_residual(const Series& log_index);

struct ContagionInputs {
    const ReturnPanel* panel = nullptr;
    // Boom/bust residual series per interaction variant; keyed by primary msa_id
    // for primary_city_residual, single "ca" entry for equal_weight_ca_residual.
    std::map<std::string, Series> residual_z;
};

ContagionFit fit_contagion(const ContagionSpec& spec, const ContagionInputs& inputs);

struct RegionConfig {
    // primary msa_id -> satellite msa_ids, in configured order
    std::vector<std::pair<std::string, std::vector<std::string>>> groups;
};

// One fit per satellite for each primary, plain and interaction variants.
struct ContagionSuite {
    std::vector<ContagionFit> plain;
    std::vector<ContagionFit> interacted;
    std::vector<std::string> diagnostics;
};

ContagionSuite contagion_suite(const RegionConfig& region, const ReturnPanel& panel,
                               InteractionVariant variant, SerialPolicy policy, int n_lags = 3,
                               const std::vector<std::string>* ca_subset = nullptr);

// The Table 5 primary -> satellites groupings.
RegionConfig default_region_config();

}  // namespace hpt
