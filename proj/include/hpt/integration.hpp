#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hpt/linreg.hpp"
#include "hpt/panel_ops.hpp"
#include "hpt/series.hpp"

namespace hpt {

struct PrewhitenResult {
    Series residuals;          // one shorter, starts one quarter later
    bool constant_input = false;
};

// Residuals of an AR(1) with intercept fit to the whole series. A constant
// input yields de-meaned zeros and sets the warning flag.
PrewhitenResult prewhiten(const Series& returns);

// R-squared values on the quarter grid with a validity mask; an entry is
// invalid when that window's design was rank deficient.
struct R2Track {
    QuarterId start;
    std::vector<double> values;
    std::vector<std::uint8_t> valid;

    int length() const { return static_cast<int>(values.size()); }
    QuarterId end() const { return start + length(); }
    bool defined_at(QuarterId q) const {
        return q >= start && q < end() && valid[static_cast<size_t>(q - start)];
    }
    double at(QuarterId q) const { return values[static_cast<size_t>(q - start)]; }
};

struct IntegrationSeries {
    std::string msa_id;
    R2Track r2;  // each value dated at its window's final quarter
    int window_len = 20;
    std::vector<std::string> diagnostics;
};

// OLS R-squared of the returns on intercept + all factors over every complete
// window of `window_len` quarters, dated at the window's terminal quarter.
// Windows with incomplete factor or return coverage are skipped outright.
IntegrationSeries rolling_r2(const std::string& msa_id, const Series& returns,
                             const FactorPanel& factors, int window_len = 20);

struct MsaIntegrationRecord {
    std::string msa_id;
    std::string state;
    double mean_return = 0.0;
    double sigma = 0.0;
    double final_r2 = 0.0;
    double change_r2 = 0.0;
    double trend_t = 0.0;
    int rank_mean = 0, quintile_mean = 0;
    int rank_sigma = 0, quintile_sigma = 0;
    int rank_trend_t = 0, quintile_trend_t = 0;
};

struct StatSummary {
    double mean = 0.0;
    double std_dev = 0.0;
    double quintile_min[5] = {0, 0, 0, 0, 0};  // quintile-1 minimum is the overall min
    double max = 0.0;
};

struct IntegrationSummary {
    StatSummary mean_return, sigma, final_r2, change_r2, trend_t;
};

struct IntegrationReport {
    std::vector<MsaIntegrationRecord> per_msa;  // msa_id order
    IntegrationSummary summary;
};

// Per-MSA characteristics over the report span plus cross-MSA ranks, quintile
// bins (ceil(5*rank/N)) and the summary rows. MSAs without a valid window in
// the span are dropped with a diagnostic.
IntegrationReport integration_report(const ReturnPanel& panel,
                                     const std::map<std::string, IntegrationSeries>& integration,
                                     QuarterWindow report_span,
                                     std::vector<std::string>* diagnostics = nullptr);

// Equal-weighted mean of member R-squared values per quarter, from `from`
// onward, over members with a defined value that quarter.
Series mean_r2_series(const std::vector<const IntegrationSeries*>& members, QuarterId from);

// One mean series per cohort start; membership = R-squared series beginning at
// or before the start. Empty cohorts are omitted.
std::map<std::string, Series> cohort_averages(
    const std::map<std::string, IntegrationSeries>& integration,
    const std::vector<QuarterId>& cohort_starts);

enum class GroupBy { coast_flag, census_division };

std::map<std::string, Series> group_averages(
    const std::map<std::string, IntegrationSeries>& integration,
    const std::map<std::string, MsaMeta>& metadata, GroupBy grouping);

}  // namespace hpt
