#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hpt/contagion.hpp"
#include "hpt/correlations.hpp"
#include "hpt/jumps.hpp"
#include "hpt/panel_ops.hpp"

namespace hpt {

struct SynthConfig {
    int n_msas = 3;
    int n_quarters = 60;        // price level quarters per MSA
    QuarterId start = QuarterId::parse("1979Q4");
    double target_r2 = 0.5;     // population R2 of returns on the factors
    double noise_sigma = 1.0;
    double mean_return = 1.0;   // percent per quarter
    int jumps_per_msa = 0;
    double jump_magnitude = 10.0;  // in return standard deviations
    bool lead_lag = false;         // satellites follow msa 1 with a (0.6, 0.3) profile
    std::vector<std::string> states = {"TX", "OH", "CA", "NY", "AZ"};
};

struct RunConfig {
    std::filesystem::path hpi_csv;
    std::filesystem::path factor_csv;
    std::filesystem::path out_dir = "out";

    QuarterWindow report_span{QuarterId::parse("1983Q4"), QuarterId::parse("2010Q1")};
    int window_len = 20;
    bool rolling_on_prewhitened = true;
    std::vector<QuarterId> cohort_starts = {QuarterId::parse("1983Q4"),
                                            QuarterId::parse("1989Q2"),
                                            QuarterId::parse("1992Q1")};

    JumpOptions jump;
    JumpCorrOptions jump_corr;
    int corr_min_overlap = 8;
    std::vector<double> corr_t_thresholds = {2.0, 3.0};
    double division_t_threshold = 5.0;

    RegionConfig region = default_region_config();
    InteractionVariant interaction = InteractionVariant::primary_city_residual;
    SerialPolicy serial_policy = SerialPolicy::auto_cochrane_orcutt;
    int n_lags = 3;
    IndexAveraging ew_index_averaging = IndexAveraging::log_levels;

    QuarterId fig_base_quarter = QuarterId::parse("1980Q1");
    unsigned long long seed = 1;

    SynthConfig synth;
};

// Flat key = value file; '#' starts a comment, list values comma separated,
// `region` keys repeat as "Primary: Sat1, Sat2". Unknown keys are errors.
RunConfig load_config(const std::filesystem::path& path);

// Re-rendering of the effective configuration, for the manifest echo.
std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& cfg);

}  // namespace hpt
