#pragma once

#include <map>
#include <string>
#include <vector>

#include "hpt/jumps.hpp"
#include "hpt/series.hpp"

namespace hpt {

enum class CorrMode { contemporaneous, lead };
enum class CorrKind { ret, jump };

struct PairCorrelation {
    std::string id_a;
    std::string id_b;
    CorrMode mode = CorrMode::contemporaneous;
    CorrKind kind = CorrKind::ret;
    double r = 0.0;
    int n_obs = 0;
    double t_stat = 0.0;
};

struct PairCorrelationList {
    std::vector<PairCorrelation> pairs;  // (id_a, id_b) lexical order
    long long skipped_overlap = 0;       // too few overlapping quarters
    long long skipped_degenerate = 0;    // zero variance / too few jump quarters
};

// Contemporaneous: Pearson r over the overlap for all C(m,2) unordered pairs
// (id_a < id_b). Lead: corr(x_t, y_{t+1}) for all m^2 ordered pairs including
// self-pairs. Pairs with fewer than min_overlap common quarters are skipped.
PairCorrelationList return_corr_all_pairs(const ReturnPanel& panel, CorrMode mode,
                                          int min_overlap = 8);

enum class JumpCorrMeanMode { union_set, full_overlap };

struct JumpCorrOptions {
    double gate = 2.0;       // censoring threshold on |LM|
    int min_jump_quarters = 3;
    JumpCorrMeanMode mean_mode = JumpCorrMeanMode::union_set;
};

// Censored jump correlations: per MSA X~_t = LM_t when |LM_t| > gate else 0;
// each pair is correlated over the quarters where at least one member jumped
// (union_set mode) or over the whole defined overlap (full_overlap mode).
// Pairs with too few qualifying quarters or zero variance are excluded.
PairCorrelationList jump_corr_all_pairs(const std::map<std::string, JumpSeries>& panel,
                                        CorrMode mode, const JumpCorrOptions& opts = {});

struct StratumSummary {
    std::string tag;  // "all", "t>2", ...
    long long n = 0;
    double mean = 0.0;
    double sigma = 0.0;   // cross-coefficient standard deviation
    double mean_t = 0.0;  // mean / (sigma / sqrt(n)); nan when undefined
    double max = 0.0;
    double min = 0.0;
};

// Full-sample row plus one row per threshold (correlations with t_stat above it).
std::vector<StratumSummary> stratify(const std::vector<PairCorrelation>& pairs,
                                     const std::vector<double>& thresholds = {2.0, 3.0});

struct DivisionSummary {
    std::string division;  // "division1".."division9", "ca"
    long long n = 0;
    long long n_significant = 0;
    double pct_significant = 0.0;
    double mean_r = 0.0;
};

// Within-division pairs only (both members in the division); CA is its own
// cohort. Significance: t_stat > t_threshold.
std::vector<DivisionSummary> division_summary(const std::vector<PairCorrelation>& pairs,
                                              const std::map<std::string, MsaMeta>& metadata,
                                              double t_threshold = 5.0);

}  // namespace hpt
