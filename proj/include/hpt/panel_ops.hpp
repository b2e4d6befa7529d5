#pragma once

#include <string>
#include <vector>

#include "hpt/series.hpp"

namespace hpt {

// 100 * ln(P_t / P_{t-1}); output starts one quarter after the input and is one
// shorter. Throws DataError on a non-positive level, naming the quarter.
Series log_return(const Series& index_series);

// Quarters inside [window.first, window.last] where the MSA return and every
// factor value exist. Empty coverage is reported, not fatal.
struct Alignment {
    std::string msa_id;
    std::vector<QuarterId> quarters;  // ascending
    bool skipped = false;             // empty intersection
};

struct QuarterWindow {
    QuarterId first;
    QuarterId last;  // inclusive
};

Alignment align_msa(const std::string& msa_id, const Series& returns,
                    const FactorPanel& factors, QuarterWindow window);

std::vector<Alignment> align(const ReturnPanel& panel, const FactorPanel& factors,
                             QuarterWindow window);

enum class IndexAveraging { log_levels, levels };

// Cross-MSA equal-weighted index from a return panel: each member's cumulative
// log level is rebased to 0 at the first quarter common to the whole subset,
// then averaged per quarter (arithmetic mean of log levels by default, of
// exponentiated levels with IndexAveraging::levels). Only quarters covered by
// every member are emitted. Output units: natural-log index level.
Series equal_weighted_log_index(const ReturnPanel& panel,
                                const std::vector<std::string>& subset,
                                IndexAveraging averaging = IndexAveraging::log_levels);

// Cumulative log level of one return series, rebased to 0 at `base`; defined
// from `base` through the series end. Returns are percent, levels natural log.
Series cumulative_log_level(const Series& returns, QuarterId base);

}  // namespace hpt
