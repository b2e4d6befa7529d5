#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hpt/series.hpp"

namespace hpt {

// (1/(T-1)) * sum_{t=2..T} |R_t| |R_{t-1}|. Needs at least 2 observations.
double bipower_variation(const std::vector<double>& returns);

// (R_next / sqrt(B(history))) * sqrt(2/pi); with scaled=false the raw
// R/sqrt(B) ratio. Throws NumericError on zero bipower.
double lm_statistic(double return_next, const std::vector<double>& history, bool scaled = true);

struct JumpSeries {
    std::string msa_id;
    QuarterId lm_start;                 // returns start + min_history
    std::vector<double> lm_values;
    std::vector<std::uint8_t> lm_defined;  // 0 when the history bipower was zero
    std::vector<std::uint8_t> jump_10pct;  // |LM| > 1.65
    std::vector<std::uint8_t> jump_big;    // |LM| > 2.0
    int min_history = 8;

    int length() const { return static_cast<int>(lm_values.size()); }
    QuarterId end() const { return lm_start + length(); }
    bool defined_at(QuarterId q) const {
        return q >= lm_start && q < end() && lm_defined[static_cast<size_t>(q - lm_start)];
    }
    double lm_at(QuarterId q) const { return lm_values[static_cast<size_t>(q - lm_start)]; }
    bool big_at(QuarterId q) const { return jump_big[static_cast<size_t>(q - lm_start)] != 0; }
};

struct JumpOptions {
    int min_history = 8;
    double threshold_10pct = 1.65;
    double threshold_big = 2.0;
    bool scaled = true;  // apply the sqrt(2/pi) normal scaling
};

// Expanding-history LM statistics for every quarter from min_history onward,
// with both threshold flags. History is strictly prior data.
JumpSeries classify_jumps(const std::string& msa_id, const Series& returns,
                          const JumpOptions& opts = {});

// Per quarter, 100 * flagged / active among the given series, where active
// means a defined LM that quarter. Quarters with no active series are skipped
// at the edges.
enum class JumpThresholdTag { pct10, big };

Series jump_incidence(const std::vector<const JumpSeries*>& panel, JumpThresholdTag tag);

}  // namespace hpt
