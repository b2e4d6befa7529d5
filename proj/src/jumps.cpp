#include "hpt/jumps.hpp"

#include <cmath>
#include <numbers>

#include "hpt/kernels.hpp"

namespace hpt {

double bipower_variation(const std::vector<double>& returns) {
    const size_t n = returns.size();
    if (n < 2) throw DataError("bipower_variation: need at least 2 returns");
    return kernels::abs_adjacent_sum(returns) / static_cast<double>(n - 1);
}

double lm_statistic(double return_next, const std::vector<double>& history, bool scaled) {
    const double b = bipower_variation(history);
    if (!(b > 0.0)) throw NumericError("lm_statistic: zero bipower variation");
    const double l = return_next / std::sqrt(b);
    return scaled ? l * std::sqrt(2.0 / std::numbers::pi) : l;
}

JumpSeries classify_jumps(const std::string& msa_id, const Series& returns,
                          const JumpOptions& opts) {
    if (returns.length() < opts.min_history + 1)
        throw DataError("classify_jumps: '" + msa_id + "' needs at least " +
                        std::to_string(opts.min_history + 1) + " returns, got " +
                        std::to_string(returns.length()));

    JumpSeries out;
    out.msa_id = msa_id;
    out.min_history = opts.min_history;
    out.lm_start = returns.start + opts.min_history;

    const double scale = opts.scaled ? std::sqrt(2.0 / std::numbers::pi) : 1.0;
    const size_t n = returns.values.size();

    // Expanding bipower accumulation: running sum of |R_t||R_{t-1}| over the history.
    double abs_sum = 0.0;
    for (size_t t = 1; t < static_cast<size_t>(opts.min_history); ++t)
        abs_sum += std::fabs(returns.values[t]) * std::fabs(returns.values[t - 1]);

    for (size_t t = static_cast<size_t>(opts.min_history); t < n; ++t) {
        const double b = abs_sum / static_cast<double>(t - 1);
        if (b > 0.0) {
            const double lm = returns.values[t] / std::sqrt(b) * scale;
            out.lm_values.push_back(lm);
            out.lm_defined.push_back(1);
            out.jump_10pct.push_back(std::fabs(lm) > opts.threshold_10pct ? 1 : 0);
            out.jump_big.push_back(std::fabs(lm) > opts.threshold_big ? 1 : 0);
        } else {
            out.lm_values.push_back(0.0);
            out.lm_defined.push_back(0);
            out.jump_10pct.push_back(0);
            out.jump_big.push_back(0);
        }
        abs_sum += std::fabs(returns.values[t]) * std::fabs(returns.values[t - 1]);
    }
    return out;
}

Series jump_incidence(const std::vector<const JumpSeries*>& panel, JumpThresholdTag tag) {
    QuarterId first(0), last(0);
    bool any = false;
    for (const auto* js : panel) {
        if (js->length() == 0) continue;
        if (!any || js->lm_start < first) first = js->lm_start;
        if (!any || js->end() - 1 > last) last = js->end() - 1;
        any = true;
    }
    Series out;
    out.start = first;
    if (!any) return out;
    for (QuarterId q = first; q <= last; ++q) {
        int active = 0, flagged = 0;
        for (const auto* js : panel) {
            if (!js->defined_at(q)) continue;
            ++active;
            const size_t i = static_cast<size_t>(q - js->lm_start);
            const bool flag = tag == JumpThresholdTag::big ? js->jump_big[i] != 0
                                                           : js->jump_10pct[i] != 0;
            if (flag) ++flagged;
        }
        if (active == 0) {
            if (out.values.empty()) { out.start = q + 1; continue; }
            break;
        }
        out.values.push_back(100.0 * flagged / active);
    }
    return out;
}

}  // namespace hpt
