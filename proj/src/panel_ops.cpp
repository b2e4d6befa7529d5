#include "hpt/panel_ops.hpp"

#include <algorithm>
#include <cmath>

namespace hpt {

Series log_return(const Series& index_series) {
    if (index_series.length() < 2)
        throw DataError("log_return needs at least 2 levels, got " +
                        std::to_string(index_series.length()));
    for (int i = 0; i < index_series.length(); ++i) {
        if (!(index_series.values[static_cast<size_t>(i)] > 0.0))
            throw DataError("non-positive index level at " + (index_series.start + i).str());
    }
    Series out;
    out.start = index_series.start + 1;
    out.values.resize(index_series.values.size() - 1);
    for (size_t i = 1; i < index_series.values.size(); ++i)
        out.values[i - 1] = 100.0 * std::log(index_series.values[i] / index_series.values[i - 1]);
    return out;
}

Alignment align_msa(const std::string& msa_id, const Series& returns,
                    const FactorPanel& factors, QuarterWindow window) {
    Alignment a;
    a.msa_id = msa_id;
    for (QuarterId q = window.first; q <= window.last; ++q) {
        if (!returns.covers(q)) continue;
        bool all_factors = true;
        for (const auto& [key, f] : factors.factors) {
            if (!f.covers(q)) { all_factors = false; break; }
        }
        if (all_factors) a.quarters.push_back(q);
    }
    a.skipped = a.quarters.empty();
    return a;
}

std::vector<Alignment> align(const ReturnPanel& panel, const FactorPanel& factors,
                             QuarterWindow window) {
    std::vector<Alignment> out;
    out.reserve(panel.series.size());
    for (const auto& [id, s] : panel.series)
        out.push_back(align_msa(id, s, factors, window));
    return out;
}

Series cumulative_log_level(const Series& returns, QuarterId base) {
    if (base < returns.start - 1 || base >= returns.end())
        throw DataError("log-level base " + base.str() + " outside coverage of returns");
    Series out;
    out.start = base;
    out.values.reserve(static_cast<size_t>(returns.end() - base));
    double level = 0.0;
    out.values.push_back(level);
    for (QuarterId q = base + 1; q < returns.end(); ++q) {
        level += returns.at(q) / 100.0;
        out.values.push_back(level);
    }
    return out;
}

Series equal_weighted_log_index(const ReturnPanel& panel,
                                const std::vector<std::string>& subset,
                                IndexAveraging averaging) {
    if (subset.empty()) throw DataError("equal_weighted_log_index: empty subset");

    // A member's log level is defined from the quarter before its first return.
    QuarterId common_start(0), common_end(0);
    std::string limiting_start, limiting_end;
    bool first = true;
    for (const auto& id : subset) {
        auto it = panel.series.find(id);
        if (it == panel.series.end())
            throw DataError("equal_weighted_log_index: unknown msa_id '" + id + "'");
        const Series& r = it->second;
        QuarterId level_start = r.start - 1;
        QuarterId level_end = r.end() - 1;  // inclusive
        if (first || level_start > common_start) { common_start = level_start; limiting_start = id; }
        if (first || level_end < common_end) { common_end = level_end; limiting_end = id; }
        first = false;
    }
    if (common_start > common_end)
        throw DataError("equal_weighted_log_index: no common quarter (limited by '" +
                        limiting_start + "' / '" + limiting_end + "')");

    std::vector<Series> levels;
    levels.reserve(subset.size());
    for (const auto& id : subset)
        levels.push_back(cumulative_log_level(panel.series.at(id), common_start));

    Series out;
    out.start = common_start;
    const int n_quarters = common_end - common_start + 1;
    out.values.resize(static_cast<size_t>(n_quarters));
    const double inv_n = 1.0 / static_cast<double>(subset.size());
    for (int i = 0; i < n_quarters; ++i) {
        QuarterId q = common_start + i;
        double acc = 0.0;
        for (const Series& l : levels)
            acc += (averaging == IndexAveraging::log_levels) ? l.at(q) : std::exp(l.at(q));
        double mean = acc * inv_n;
        out.values[static_cast<size_t>(i)] =
            (averaging == IndexAveraging::log_levels) ? mean : std::log(mean);
    }
    return out;
}

}  // namespace hpt
