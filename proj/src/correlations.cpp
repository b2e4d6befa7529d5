#include "hpt/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "hpt/kernels.hpp"
#include "hpt/linreg.hpp"

namespace hpt {

namespace {

// Pearson from accumulated moments; returns false on zero variance.
bool pearson(const kernels::PairMoments& m, int n, double& r_out, double& t_out) {
    const double dn = static_cast<double>(n);
    const double var_x = m.sum_xx - m.sum_x * m.sum_x / dn;
    const double var_y = m.sum_yy - m.sum_y * m.sum_y / dn;
    if (!(var_x > 0.0) || !(var_y > 0.0)) return false;
    double r = (m.sum_xy - m.sum_x * m.sum_y / dn) / std::sqrt(var_x * var_y);
    r = std::clamp(r, -1.0, 1.0);
    const double denom = 1.0 - r * r;
    r_out = r;
    t_out = denom > 0.0 ? r * std::sqrt(dn - 2.0) / std::sqrt(denom)
                        : std::copysign(tstat_infinity(), r);
    return true;
}

// Overlapping [t, t+lag_shift] slices of two series; x aligned at t, y at t+lag_shift.
bool overlap_slices(const Series& a, const Series& b, int lag_shift,
                    std::span<const double>& xs, std::span<const double>& ys) {
    QuarterId x_first = std::max(a.start, b.start - lag_shift);
    QuarterId x_last = std::min(a.end() - 1, b.end() - 1 - lag_shift);
    if (x_first > x_last) return false;
    const size_t n = static_cast<size_t>(x_last - x_first + 1);
    xs = std::span<const double>(a.values).subspan(static_cast<size_t>(x_first - a.start), n);
    ys = std::span<const double>(b.values).subspan(
        static_cast<size_t>(x_first + lag_shift - b.start), n);
    return true;
}

}  // namespace

PairCorrelationList return_corr_all_pairs(const ReturnPanel& panel, CorrMode mode,
                                          int min_overlap) {
    PairCorrelationList out;
    std::vector<const std::string*> ids;
    std::vector<const Series*> series;
    for (const auto& [id, s] : panel.series) {
        ids.push_back(&id);
        series.push_back(&s);
    }
    const size_t m = ids.size();
    const int lag_shift = mode == CorrMode::lead ? 1 : 0;

    auto emit = [&](size_t i, size_t j) {
        std::span<const double> xs, ys;
        if (!overlap_slices(*series[i], *series[j], lag_shift, xs, ys) ||
            static_cast<int>(xs.size()) < min_overlap) {
            ++out.skipped_overlap;
            return;
        }
        PairCorrelation pc;
        pc.id_a = *ids[i];
        pc.id_b = *ids[j];
        pc.mode = mode;
        pc.kind = CorrKind::ret;
        pc.n_obs = static_cast<int>(xs.size());
        if (!pearson(kernels::pair_moments(xs, ys), pc.n_obs, pc.r, pc.t_stat)) {
            ++out.skipped_degenerate;
            return;
        }
        out.pairs.push_back(std::move(pc));
    };

    if (mode == CorrMode::contemporaneous) {
        for (size_t i = 0; i < m; ++i)
            for (size_t j = i + 1; j < m; ++j) emit(i, j);
    } else {
        for (size_t i = 0; i < m; ++i)
            for (size_t j = 0; j < m; ++j) emit(i, j);
    }
    return out;
}

PairCorrelationList jump_corr_all_pairs(const std::map<std::string, JumpSeries>& panel,
                                        CorrMode mode, const JumpCorrOptions& opts) {
    PairCorrelationList out;
    std::vector<const JumpSeries*> series;
    for (const auto& [id, js] : panel) series.push_back(&js);
    const size_t m = series.size();
    const int lag_shift = mode == CorrMode::lead ? 1 : 0;

    auto censored = [&](const JumpSeries& js, QuarterId q) {
        const double lm = js.lm_at(q);
        return std::fabs(lm) > opts.gate ? lm : 0.0;
    };

    auto emit = [&](const JumpSeries& a, const JumpSeries& b) {
        QuarterId first = std::max(a.lm_start, b.lm_start - lag_shift);
        QuarterId last = std::min(a.end() - 1, b.end() - 1 - lag_shift);
        std::vector<double> xs, ys;
        for (QuarterId q = first; q <= last; ++q) {
            if (!a.defined_at(q) || !b.defined_at(q + lag_shift)) continue;
            const double x = censored(a, q);
            const double y = censored(b, q + lag_shift);
            if (opts.mean_mode == JumpCorrMeanMode::union_set && x == 0.0 && y == 0.0) continue;
            xs.push_back(x);
            ys.push_back(y);
        }
        // Under full_overlap mode the qualifying-quarter gate still applies.
        int jump_quarters = 0;
        for (size_t i = 0; i < xs.size(); ++i)
            if (xs[i] != 0.0 || ys[i] != 0.0) ++jump_quarters;
        if (jump_quarters < opts.min_jump_quarters ||
            static_cast<int>(xs.size()) < opts.min_jump_quarters) {
            ++out.skipped_overlap;
            return;
        }
        PairCorrelation pc;
        pc.id_a = a.msa_id;
        pc.id_b = b.msa_id;
        pc.mode = mode;
        pc.kind = CorrKind::jump;
        pc.n_obs = static_cast<int>(xs.size());
        if (!pearson(kernels::pair_moments(xs, ys), pc.n_obs, pc.r, pc.t_stat)) {
            ++out.skipped_degenerate;
            return;
        }
        out.pairs.push_back(std::move(pc));
    };

    if (mode == CorrMode::contemporaneous) {
        for (size_t i = 0; i < m; ++i)
            for (size_t j = i + 1; j < m; ++j) emit(*series[i], *series[j]);
    } else {
        for (size_t i = 0; i < m; ++i)
            for (size_t j = 0; j < m; ++j) emit(*series[i], *series[j]);
    }
    return out;
}

namespace {

StratumSummary summarize_stratum(const std::string& tag,
                                 const std::vector<const PairCorrelation*>& pairs) {
    StratumSummary s;
    s.tag = tag;
    s.n = static_cast<long long>(pairs.size());
    if (pairs.empty()) {
        s.mean = s.sigma = s.mean_t = s.max = s.min =
            std::numeric_limits<double>::quiet_NaN();
        return s;
    }
    double sum = 0.0;
    s.max = s.min = pairs.front()->r;
    for (const auto* p : pairs) {
        sum += p->r;
        s.max = std::max(s.max, p->r);
        s.min = std::min(s.min, p->r);
    }
    s.mean = sum / static_cast<double>(s.n);
    double ss = 0.0;
    for (const auto* p : pairs) ss += (p->r - s.mean) * (p->r - s.mean);
    s.sigma = s.n > 1 ? std::sqrt(ss / static_cast<double>(s.n - 1)) : 0.0;
    s.mean_t = (s.sigma > 0.0 && s.n >= 2) ? mean_corr_tstat(s.mean, s.sigma, s.n)
                                           : std::numeric_limits<double>::quiet_NaN();
    return s;
}

}  // namespace

std::vector<StratumSummary> stratify(const std::vector<PairCorrelation>& pairs,
                                     const std::vector<double>& thresholds) {
    std::vector<StratumSummary> out;
    std::vector<const PairCorrelation*> all;
    all.reserve(pairs.size());
    for (const auto& p : pairs) all.push_back(&p);
    out.push_back(summarize_stratum("all", all));
    for (double th : thresholds) {
        std::vector<const PairCorrelation*> sel;
        for (const auto& p : pairs)
            if (p.t_stat > th) sel.push_back(&p);
        char tag[32];
        std::snprintf(tag, sizeof(tag), "t>%g", th);
        out.push_back(summarize_stratum(tag, sel));
    }
    return out;
}

std::vector<DivisionSummary> division_summary(const std::vector<PairCorrelation>& pairs,
                                              const std::map<std::string, MsaMeta>& metadata,
                                              double t_threshold) {
    std::map<std::string, DivisionSummary> acc;
    std::map<std::string, double> sums;
    for (const auto& p : pairs) {
        const int da = metadata.at(p.id_a).census_division;
        const int db = metadata.at(p.id_b).census_division;
        if (da != db) continue;
        const std::string key =
            da == kDivisionCalifornia ? "ca" : "division" + std::to_string(da);
        auto& row = acc[key];
        row.division = key;
        ++row.n;
        if (p.t_stat > t_threshold) ++row.n_significant;
        sums[key] += p.r;
    }
    std::vector<DivisionSummary> out;
    for (auto& [key, row] : acc) {
        row.pct_significant = 100.0 * static_cast<double>(row.n_significant) /
                              static_cast<double>(row.n);
        row.mean_r = sums[key] / static_cast<double>(row.n);
        out.push_back(row);
    }
    // division1..division9 then ca
    std::sort(out.begin(), out.end(), [](const DivisionSummary& a, const DivisionSummary& b) {
        if ((a.division == "ca") != (b.division == "ca")) return b.division == "ca";
        return a.division < b.division;
    });
    return out;
}

}  // namespace hpt
