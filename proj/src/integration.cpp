#include "hpt/integration.hpp"

#include <algorithm>
#include <cmath>

#include "hpt/kernels.hpp"

namespace hpt {

PrewhitenResult prewhiten(const Series& returns) {
    if (returns.length() < 8)
        throw DataError("prewhiten: need at least 8 observations, got " +
                        std::to_string(returns.length()));

    PrewhitenResult out;
    out.residuals.start = returns.start + 1;
    const size_t n = returns.values.size();

    const double first = returns.values[0];
    bool constant = std::all_of(returns.values.begin(), returns.values.end(),
                                [&](double v) { return v == first; });
    if (constant) {
        out.constant_input = true;
        out.residuals.values.assign(n - 1, 0.0);
        return out;
    }

    std::vector<std::vector<double>> X(n - 1);
    std::vector<double> y(n - 1);
    for (size_t t = 1; t < n; ++t) {
        X[t - 1] = {1.0, returns.values[t - 1]};
        y[t - 1] = returns.values[t];
    }
    RegressionFit fit = ols_fit(X, y);
    out.residuals.values = std::move(fit.residuals);
    return out;
}

IntegrationSeries rolling_r2(const std::string& msa_id, const Series& returns,
                             const FactorPanel& factors, int window_len) {
    const int n_factors = static_cast<int>(factors.factors.size());
    if (window_len <= n_factors + 1)
        throw ConfigError("rolling_r2: window " + std::to_string(window_len) +
                          " must exceed " + std::to_string(n_factors + 1) + " parameters");

    IntegrationSeries out;
    out.msa_id = msa_id;
    out.window_len = window_len;

    auto window_covered = [&](QuarterId terminal) {
        QuarterId first = terminal - (window_len - 1);
        if (!(returns.covers(first) && returns.covers(terminal))) return false;
        for (const auto& [key, f] : factors.factors)
            if (!(f.covers(first) && f.covers(terminal))) return false;
        return true;
    };

    bool started = false;
    for (QuarterId q = returns.start + (window_len - 1); q < returns.end(); ++q) {
        if (!window_covered(q)) {
            if (started) break;  // coverage is an interval; nothing further can be complete
            continue;
        }
        if (!started) {
            out.r2.start = q;
            started = true;
        }
        std::vector<std::vector<double>> X(static_cast<size_t>(window_len));
        std::vector<double> y(static_cast<size_t>(window_len));
        for (int i = 0; i < window_len; ++i) {
            QuarterId t = q - (window_len - 1) + i;
            auto& row = X[static_cast<size_t>(i)];
            row.reserve(static_cast<size_t>(n_factors) + 1);
            row.push_back(1.0);
            for (const auto& [key, f] : factors.factors) row.push_back(f.at(t));
            y[static_cast<size_t>(i)] = returns.at(t);
        }
        try {
            RegressionFit fit = ols_fit(X, y);
            out.r2.values.push_back(fit.r_squared);
            out.r2.valid.push_back(1);
        } catch (const NumericError& e) {
            out.r2.values.push_back(0.0);
            out.r2.valid.push_back(0);
            out.diagnostics.push_back("window ending " + q.str() + ": " + e.what());
        }
    }
    return out;
}

namespace {

void assign_ranks(std::vector<MsaIntegrationRecord>& records,
                  double MsaIntegrationRecord::* value, int MsaIntegrationRecord::* rank,
                  int MsaIntegrationRecord::* quintile) {
    const int n = static_cast<int>(records.size());
    std::vector<int> order(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const auto& ra = records[static_cast<size_t>(a)];
        const auto& rb = records[static_cast<size_t>(b)];
        if (ra.*value != rb.*value) return ra.*value < rb.*value;
        return ra.msa_id < rb.msa_id;  // deterministic tie break
    });
    for (int pos = 0; pos < n; ++pos) {
        auto& rec = records[static_cast<size_t>(order[static_cast<size_t>(pos)])];
        rec.*rank = pos + 1;
        rec.*quintile = (5 * (pos + 1) + n - 1) / n;  // ceil(5*rank/N)
    }
}

StatSummary summarize(std::vector<double> values) {
    StatSummary s;
    const int n = static_cast<int>(values.size());
    std::sort(values.begin(), values.end());
    const double sum = kernels::sum(values);
    s.mean = sum / n;
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std_dev = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
    s.max = values.back();
    for (int qb = 0; qb < 5; ++qb) {
        // First rank falling in quintile bin qb+1 under ceil(5*rank/N).
        int first_rank = qb * n / 5 + 1;
        s.quintile_min[qb] = values[static_cast<size_t>(std::min(first_rank, n) - 1)];
    }
    return s;
}

}  // namespace

IntegrationReport integration_report(const ReturnPanel& panel,
                                     const std::map<std::string, IntegrationSeries>& integration,
                                     QuarterWindow report_span,
                                     std::vector<std::string>* diagnostics) {
    IntegrationReport report;
    for (const auto& [id, integ] : integration) {
        // Valid R2 quarters clipped to the report span.
        std::vector<double> r2_in_span;
        double first_r2 = 0.0, last_r2 = 0.0;
        for (QuarterId q = std::max(integ.r2.start, report_span.first);
             q < integ.r2.end() && q <= report_span.last; ++q) {
            if (!integ.r2.defined_at(q)) continue;
            if (r2_in_span.empty()) first_r2 = integ.r2.at(q);
            last_r2 = integ.r2.at(q);
            r2_in_span.push_back(integ.r2.at(q));
        }
        if (r2_in_span.empty()) {
            if (diagnostics)
                diagnostics->push_back("'" + id + "': no complete window in report span");
            continue;
        }

        // All valid R2 values, for the trend fit over every available quarter.
        std::vector<double> r2_all;
        for (int i = 0; i < integ.r2.length(); ++i)
            if (integ.r2.valid[static_cast<size_t>(i)])
                r2_all.push_back(integ.r2.values[static_cast<size_t>(i)]);

        const Series& ret = panel.series.at(id);
        const double mean = kernels::sum(ret.values) / ret.length();
        double ss = 0.0;
        for (double v : ret.values) ss += (v - mean) * (v - mean);

        MsaIntegrationRecord rec;
        rec.msa_id = id;
        rec.state = panel.metadata.at(id).state;
        rec.mean_return = mean;
        rec.sigma = ret.length() > 1 ? std::sqrt(ss / (ret.length() - 1)) : 0.0;
        rec.final_r2 = last_r2;
        rec.change_r2 = last_r2 - first_r2;
        rec.trend_t = r2_all.size() >= 3 ? time_trend_fit(r2_all).slope_t_stat : 0.0;
        report.per_msa.push_back(std::move(rec));
    }
    if (report.per_msa.empty())
        throw DataError("integration_report: no MSA with a complete window");

    assign_ranks(report.per_msa, &MsaIntegrationRecord::mean_return,
                 &MsaIntegrationRecord::rank_mean, &MsaIntegrationRecord::quintile_mean);
    assign_ranks(report.per_msa, &MsaIntegrationRecord::sigma,
                 &MsaIntegrationRecord::rank_sigma, &MsaIntegrationRecord::quintile_sigma);
    assign_ranks(report.per_msa, &MsaIntegrationRecord::trend_t,
                 &MsaIntegrationRecord::rank_trend_t, &MsaIntegrationRecord::quintile_trend_t);

    auto collect = [&](double MsaIntegrationRecord::* f) {
        std::vector<double> v;
        v.reserve(report.per_msa.size());
        for (const auto& r : report.per_msa) v.push_back(r.*f);
        return v;
    };
    report.summary.mean_return = summarize(collect(&MsaIntegrationRecord::mean_return));
    report.summary.sigma = summarize(collect(&MsaIntegrationRecord::sigma));
    report.summary.final_r2 = summarize(collect(&MsaIntegrationRecord::final_r2));
    report.summary.change_r2 = summarize(collect(&MsaIntegrationRecord::change_r2));
    report.summary.trend_t = summarize(collect(&MsaIntegrationRecord::trend_t));
    return report;
}

Series mean_r2_series(const std::vector<const IntegrationSeries*>& members, QuarterId from) {
    QuarterId last = from;
    bool any = false;
    for (const auto* m : members) {
        if (m->r2.length() == 0) continue;
        QuarterId end_q = m->r2.end() - 1;
        if (!any || end_q > last) last = end_q;
        any = true;
    }
    Series out;
    out.start = from;
    if (!any) return out;
    for (QuarterId q = from; q <= last; ++q) {
        double acc = 0.0;
        int count = 0;
        for (const auto* m : members) {
            if (m->r2.defined_at(q)) {
                acc += m->r2.at(q);
                ++count;
            }
        }
        if (count == 0) {
            if (out.values.empty()) { out.start = q + 1; continue; }
            break;
        }
        out.values.push_back(acc / count);
    }
    return out;
}

std::map<std::string, Series> cohort_averages(
    const std::map<std::string, IntegrationSeries>& integration,
    const std::vector<QuarterId>& cohort_starts) {
    std::map<std::string, Series> out;
    for (size_t c = 0; c < cohort_starts.size(); ++c) {
        std::vector<const IntegrationSeries*> members;
        for (const auto& [id, integ] : integration)
            if (integ.r2.length() > 0 && integ.r2.start <= cohort_starts[c])
                members.push_back(&integ);
        if (members.empty()) continue;
        out["cohort" + std::to_string(c + 1)] = mean_r2_series(members, cohort_starts[c]);
    }
    return out;
}

std::map<std::string, Series> group_averages(
    const std::map<std::string, IntegrationSeries>& integration,
    const std::map<std::string, MsaMeta>& metadata, GroupBy grouping) {
    std::map<std::string, std::vector<const IntegrationSeries*>> groups;
    for (const auto& [id, integ] : integration) {
        if (integ.r2.length() == 0) continue;
        const MsaMeta& meta = metadata.at(id);
        std::string key;
        if (grouping == GroupBy::coast_flag) {
            switch (meta.coast_flag) {
                case CoastFlag::coastal: key = "ca_coastal"; break;
                case CoastFlag::inland: key = "ca_inland"; break;
                case CoastFlag::not_california: key = "not_ca"; break;
            }
        } else {
            key = meta.census_division == kDivisionCalifornia
                      ? "ca"
                      : "division" + std::to_string(meta.census_division);
        }
        groups[key].push_back(&integ);
    }
    std::map<std::string, Series> out;
    for (const auto& [key, members] : groups) {
        QuarterId from = members.front()->r2.start;
        for (const auto* m : members)
            if (m->r2.start < from) from = m->r2.start;
        out[key] = mean_r2_series(members, from);
    }
    return out;
}

}  // namespace hpt
