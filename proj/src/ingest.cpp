#include "hpt/ingest.hpp"

#include <cmath>

#include "hpt/csv.hpp"
#include "hpt/panel_ops.hpp"

namespace hpt {

HpiData parse_hpi_csv(const std::filesystem::path& path) {
    csv::Table t = csv::read(path);
    csv::require_header(t, {"msa_id", "msa_name", "state", "year", "quarter", "index"},
                        path.string());

    HpiData out;
    for (size_t i = 0; i < t.rows.size(); ++i) {
        const auto& row = t.rows[i];
        const std::string where = path.string() + ": row " + std::to_string(i + 2);
        const std::string& id = row[0];
        const int year = csv::parse_int(row[3], where);
        const int quarter = csv::parse_int(row[4], where);
        const double index = csv::parse_double(row[5], where);
        QuarterId q = QuarterId::from_year_quarter(year, quarter);
        if (!(index > 0.0))
            throw DataError(where + ": non-positive index level for '" + id + "'");

        auto [sit, inserted] = out.levels.try_emplace(id);
        Series& s = sit->second;
        if (inserted) {
            s.start = q;
            MsaMeta meta;
            meta.msa_id = id;
            meta.name = row[1];
            meta.state = row[2];
            meta.census_division = census_division_for_state(row[2]);
            if (meta.census_division == kDivisionCalifornia)
                meta.coast_flag = is_california_coastal_name(meta.name) ? CoastFlag::coastal
                                                                        : CoastFlag::inland;
            out.metadata[id] = meta;
        } else {
            if (q < s.end())
                throw DataError(where + ": duplicate or out-of-order quarter " + q.str() +
                                " for '" + id + "'");
            if (q > s.end())
                throw DataError(where + ": gap before quarter " + q.str() + " for '" + id +
                                "' (expected " + s.end().str() + ")");
            const MsaMeta& meta = out.metadata.at(id);
            if (meta.name != row[1] || meta.state != row[2])
                throw DataError(where + ": inconsistent name/state for '" + id + "'");
        }
        s.values.push_back(index);
    }
    return out;
}

std::map<std::string, Series> parse_factor_csv(const std::filesystem::path& path) {
    csv::Table t = csv::read(path);
    csv::require_header(t, {"quarter_id", "series_id", "value"}, path.string());

    std::map<std::string, Series> out;
    for (size_t i = 0; i < t.rows.size(); ++i) {
        const auto& row = t.rows[i];
        const std::string where = path.string() + ": row " + std::to_string(i + 2);
        QuarterId q = QuarterId::parse(row[0]);
        const std::string& id = row[1];
        const double value = csv::parse_double(row[2], where);

        auto [sit, inserted] = out.try_emplace(id);
        Series& s = sit->second;
        if (inserted) {
            s.start = q;
        } else if (q < s.end()) {
            throw DataError(where + ": duplicate or out-of-order quarter " + q.str() +
                            " for '" + id + "'");
        } else if (q > s.end()) {
            throw DataError(where + ": missing quarter " + s.end().str() + " for '" + id + "'");
        }
        s.values.push_back(value);
    }
    return out;
}

FactorPanel transform_factors(const std::map<std::string, Series>& raw,
                              const std::map<std::string, FactorTransform>& transforms) {
    for (const auto& [key, tag] : transforms) {
        if (!raw.count(key)) throw DataError("transform_factors: missing factor '" + key + "'");
    }
    for (const auto& [key, s] : raw) {
        if (!transforms.count(key))
            throw DataError("transform_factors: unexpected factor '" + key + "'");
    }
    if (transforms.count("UMCSENT") && raw.count("UMCSENT")) {
        const QuarterId earliest = QuarterId::parse("1977Q4");
        if (raw.at("UMCSENT").start < earliest)
            throw DataError("UMCSENT starts " + raw.at("UMCSENT").start.str() +
                            ", before 1977Q4");
    }

    FactorPanel panel;
    panel.transform_tag = transforms;
    for (const auto& [key, s] : raw) {
        const FactorTransform tag = transforms.at(key);
        for (int i = 0; i < s.length(); ++i) {
            if (!(s.values[static_cast<size_t>(i)] > 0.0))
                throw DataError("transform_factors: non-positive value in '" + key + "' at " +
                                (s.start + i).str());
        }
        if (tag == FactorTransform::log_pct_change) {
            panel.factors[key] = log_return(s);
        } else {
            Series t;
            t.start = s.start;
            t.values.reserve(s.values.size());
            for (double v : s.values) t.values.push_back(std::log(v));
            panel.factors[key] = std::move(t);
        }
    }
    return panel;
}

ReturnPanel build_return_panel(const HpiData& hpi) {
    ReturnPanel panel;
    panel.metadata = hpi.metadata;
    for (const auto& [id, levels] : hpi.levels)
        panel.series[id] = log_return(levels);
    panel.compute_grid();
    return panel;
}

}  // namespace hpt
