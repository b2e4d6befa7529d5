#include "hpt/series.hpp"

#include <algorithm>
#include <array>

namespace hpt {

namespace {

const std::map<std::string, int>& state_division_map() {
    static const std::map<std::string, int> map = [] {
        std::map<std::string, int> m;
        auto add = [&m](int division, std::initializer_list<const char*> states) {
            for (const char* s : states) m[s] = division;
        };
        m["CA"] = kDivisionCalifornia;
        add(1, {"AK", "HI", "OR", "WA"});
        add(2, {"AZ", "CO", "ID", "MT", "NM", "NV", "UT", "WY"});
        add(3, {"IA", "KS", "MN", "MO", "ND", "NE", "SD"});
        add(4, {"AR", "LA", "OK", "TX"});
        add(5, {"IL", "IN", "MI", "OH", "WI"});
        add(6, {"AL", "KY", "MS", "TN"});
        add(7, {"DC", "DE", "FL", "GA", "MD", "NC", "SC", "VA", "WV"});
        add(8, {"NJ", "NY", "PA"});
        add(9, {"CT", "MA", "ME", "NH", "RI", "VT"});
        return m;
    }();
    return map;
}

const std::array<const char*, 10> kCoastalCaliforniaMsas = {
    "Los Angeles", "Oakland",       "Oxnard",    "San Diego",     "San Francisco",
    "San Jose",    "San Luis Obispo", "Santa Ana", "Santa Barbara", "Santa Cruz"};

}  // namespace

int census_division_for_state(const std::string& state) {
    auto it = state_division_map().find(state);
    if (it == state_division_map().end())
        throw DataError("unknown state code: '" + state + "'");
    return it->second;
}

bool is_california_coastal_name(const std::string& msa_name) {
    return std::any_of(kCoastalCaliforniaMsas.begin(), kCoastalCaliforniaMsas.end(),
                       [&](const char* n) { return msa_name == n; });
}

void ReturnPanel::compute_grid() {
    bool first = true;
    for (const auto& [id, s] : series) {
        if (s.length() == 0) continue;
        QuarterId last = s.end() - 1;
        if (first || s.start < grid_min) grid_min = s.start;
        if (first || last > grid_max) grid_max = last;
        first = false;
    }
}

const std::map<std::string, FactorTransform>& default_factor_transforms() {
    static const std::map<std::string, FactorTransform> m = {
        {"CNP16OV", FactorTransform::log_pct_change},
        {"CPILFESL", FactorTransform::log_pct_change},
        {"FEDFUNDS", FactorTransform::log_level},
        {"GS10", FactorTransform::log_level},
        {"INDPRO", FactorTransform::log_pct_change},
        {"PAYEMS", FactorTransform::log_pct_change},
        {"PERMIT1", FactorTransform::log_level},
        {"PPIITM", FactorTransform::log_pct_change},
        {"UMCSENT", FactorTransform::log_level},
        {"UNRATE", FactorTransform::log_level},
        {"SP500", FactorTransform::log_pct_change},
        {"INCOME", FactorTransform::log_pct_change},
    };
    return m;
}

}  // namespace hpt
