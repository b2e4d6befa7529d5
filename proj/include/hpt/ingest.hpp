#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "hpt/series.hpp"

namespace hpt {

struct HpiData {
    std::map<std::string, Series> levels;  // price index levels, keyed by msa_id
    std::map<std::string, MsaMeta> metadata;
};

// Schema: msa_id,msa_name,state,year,quarter,index. Quarters must be
// contiguous and ascending per MSA; duplicates and unknown states are errors
// carrying the offending row number.
HpiData parse_hpi_csv(const std::filesystem::path& path);

// Schema: quarter_id,series_id,value with quarter_id formatted YYYYQn.
std::map<std::string, Series> parse_factor_csv(const std::filesystem::path& path);

// Applies the per-factor transform: log_pct_change series become 100 * delta
// ln (one quarter shorter), log_level series become ln(level). Requires
// exactly the default twelve factor keys unless `transforms` overrides the set.
FactorPanel transform_factors(const std::map<std::string, Series>& raw,
                              const std::map<std::string, FactorTransform>& transforms =
                                  default_factor_transforms());

// Return panel from price levels: per-MSA log returns plus metadata.
ReturnPanel build_return_panel(const HpiData& hpi);

}  // namespace hpt
