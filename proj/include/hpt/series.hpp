#pragma once

#include <map>
#include <string>
#include <vector>

#include "hpt/error.hpp"
#include "hpt/quarter.hpp"

namespace hpt {

// Census division tag. Divisions 1-9 per the standard state groupings, with
// California always broken out as its own cohort (never division 1).
constexpr int kDivisionCalifornia = 0;

enum class CoastFlag { not_california, coastal, inland };

struct MsaMeta {
    std::string msa_id;
    std::string name;
    std::string state;           // two-letter code
    int census_division = 0;     // 1..9, or kDivisionCalifornia
    CoastFlag coast_flag = CoastFlag::not_california;
};

// Maps a two-letter state code to its census division (CA -> kDivisionCalifornia).
// Throws DataError for unknown codes.
int census_division_for_state(const std::string& state);

// The ten coastal California MSA names; everything else in CA is inland.
bool is_california_coastal_name(const std::string& msa_name);

// Contiguous quarterly series. Ragged coverage is start + length only; a gap
// inside a series is an ingestion error, never a sentinel value.
struct Series {
    QuarterId start;
    std::vector<double> values;

    int length() const { return static_cast<int>(values.size()); }
    // One past the last covered quarter.
    QuarterId end() const { return start + length(); }
    bool covers(QuarterId q) const { return q >= start && q < end(); }
    double at(QuarterId q) const { return values[static_cast<size_t>(q - start)]; }
};

struct ReturnPanel {
    std::map<std::string, Series> series;    // keyed by msa_id
    std::map<std::string, MsaMeta> metadata;
    QuarterId grid_min;
    QuarterId grid_max;  // inclusive

    void compute_grid();
};

enum class FactorTransform { log_pct_change, log_level };

struct FactorPanel {
    std::map<std::string, Series> factors;
    std::map<std::string, FactorTransform> transform_tag;
};

// The twelve factor keys and their transforms.
const std::map<std::string, FactorTransform>& default_factor_transforms();

}  // namespace hpt
