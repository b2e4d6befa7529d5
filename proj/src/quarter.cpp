#include "hpt/quarter.hpp"

#include <charconv>

#include "hpt/error.hpp"

namespace hpt {

QuarterId QuarterId::from_year_quarter(int year, int quarter) {
    if (quarter < 1 || quarter > 4)
        throw DataError("quarter out of range 1..4: " + std::to_string(quarter));
    if (year < kBaseYear)
        throw DataError("year before " + std::to_string(kBaseYear) + ": " + std::to_string(year));
    return QuarterId((year - kBaseYear) * 4 + (quarter - 1));
}

QuarterId QuarterId::parse(std::string_view text) {
    if (text.size() != 6 || text[4] != 'Q')
        throw DataError("malformed quarter id (want YYYYQn): '" + std::string(text) + "'");
    int year = 0, quarter = 0;
    auto [py, ey] = std::from_chars(text.data(), text.data() + 4, year);
    auto [pq, eq] = std::from_chars(text.data() + 5, text.data() + 6, quarter);
    if (ey != std::errc{} || eq != std::errc{} || py != text.data() + 4)
        throw DataError("malformed quarter id (want YYYYQn): '" + std::string(text) + "'");
    return from_year_quarter(year, quarter);
}

std::string QuarterId::str() const {
    return std::to_string(year()) + "Q" + std::to_string(quarter());
}

}  // namespace hpt
