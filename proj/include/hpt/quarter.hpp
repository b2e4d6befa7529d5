#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace hpt {

// Calendar quarter on a contiguous integer grid anchored at 1975Q1 (ordinal 0).
class QuarterId {
public:
    static constexpr int kBaseYear = 1975;

    QuarterId() = default;
    explicit constexpr QuarterId(int ordinal) : ordinal_(ordinal) {}

    static QuarterId from_year_quarter(int year, int quarter);

    // Parses "YYYYQn", e.g. "1983Q4". Throws DataError on malformed input or
    // quarters before 1975Q1.
    static QuarterId parse(std::string_view text);

    constexpr int ordinal() const { return ordinal_; }
    int year() const { return kBaseYear + ordinal_ / 4; }
    int quarter() const { return ordinal_ % 4 + 1; }

    std::string str() const;

    auto operator<=>(const QuarterId&) const = default;

    QuarterId operator+(int quarters) const { return QuarterId(ordinal_ + quarters); }
    QuarterId operator-(int quarters) const { return QuarterId(ordinal_ - quarters); }
    int operator-(QuarterId other) const { return ordinal_ - other.ordinal_; }
    QuarterId& operator++() { ++ordinal_; return *this; }

private:
    int ordinal_ = 0;
};

}  // namespace hpt
