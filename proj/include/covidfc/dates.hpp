#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace covidfc {

using Date = std::chrono::sys_days;
using Days = std::chrono::days;

/// Half-open calendar range [first, end).
struct DateRange {
    Date first;
    Date end;

    [[nodiscard]] long days() const { return (end - first).count(); }
    [[nodiscard]] bool empty() const { return end <= first; }
    [[nodiscard]] bool contains(Date d) const { return d >= first && d < end; }
    [[nodiscard]] bool operator==(const DateRange&) const = default;
};

/// Parses `YYYY-MM-DD`. Throws DataError on anything else, including
/// impossible calendar days such as 2021-02-30.
Date parse_iso_date(std::string_view text);

/// Parses the `M/D/YY` headers used by the JHU time-series files.
Date parse_us_short_date(std::string_view text);

std::string format_iso_date(Date d);

constexpr Date make_date(int y, unsigned m, unsigned d) {
    return Date{std::chrono::year{y} / std::chrono::month{m} / std::chrono::day{d}};
}

}  // namespace covidfc
