#include "covidfc/dates.hpp"

#include "covidfc/types.hpp"

#include <charconv>
#include <cstdio>

namespace covidfc {
namespace {

bool parse_uint(std::string_view text, unsigned& out) {
    if (text.empty()) return false;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

Date checked(int y, unsigned m, unsigned d, std::string_view text) {
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                          std::chrono::day{d}};
    if (!ymd.ok()) throw DataError("invalid calendar date '" + std::string(text) + "'");
    return Date{ymd};
}

}  // namespace

Date parse_iso_date(std::string_view text) {
    unsigned y = 0, m = 0, d = 0;
    if (text.size() != 10 || text[4] != '-' || text[7] != '-' ||
        !parse_uint(text.substr(0, 4), y) || !parse_uint(text.substr(5, 2), m) ||
        !parse_uint(text.substr(8, 2), d)) {
        throw DataError("malformed ISO date '" + std::string(text) + "'");
    }
    return checked(static_cast<int>(y), m, d, text);
}

Date parse_us_short_date(std::string_view text) {
    const auto s1 = text.find('/');
    const auto s2 = s1 == std::string_view::npos ? s1 : text.find('/', s1 + 1);
    unsigned m = 0, d = 0, y = 0;
    if (s2 == std::string_view::npos || !parse_uint(text.substr(0, s1), m) ||
        !parse_uint(text.substr(s1 + 1, s2 - s1 - 1), d) || !parse_uint(text.substr(s2 + 1), y)) {
        throw DataError("malformed M/D/YY date '" + std::string(text) + "'");
    }
    const int year = y < 100 ? 2000 + static_cast<int>(y) : static_cast<int>(y);
    return checked(year, m, d, text);
}

std::string format_iso_date(Date d) {
    const std::chrono::year_month_day ymd{d};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

}  // namespace covidfc
