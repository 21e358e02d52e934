#pragma once

#include "covidfc/dates.hpp"
#include "covidfc/types.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace covidfc {

enum class Country { US, RU };

std::string_view to_string(Country c);
Country parse_country(std::string_view text);

/// A gap-free daily series: values[i] belongs to start + i days.
struct DatedSeries {
    Date start{};
    Vector values;

    [[nodiscard]] Index size() const { return values.size(); }
    [[nodiscard]] Date date_at(Index i) const { return start + Days{i}; }
    /// One past the last covered day.
    [[nodiscard]] Date end() const { return start + Days{values.size()}; }
    [[nodiscard]] bool covers(Date d) const { return d >= start && d < end(); }
    [[nodiscard]] Index index_of(Date d) const { return (d - start).count(); }
};

/// Raw daily confirmed counts of one region.
struct RegionSeries {
    std::string region_id;
    Country country = Country::RU;
    std::int64_t population = 0;
    Date start{};
    Vector daily_confirmed;

    [[nodiscard]] Date end() const { return start + Days{daily_confirmed.size()}; }
};

/// Daily cases per 100,000 persons.
struct NormalizedSeries : DatedSeries {};

/// values(t) = sum of normalized(t + 1 .. t + horizon); starts on the same
/// day as the normalized series and is `horizon` days shorter.
struct TargetSeries : DatedSeries {
    int horizon = 0;
};

/// values(t) = sum of normalized(t - horizon + 1 .. t); the first value sits
/// on normalized.start + horizon - 1.
struct SumSeries : DatedSeries {
    int horizon = 0;
};

struct WindowSample {
    Vector inputs;
    Vector target;
    std::string region_id;
    Date anchor{};
};

struct WindowSpec {
    int lag = 14;
    double input_scale = 1.0;   // inputs are divided by this
    double target_scale = 1.0;  // targets are divided by this
    std::optional<DateRange> anchors;  // restrict anchor days, if set
};

NormalizedSeries normalize_per_100k(const RegionSeries& series);

TargetSeries build_target_series(const NormalizedSeries& norm, int horizon);

SumSeries build_sum_series(const NormalizedSeries& norm, int horizon);

/// One sample per anchor day t where source holds the `lag` values ending
/// at t (inclusive) and the target is defined at t. Scalar targets.
std::vector<WindowSample> make_lag_windows(const DatedSeries& source, const TargetSeries& target,
                                           const WindowSpec& spec, std::string_view region_id = {});

/// Same anchoring, but the target is the vector of the next `horizon`
/// normalized daily values.
std::vector<WindowSample> make_daily_path_windows(const DatedSeries& source,
                                                  const NormalizedSeries& norm, int horizon,
                                                  const WindowSpec& spec,
                                                  std::string_view region_id = {});

/// Expected sample count for a gap-free source of length n with a forward
/// target of the given horizon: max(0, n - lag - horizon + 1).
constexpr Index window_count(Index n, int lag, int horizon) {
    const Index c = n - lag - horizon + 1;
    return c > 0 ? c : 0;
}

/// Sums regional raw counts and populations of one country over the union
/// of their date spans (days a region does not cover contribute 0).
RegionSeries aggregate_country(std::span<const RegionSeries> regions, Country country,
                               std::string region_id);

}  // namespace covidfc
