#pragma once

#include "covidfc/dates.hpp"

#include <array>
#include <utility>

namespace covidfc {

inline constexpr int kFoldCount = 5;

/// Cumulative cross-validation plan. `global_end` is the last day of data
/// (inclusive); every boundary belongs to the test side of its fold.
struct FoldPlan {
    std::array<Date, kFoldCount> boundaries{
        make_date(2020, 7, 22), make_date(2020, 12, 2), make_date(2021, 4, 14),
        make_date(2021, 8, 25), make_date(2022, 1, 5)};
    Date global_start = make_date(2020, 3, 12);
    Date global_end = make_date(2022, 2, 15);

    /// Throws ConfigError unless boundaries are strictly increasing and
    /// strictly inside (global_start, global_end).
    void validate() const;
};

struct FoldSplit {
    int fold_index = 0;  // 1-based
    DateRange train;
    DateRange test;
};

std::array<FoldSplit, kFoldCount> split_cumulative(const FoldPlan& plan);

/// Five boundaries spaced as evenly as whole days allow over the plan range.
FoldPlan equally_spaced_plan(Date global_start, Date global_end);

struct ValidationSplit {
    DateRange fit;
    DateRange validation;
};

/// Last ceil(fraction * days) days of `train` become validation.
ValidationSplit validation_tail(const DateRange& train, double fraction = 0.20);

/// True when a sample anchored at `anchor` has its whole forward target
/// window (anchor + 1 .. anchor + horizon) inside `range`.
constexpr bool target_inside(Date anchor, int horizon, const DateRange& range) {
    return anchor >= range.first && anchor + Days{horizon} < range.end;
}

}  // namespace covidfc
