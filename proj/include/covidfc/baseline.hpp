#pragma once

#include "covidfc/holt_winters.hpp"
#include "covidfc/series.hpp"

namespace covidfc {

/// Today's value times the horizon.
double d_daily_forecast(const DatedSeries& norm, Date anchor, int horizon);

/// Sum of the last `horizon` days, today included.
double d_sum_forecast(const DatedSeries& norm, Date anchor, int horizon);

// History-tail variants: `history` ends on the anchor day.
double d_daily_forecast(const Eigen::Ref<const Vector>& history, int horizon);
double d_sum_forecast(const Eigen::Ref<const Vector>& history, int horizon);

/// Non-overlapping `horizon`-day sums tiled backward from the last day, in
/// chronological order; a partial leading block is dropped.
Vector block_sums(const Eigen::Ref<const Vector>& history, int horizon);

inline constexpr Index kEsSumMinBlocks = 3;

/// Smooth the daily history, forecast `horizon` days, sum them.
double es_daily_predict(const Eigen::Ref<const Vector>& history, int horizon,
                        const HoltWintersOptions& options = {});

/// Smooth the block sums, forecast one block ahead.
double es_sum_predict(const Eigen::Ref<const Vector>& history, int horizon,
                      const HoltWintersOptions& options = {});

}  // namespace covidfc
