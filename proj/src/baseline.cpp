#include "covidfc/baseline.hpp"

#include <algorithm>

namespace covidfc {
namespace {

Index checked_index(const DatedSeries& norm, Date anchor) {
    if (!norm.covers(anchor)) {
        throw InsufficientHistory("anchor " + format_iso_date(anchor) + " outside the series");
    }
    return norm.index_of(anchor);
}

}  // namespace

double d_daily_forecast(const Eigen::Ref<const Vector>& history, int horizon) {
    if (history.size() == 0) throw InsufficientHistory("D-daily needs the anchor day");
    return std::max(0.0, history(history.size() - 1) * horizon);
}

double d_sum_forecast(const Eigen::Ref<const Vector>& history, int horizon) {
    if (history.size() < horizon) {
        throw InsufficientHistory("D-sum needs " + std::to_string(horizon) + " days of history");
    }
    double acc = 0.0;
    for (Index i = history.size() - horizon; i < history.size(); ++i) acc += history(i);
    return std::max(0.0, acc);
}

double d_daily_forecast(const DatedSeries& norm, Date anchor, int horizon) {
    return d_daily_forecast(norm.values.head(checked_index(norm, anchor) + 1), horizon);
}

double d_sum_forecast(const DatedSeries& norm, Date anchor, int horizon) {
    return d_sum_forecast(norm.values.head(checked_index(norm, anchor) + 1), horizon);
}

Vector block_sums(const Eigen::Ref<const Vector>& history, int horizon) {
    if (horizon <= 0) throw ConfigError("forecast horizon must be positive");
    const Index blocks = history.size() / horizon;
    const Index offset = history.size() - blocks * horizon;
    Vector out(blocks);
    for (Index b = 0; b < blocks; ++b) {
        double acc = 0.0;
        for (Index i = 0; i < horizon; ++i) acc += history(offset + b * horizon + i);
        out(b) = acc;
    }
    return out;
}

double es_daily_predict(const Eigen::Ref<const Vector>& history, int horizon,
                        const HoltWintersOptions& options) {
    const auto params = fit_holt_winters(history, options);
    return std::max(0.0, hw_forecast(params, horizon).sum());
}

double es_sum_predict(const Eigen::Ref<const Vector>& history, int horizon,
                      const HoltWintersOptions& options) {
    const Vector blocks = block_sums(history, horizon);
    HoltWintersOptions block_options = options;
    block_options.min_length = std::min(options.min_length, kEsSumMinBlocks);
    const auto params = fit_holt_winters(blocks, block_options);
    return std::max(0.0, hw_forecast(params, 1)(0));
}

}  // namespace covidfc
