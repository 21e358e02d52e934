#pragma once

#include "covidfc/series.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace covidfc {

struct UndefinedScore : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ForecastPoint {
    Date anchor{};
    double predicted = 0.0;
    double actual = 0.0;
};

/// One model's forecasts for one (region, fold, horizon).
struct ForecastRun {
    std::string model;
    std::string region_id;
    Country country = Country::RU;
    int fold = 0;
    int horizon = 0;
    std::vector<ForecastPoint> points;
};

struct MapeResult {
    double value = 0.0;  // percent
    Index n_days = 0;      // days entering the mean
    Index n_excluded = 0;  // days dropped because the actual was 0
};

/// (100 / n) * sum |(A - F) / A| over the days with A != 0. Throws
/// UndefinedScore when no day is left.
MapeResult mape(const Eigen::Ref<const Vector>& actuals, const Eigen::Ref<const Vector>& forecasts);

MapeResult score(const ForecastRun& run);

/// One row of the results CSV.
struct RunScore {
    std::string model;
    Country country = Country::RU;
    std::string region_id;
    int fold = 0;
    int horizon = 0;
    double mape = 0.0;
    Index n_days = 0;
    Index n_excluded = 0;
};

enum class Averaging {
    FoldThenRegion,  // mean over folds per region, then over regions
    Pooled,          // plain mean over all (region, fold) cells
};

inline constexpr int kAverageRow = 0;

struct ScoreCell {
    std::string model;
    Country country = Country::RU;
    int horizon = 0;  // kAverageRow for the mean over horizons
    double mape = 0.0;
    int regions = 0;  // regions entering the mean
    int cells = 0;    // (region, fold) cells entering the mean
};

struct ScoreTable {
    std::vector<ScoreCell> cells;  // sorted by (country, model, horizon), Average last

    [[nodiscard]] std::optional<double> lookup(const std::string& model, int horizon, Country country) const;
};

ScoreTable aggregate(std::span<const RunScore> runs, Averaging averaging = Averaging::FoldThenRegion);

void write_results_csv(std::ostream& out, std::span<const RunScore> rows);
std::vector<RunScore> read_results_csv(std::istream& in);

}  // namespace covidfc
