#pragma once

#include "covidfc/config.hpp"
#include "covidfc/evaluation.hpp"
#include "covidfc/nn/network.hpp"
#include "covidfc/nn/train.hpp"

#include <atomic>
#include <algorithm>
#include <exception>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace covidfc {

/// Runs f(0..n-1) on `workers` threads pulling indices from a shared
/// counter. The first exception thrown by any task is rethrown after all
/// workers have joined.
template <typename F>
void parallel_for(std::size_t n, int workers, F&& f) {
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                f(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    const auto count = static_cast<std::size_t>(std::max(1, workers));
    if (count == 1 || n <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < std::min(count, n); ++w) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);
}

/// Deterministic per-task seed from the run seed and a task key.
std::uint64_t derive_seed(std::uint64_t base, std::string_view key);

/// Appends one summed series per country, ids "<country>_TOTAL".
std::vector<RegionSeries> with_country_aggregates(std::vector<RegionSeries> regions);

/// The days of `range` the series actually covers.
DateRange observed_range(const DatedSeries& series, const DateRange& range);

/// Test anchors t in `test` whose whole forward target window is inside
/// `test` and observed.
std::vector<Date> test_anchors(const DatedSeries& norm, const DateRange& test, int horizon);

struct RegionWindows {
    std::vector<WindowSample> fit;
    std::vector<WindowSample> validation;
};

/// Network windows over the observed part of `train`: 28-day inputs and
/// targets divided by 1000; the last `validation_fraction` of the anchor
/// days go to validation.
RegionWindows nn_region_windows(const NormalizedSeries& norm, nn::Architecture arch, int horizon,
                                const DateRange& train, double validation_fraction,
                                std::string_view region_id = {});

nn::SampleMatrix<double> to_sample_matrix(std::span<const WindowSample> samples);

struct ExperimentResult {
    std::vector<RunScore> scores;   // sorted by (model, country, region, fold, horizon)
    std::vector<ForecastRun> runs;  // aligned with scores
    std::vector<std::string> skipped;
    std::vector<std::string> failures;

    [[nodiscard]] bool ok() const { return failures.empty(); }
};

/// Executes the (model x horizon x fold x region) grid. When
/// `checkpoint_dir` is non-empty, trained networks are saved there and
/// reused on later runs.
ExperimentResult run_experiment(const RunConfig& config, std::vector<RegionSeries> regions,
                                const std::string& checkpoint_dir = {});

void write_forecasts_csv(std::ostream& out, std::span<const ForecastRun> runs);

}  // namespace covidfc
