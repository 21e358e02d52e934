#pragma once

#include "covidfc/linear_models.hpp"
#include "covidfc/nn/network.hpp"
#include "covidfc/series.hpp"

#include <memory>
#include <string_view>
#include <vector>

namespace covidfc {

enum class ModelKind { DDaily, DSum, EsDaily, EsSum, MlLr, MlSvr, Nn1, Nn2 };

std::string_view model_name(ModelKind kind);
ModelKind parse_model(std::string_view name);
constexpr bool is_neural(ModelKind k) { return k == ModelKind::Nn1 || k == ModelKind::Nn2; }

/// Lag window of the ML models, in SumSeries values.
inline constexpr int kMlLag = 14;
inline constexpr Index kMlMinSamples = 15;

/// Days of history one forecast reads. A region takes part in a fold only
/// with at least model_lag + horizon training days.
int model_lag(ModelKind kind, int horizon);

/// Predicts the next-`horizon` total from the history ending on the anchor.
class RegionForecaster {
public:
    virtual ~RegionForecaster() = default;
    [[nodiscard]] virtual double predict(const Eigen::Ref<const Vector>& history) const = 0;
};

/// Fits a single-region model on `train` (dummy and ES models just
/// remember the horizon; ES refits on every call). Not for neural kinds.
std::unique_ptr<RegionForecaster> fit_region_forecaster(ModelKind kind, const NormalizedSeries& norm,
                                                        const DateRange& train, int horizon,
                                                        const SvrOptions& svr = {});

std::unique_ptr<RegionForecaster> network_forecaster(std::shared_ptr<const nn::LstmNetwork<double>> net);

/// The last kMlLag backward `horizon`-day sums of `history`, oldest first.
Vector ml_features(const Eigen::Ref<const Vector>& history, int horizon);

/// SumSeries windows whose forward target lies inside `train`.
std::vector<WindowSample> ml_training_samples(const NormalizedSeries& norm, const DateRange& train,
                                              int horizon, std::string_view region_id = {});

}  // namespace covidfc
