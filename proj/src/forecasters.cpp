#include "covidfc/forecasters.hpp"

#include "covidfc/baseline.hpp"

#include <array>

namespace covidfc {
namespace {

constexpr std::array<std::string_view, 8> kNames{"D-daily", "D-sum", "ES-daily", "ES-sum",
                                                 "ML-LR",   "ML-SVR", "NN1",     "NN2"};

class DummyDaily final : public RegionForecaster {
public:
    explicit DummyDaily(int h) : horizon_(h) {}
    double predict(const Eigen::Ref<const Vector>& history) const override {
        return d_daily_forecast(history, horizon_);
    }

private:
    int horizon_;
};

class DummySum final : public RegionForecaster {
public:
    explicit DummySum(int h) : horizon_(h) {}
    double predict(const Eigen::Ref<const Vector>& history) const override {
        return d_sum_forecast(history, horizon_);
    }

private:
    int horizon_;
};

class Smoothing final : public RegionForecaster {
public:
    Smoothing(int h, bool daily) : horizon_(h), daily_(daily) {}
    double predict(const Eigen::Ref<const Vector>& history) const override {
        return daily_ ? es_daily_predict(history, horizon_) : es_sum_predict(history, horizon_);
    }

private:
    int horizon_;
    bool daily_;
};

class Linear final : public RegionForecaster {
public:
    Linear(LinearModel m, int h) : model_(std::move(m)), horizon_(h) {}
    double predict(const Eigen::Ref<const Vector>& history) const override {
        return covidfc::predict(model_, ml_features(history, horizon_));
    }

private:
    LinearModel model_;
    int horizon_;
};

class Network final : public RegionForecaster {
public:
    explicit Network(std::shared_ptr<const nn::LstmNetwork<double>> net) : net_(std::move(net)) {}
    double predict(const Eigen::Ref<const Vector>& history) const override {
        if (history.size() < net_->input_lag) throw InsufficientHistory("network needs a full input window");
        const auto tail = history.tail(net_->input_lag);
        return net_->kind == nn::Architecture::NN1 ? nn::predict_nn1(*net_, tail)
                                                   : nn::predict_nn2(*net_, tail).total;
    }

private:
    std::shared_ptr<const nn::LstmNetwork<double>> net_;
};

}  // namespace

std::string_view model_name(ModelKind kind) { return kNames[static_cast<std::size_t>(kind)]; }

ModelKind parse_model(std::string_view name) {
    for (std::size_t i = 0; i < kNames.size(); ++i) {
        if (kNames[i] == name) return static_cast<ModelKind>(i);
    }
    throw ConfigError("unknown model '" + std::string(name) + "'");
}

int model_lag(ModelKind kind, int horizon) {
    switch (kind) {
        case ModelKind::DDaily: return 1;
        case ModelKind::DSum: return horizon;
        case ModelKind::EsDaily: return 10;
        case ModelKind::EsSum: return static_cast<int>(kEsSumMinBlocks) * horizon;
        case ModelKind::MlLr:
        case ModelKind::MlSvr: return horizon - 1 + kMlLag;
        case ModelKind::Nn1:
        case ModelKind::Nn2: return nn::kInputLag;
    }
    return 0;
}

Vector ml_features(const Eigen::Ref<const Vector>& history, int horizon) {
    const Index need = horizon - 1 + kMlLag;
    if (history.size() < need) {
        throw InsufficientHistory("ML features need " + std::to_string(need) + " days of history");
    }
    Vector x(kMlLag);
    const Index n = history.size();
    for (Index k = 0; k < kMlLag; ++k) {
        const Index last = n - kMlLag + k;  // day whose backward sum this is
        double acc = 0.0;
        for (Index i = last - horizon + 1; i <= last; ++i) acc += history(i);
        x(k) = acc;
    }
    return x;
}

std::vector<WindowSample> ml_training_samples(const NormalizedSeries& norm, const DateRange& train,
                                              int horizon, std::string_view region_id) {
    // Only observed training days feed the series, so no target leaves `train`.
    const Date end = std::min(norm.end(), train.end);
    const Date first = std::max(norm.start, train.first);
    if (end <= first) return {};
    NormalizedSeries observed;
    observed.start = first;
    observed.values = norm.values.segment(norm.index_of(first), (end - first).count());
    if (observed.size() <= horizon) return {};
    const auto sums = build_sum_series(observed, horizon);
    const auto target = build_target_series(observed, horizon);
    WindowSpec spec;
    spec.lag = kMlLag;
    return make_lag_windows(sums, target, spec, region_id);
}

std::unique_ptr<RegionForecaster> fit_region_forecaster(ModelKind kind, const NormalizedSeries& norm,
                                                        const DateRange& train, int horizon,
                                                        const SvrOptions& svr) {
    switch (kind) {
        case ModelKind::DDaily: return std::make_unique<DummyDaily>(horizon);
        case ModelKind::DSum: return std::make_unique<DummySum>(horizon);
        case ModelKind::EsDaily: return std::make_unique<Smoothing>(horizon, true);
        case ModelKind::EsSum: return std::make_unique<Smoothing>(horizon, false);
        case ModelKind::MlLr:
        case ModelKind::MlSvr: {
            const auto samples = ml_training_samples(norm, train, horizon);
            if (static_cast<Index>(samples.size()) < kMlMinSamples) {
                throw InsufficientHistory("ML models need " + std::to_string(kMlMinSamples) +
                                          " training windows, got " + std::to_string(samples.size()));
            }
            auto model = kind == ModelKind::MlLr ? fit_ols(samples) : fit_linear_svr(samples, svr).model;
            return std::make_unique<Linear>(std::move(model), horizon);
        }
        case ModelKind::Nn1:
        case ModelKind::Nn2: break;
    }
    throw ConfigError("neural models are trained on pooled samples, not per region");
}

std::unique_ptr<RegionForecaster> network_forecaster(std::shared_ptr<const nn::LstmNetwork<double>> net) {
    return std::make_unique<Network>(std::move(net));
}

}  // namespace covidfc
