#pragma once

#include "covidfc/nn/adam.hpp"
#include "covidfc/nn/init.hpp"
#include "covidfc/nn/loss.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace covidfc::nn {

struct TrainConfig {
    int batch_size = 200;
    double learning_rate = 0.003;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-7;
    int max_epochs = 1000;
    int early_stop_patience = 100;
    Loss loss = Loss::MSE;
    std::uint64_t seed = 0;

    void validate() const;
};

template <typename Scalar>
struct SampleMatrix {
    MatrixX<Scalar> inputs;   // samples x features
    MatrixX<Scalar> targets;  // samples x outputs

    [[nodiscard]] Index size() const { return inputs.rows(); }
};

struct EpochRecord {
    int epoch = 0;  // 1-based
    double train_loss = 0.0;
    double validation_loss = 0.0;
};

enum class TrainStatus { MaxEpochs, EarlyStopped, Diverged };

struct TrainHistory {
    std::vector<EpochRecord> epochs;
    int best_epoch = 0;
    int stopped_epoch = 0;
    TrainStatus status = TrainStatus::MaxEpochs;
    std::string diagnostic;
};

void write_history_csv(std::ostream& out, const TrainHistory& history);

/// Optional hooks. `validation_loss` replaces the built-in validation pass;
/// `on_epoch_end` sees the model right after each epoch's updates.
template <typename Model>
struct TrainHooks {
    std::function<double(const Model&, int epoch)> validation_loss;
    std::function<void(const Model&, int epoch)> on_epoch_end;
};

inline void TrainConfig::validate() const {
    if (batch_size <= 0 || max_epochs <= 0 || early_stop_patience <= 0 || !(learning_rate > 0.0) ||
        !(beta1 > 0.0 && beta1 < 1.0) || !(beta2 > 0.0 && beta2 < 1.0) || !(epsilon > 0.0)) {
        throw ConfigError("train config: all hyperparameters must be positive (betas in (0,1))");
    }
}

/// Minibatch Adam with per-epoch seeded shuffling and early stopping on the
/// validation loss (checked at epoch end). The best-validation weights are
/// restored before returning, whatever the stop reason.
///
/// Model needs pack(), unpack(), evaluate_loss(x, y, loss) and
/// loss_and_gradient(x, y, loss, grad, rng*).
template <typename Scalar, typename Model>
TrainHistory train(Model& model, const TrainConfig& config, const SampleMatrix<Scalar>& train_set,
                   const SampleMatrix<Scalar>& validation_set, const TrainHooks<Model>& hooks = {}) {
    config.validate();
    if (train_set.size() == 0) throw InsufficientHistory("train: empty training set");
    if (validation_set.size() == 0 && !hooks.validation_loss) {
        throw InsufficientHistory("train: empty validation set");
    }

    Rng rng(config.seed);
    VectorX<Scalar> params = model.pack();
    Adam<Scalar> adam(params.size(), {config.learning_rate, config.beta1, config.beta2, config.epsilon});
    VectorX<Scalar> best_params = params;
    double best_loss = std::numeric_limits<double>::infinity();
    int wait = 0;

    TrainHistory history;
    std::vector<Index> order(static_cast<std::size_t>(train_set.size()));
    std::iota(order.begin(), order.end(), Index{0});
    VectorX<Scalar> grad;
    MatrixX<Scalar> xb, yb;

    for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double loss_sum = 0.0;
        try {
            for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(config.batch_size)) {
                const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
                const auto rows = static_cast<Index>(stop - start);
                xb.resize(rows, train_set.inputs.cols());
                yb.resize(rows, train_set.targets.cols());
                for (Index r = 0; r < rows; ++r) {
                    const Index src = order[start + static_cast<std::size_t>(r)];
                    xb.row(r) = train_set.inputs.row(src);
                    yb.row(r) = train_set.targets.row(src);
                }
                const Scalar batch_loss = model.loss_and_gradient(xb, yb, config.loss, grad, &rng);
                loss_sum += static_cast<double>(batch_loss) * static_cast<double>(rows);
                adam.step(params, grad);
                model.unpack(params);
            }
        } catch (const NumericalError& e) {
            history.status = TrainStatus::Diverged;
            history.diagnostic = e.what();
            history.stopped_epoch = epoch;
            break;
        }

        if (hooks.on_epoch_end) hooks.on_epoch_end(model, epoch);

        EpochRecord rec;
        rec.epoch = epoch;
        rec.train_loss = loss_sum / static_cast<double>(train_set.size());
        try {
            rec.validation_loss =
                hooks.validation_loss
                    ? hooks.validation_loss(model, epoch)
                    : static_cast<double>(model.evaluate_loss(validation_set.inputs, validation_set.targets, config.loss));
        } catch (const NumericalError& e) {
            rec.validation_loss = std::numeric_limits<double>::quiet_NaN();
            history.diagnostic = e.what();
        }
        history.epochs.push_back(rec);
        history.stopped_epoch = epoch;

        if (!std::isfinite(rec.validation_loss) || !std::isfinite(rec.train_loss)) {
            history.status = TrainStatus::Diverged;
            if (history.diagnostic.empty()) history.diagnostic = "non-finite loss at epoch " + std::to_string(epoch);
            break;
        }
        if (rec.validation_loss < best_loss) {
            best_loss = rec.validation_loss;
            best_params = params;
            history.best_epoch = epoch;
            wait = 0;
        } else if (++wait >= config.early_stop_patience) {
            history.status = TrainStatus::EarlyStopped;
            break;
        }
    }

    if (history.best_epoch > 0) model.unpack(best_params);
    return history;
}

}  // namespace covidfc::nn
