#pragma once

#include "covidfc/nn/dense.hpp"
#include "covidfc/nn/loss.hpp"
#include "covidfc/nn/lstm.hpp"

#include <algorithm>
#include <string_view>

namespace covidfc::nn {

enum class Architecture { NN1, NN2 };

constexpr std::string_view to_string(Architecture a) { return a == Architecture::NN1 ? "NN1" : "NN2"; }

/// Days of history fed to the networks.
inline constexpr int kInputLag = 28;
/// Inputs and targets are per-100k values divided by this.
inline constexpr double kNnScale = 1000.0;
inline constexpr double kNn1Dropout = 0.01;

constexpr Loss default_loss(Architecture a) { return a == Architecture::NN1 ? Loss::MSE : Loss::MAE; }

namespace detail {

// Visits every trainable tensor in a fixed order.
template <typename Net, typename F>
void for_each_tensor(Net& net, F&& f) {
    f(net.lstm.input_kernel);
    f(net.lstm.recurrent_kernel);
    f(net.lstm.bias);
    if (net.kind == Architecture::NN1) {
        f(net.hidden.kernel);
        f(net.hidden.bias);
        f(net.output.kernel);
        f(net.output.bias);
    }
}

template <typename Scalar>
std::vector<MatrixX<Scalar>> as_sequence(const MatrixX<Scalar>& x) {
    std::vector<MatrixX<Scalar>> seq;
    seq.reserve(static_cast<std::size_t>(x.cols()));
    for (Index t = 0; t < x.cols(); ++t) seq.emplace_back(x.col(t));
    return seq;
}

}  // namespace detail

/// NN1: LSTM(horizon) -> Dense(horizon, tanh) -> Dense(1, linear), output is
/// the horizon total / 1000.
/// NN2: LSTM(horizon); the last hidden state read unit-per-day is the daily
/// path / 1000.
template <typename Scalar>
struct LstmNetwork {
    Architecture kind = Architecture::NN1;
    int horizon = 14;
    int input_lag = kInputLag;
    LstmLayer<Scalar> lstm;
    DenseLayer<Scalar> hidden;  // NN1 only
    DenseLayer<Scalar> output;  // NN1 only

    [[nodiscard]] Index output_dim() const { return kind == Architecture::NN1 ? 1 : horizon; }

    [[nodiscard]] Index parameter_count() const {
        Index n = 0;
        detail::for_each_tensor(*this, [&](const auto& t) { n += t.size(); });
        return n;
    }

    [[nodiscard]] VectorX<Scalar> pack() const {
        VectorX<Scalar> out(parameter_count());
        Index pos = 0;
        detail::for_each_tensor(*this, [&](const auto& t) {
            out.segment(pos, t.size()) = Eigen::Map<const VectorX<Scalar>>(t.data(), t.size());
            pos += t.size();
        });
        return out;
    }

    void unpack(const VectorX<Scalar>& flat) {
        if (flat.size() != parameter_count()) throw ConfigError("network: parameter vector size mismatch");
        Index pos = 0;
        detail::for_each_tensor(*this, [&](auto& t) {
            Eigen::Map<VectorX<Scalar>>(t.data(), t.size()) = flat.segment(pos, t.size());
            pos += t.size();
        });
    }

    /// Inference pass (no dropout). x is batch x input_lag.
    [[nodiscard]] MatrixX<Scalar> forward(const MatrixX<Scalar>& x) const {
        const auto cache = lstm_forward(lstm, detail::as_sequence(x));
        if (kind == Architecture::NN2) return cache.last_hidden();
        const auto h = dense_forward(hidden, cache.last_hidden());
        return dense_forward(output, h.output).output;
    }

    [[nodiscard]] Scalar evaluate_loss(const MatrixX<Scalar>& x, const MatrixX<Scalar>& y, Loss loss) const {
        return loss_value(loss, forward(x), y);
    }

    /// Batch loss in training mode; writes d loss / d params into `grad`.
    /// Dropout masks are drawn from `rng` when the layer rate is positive.
    Scalar loss_and_gradient(const MatrixX<Scalar>& x, const MatrixX<Scalar>& y, Loss loss,
                             VectorX<Scalar>& grad, Rng* rng) const {
        MatrixX<Scalar> mask;
        if (rng != nullptr && lstm.input_dropout > 0) {
            const double keep = 1.0 - static_cast<double>(lstm.input_dropout);
            std::bernoulli_distribution draw(keep);
            mask.resize(x.rows(), lstm.input_dim());
            for (Index j = 0; j < mask.cols(); ++j) {
                for (Index i = 0; i < mask.rows(); ++i) mask(i, j) = draw(*rng) ? Scalar(1.0 / keep) : Scalar(0);
            }
        }
        return loss_and_gradient_masked(x, y, loss, grad, mask);
    }

    Scalar loss_and_gradient_masked(const MatrixX<Scalar>& x, const MatrixX<Scalar>& y, Loss loss,
                                    VectorX<Scalar>& grad, const MatrixX<Scalar>& mask) const {
        const auto cache = lstm_forward(lstm, detail::as_sequence(x), mask);
        LstmNetwork g = *this;
        Scalar value;
        MatrixX<Scalar> dh;
        if (kind == Architecture::NN2) {
            value = loss_value(loss, cache.last_hidden(), y);
            dh = loss_gradient(loss, cache.last_hidden(), y);
        } else {
            const auto hc = dense_forward(hidden, cache.last_hidden());
            const auto oc = dense_forward(output, hc.output);
            value = loss_value(loss, oc.output, y);
            const auto og = dense_backward(output, oc, loss_gradient(loss, oc.output, y));
            const auto hg = dense_backward(hidden, hc, og.input);
            g.output = og.params;
            g.hidden = hg.params;
            dh = hg.input;
        }
        g.lstm = lstm_backward_last(lstm, cache, dh).params;
        grad = g.pack();
        return value;
    }
};

template <typename Scalar = double>
LstmNetwork<Scalar> make_network(Architecture kind, int horizon, std::uint64_t seed) {
    if (horizon <= 0) throw ConfigError("network horizon must be positive");
    Rng rng(seed);
    LstmNetwork<Scalar> net;
    net.kind = kind;
    net.horizon = horizon;
    net.lstm = LstmLayer<Scalar>::initialized(1, horizon, rng,
                                              kind == Architecture::NN1 ? Scalar(kNn1Dropout) : Scalar(0));
    if (kind == Architecture::NN1) {
        net.hidden = DenseLayer<Scalar>::initialized(horizon, horizon, Activation::Tanh, rng);
        net.output = DenseLayer<Scalar>::initialized(horizon, 1, Activation::Linear, rng);
    }
    return net;
}

struct Nn2Prediction {
    Vector daily;  // per-100k, clamped at 0
    double total = 0.0;
};

/// `history` holds the last input_lag per-100k daily values, oldest first.
template <typename Scalar>
double predict_nn1(const LstmNetwork<Scalar>& net, const Eigen::Ref<const Vector>& history) {
    if (net.kind != Architecture::NN1) throw ConfigError("predict_nn1 called on an NN2 network");
    const MatrixX<Scalar> x = (history.transpose() / kNnScale).template cast<Scalar>();
    return std::max(0.0, static_cast<double>(net.forward(x)(0, 0)) * kNnScale);
}

template <typename Scalar>
Nn2Prediction predict_nn2(const LstmNetwork<Scalar>& net, const Eigen::Ref<const Vector>& history) {
    if (net.kind != Architecture::NN2) throw ConfigError("predict_nn2 called on an NN1 network");
    const MatrixX<Scalar> x = (history.transpose() / kNnScale).template cast<Scalar>();
    Nn2Prediction p;
    p.daily = (net.forward(x).row(0).transpose().template cast<double>() * kNnScale).cwiseMax(0.0);
    p.total = p.daily.sum();
    return p;
}

/// Single linear layer over the flattened window; used as a convex probe
/// for the training loop.
template <typename Scalar>
struct LinearProbe {
    DenseLayer<Scalar> layer;

    [[nodiscard]] VectorX<Scalar> pack() const {
        VectorX<Scalar> out(layer.kernel.size() + layer.bias.size());
        out << Eigen::Map<const VectorX<Scalar>>(layer.kernel.data(), layer.kernel.size()), layer.bias;
        return out;
    }
    void unpack(const VectorX<Scalar>& flat) {
        Eigen::Map<VectorX<Scalar>>(layer.kernel.data(), layer.kernel.size()) = flat.head(layer.kernel.size());
        layer.bias = flat.tail(layer.bias.size());
    }
    [[nodiscard]] Scalar evaluate_loss(const MatrixX<Scalar>& x, const MatrixX<Scalar>& y, Loss loss) const {
        return loss_value(loss, dense_forward(layer, x).output, y);
    }
    Scalar loss_and_gradient(const MatrixX<Scalar>& x, const MatrixX<Scalar>& y, Loss loss,
                             VectorX<Scalar>& grad, Rng*) const {
        const auto cache = dense_forward(layer, x);
        const auto g = dense_backward(layer, cache, loss_gradient(loss, cache.output, y));
        LinearProbe tmp{g.params};
        grad = tmp.pack();
        return loss_value(loss, cache.output, y);
    }
};

}  // namespace covidfc::nn
