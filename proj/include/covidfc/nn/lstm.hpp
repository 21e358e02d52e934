#pragma once

#include "covidfc/nn/init.hpp"

#include <string>
#include <vector>

namespace covidfc::nn {

/// One LSTM layer. Gate blocks along the 4*units axis are ordered
/// (input, forget, cell, output).
template <typename Scalar>
struct LstmLayer {
    MatrixX<Scalar> input_kernel;      // input_dim x 4*units
    MatrixX<Scalar> recurrent_kernel;  // units x 4*units
    VectorX<Scalar> bias;              // 4*units
    Scalar input_dropout = 0;

    [[nodiscard]] Index units() const { return recurrent_kernel.rows(); }
    [[nodiscard]] Index input_dim() const { return input_kernel.rows(); }

    static LstmLayer zeros(Index input_dim, Index units) {
        LstmLayer l;
        l.input_kernel = MatrixX<Scalar>::Zero(input_dim, 4 * units);
        l.recurrent_kernel = MatrixX<Scalar>::Zero(units, 4 * units);
        l.bias = VectorX<Scalar>::Zero(4 * units);
        return l;
    }

    /// Glorot-uniform input kernel, orthogonal recurrent kernel, zero bias
    /// except 1 on the forget block.
    static LstmLayer initialized(Index input_dim, Index units, Rng& rng, Scalar dropout = 0) {
        LstmLayer l;
        l.input_kernel = glorot_uniform<Scalar>(input_dim, 4 * units, rng);
        l.recurrent_kernel = orthogonal<Scalar>(units, 4 * units, rng);
        l.bias = VectorX<Scalar>::Zero(4 * units);
        l.bias.segment(units, units).setOnes();
        l.input_dropout = dropout;
        return l;
    }
};

/// Activations kept for backpropagation through time. Index 0 of `hidden`
/// and `cell` holds the zero initial state; step t lives at t + 1.
template <typename Scalar>
struct LstmCache {
    std::vector<MatrixX<Scalar>> inputs;  // after the dropout mask
    std::vector<MatrixX<Scalar>> hidden;
    std::vector<MatrixX<Scalar>> cell;
    std::vector<MatrixX<Scalar>> gate_i, gate_f, gate_g, gate_o;
    MatrixX<Scalar> input_mask;  // empty when no dropout was applied

    [[nodiscard]] Index steps() const { return static_cast<Index>(inputs.size()); }
    [[nodiscard]] const MatrixX<Scalar>& last_hidden() const { return hidden.back(); }
};

template <typename Scalar>
struct LstmGradients {
    LstmLayer<Scalar> params;
    std::vector<MatrixX<Scalar>> inputs;  // d loss / d x_t, batch x input_dim
};

namespace detail {

template <typename Derived>
auto sigmoid(const Eigen::MatrixBase<Derived>& x) {
    using S = typename Derived::Scalar;
    return (S(1) / (S(1) + (-x.array()).exp())).matrix();
}

}  // namespace detail

/// Forward pass over a sequence of (batch x input_dim) steps. `input_mask`
/// (batch x input_dim, already scaled by 1/(1 - rate)) multiplies every
/// step's input when non-empty. Throws NumericalError on non-finite state.
template <typename Scalar>
LstmCache<Scalar> lstm_forward(const LstmLayer<Scalar>& layer,
                               const std::vector<MatrixX<Scalar>>& sequence,
                               const MatrixX<Scalar>& input_mask = {}) {
    using Mat = MatrixX<Scalar>;
    const Index u = layer.units();
    if (sequence.empty()) throw ConfigError("lstm_forward: empty sequence");
    const Index batch = sequence.front().rows();

    LstmCache<Scalar> cache;
    cache.input_mask = input_mask;
    cache.hidden.push_back(Mat::Zero(batch, u));
    cache.cell.push_back(Mat::Zero(batch, u));
    for (std::size_t t = 0; t < sequence.size(); ++t) {
        const Mat& raw = sequence[t];
        if (raw.rows() != batch || raw.cols() != layer.input_dim()) {
            throw ConfigError("lstm_forward: step " + std::to_string(t) + " has the wrong shape");
        }
        Mat x = input_mask.size() == 0 ? raw : Mat(raw.cwiseProduct(input_mask));
        Mat z = x * layer.input_kernel + cache.hidden.back() * layer.recurrent_kernel;
        z.rowwise() += layer.bias.transpose();

        Mat i = detail::sigmoid(z.middleCols(0, u));
        Mat f = detail::sigmoid(z.middleCols(u, u));
        Mat g = z.middleCols(2 * u, u).array().tanh().matrix();
        Mat o = detail::sigmoid(z.middleCols(3 * u, u));
        Mat c = f.cwiseProduct(cache.cell.back()) + i.cwiseProduct(g);
        Mat h = o.cwiseProduct(Mat(c.array().tanh().matrix()));
        if (!h.allFinite() || !c.allFinite()) {
            throw NumericalError("lstm_forward: non-finite state at step " + std::to_string(t) +
                                 " (max |c| = " + std::to_string(static_cast<double>(c.cwiseAbs().maxCoeff())) + ")");
        }
        cache.inputs.push_back(std::move(x));
        cache.gate_i.push_back(std::move(i));
        cache.gate_f.push_back(std::move(f));
        cache.gate_g.push_back(std::move(g));
        cache.gate_o.push_back(std::move(o));
        cache.cell.push_back(std::move(c));
        cache.hidden.push_back(std::move(h));
    }
    return cache;
}

/// Backpropagation through time. `hidden_gradients[t]` is d loss / d h_t
/// for step t (batch x units); pass zero matrices for steps without loss.
template <typename Scalar>
LstmGradients<Scalar> lstm_backward(const LstmLayer<Scalar>& layer, const LstmCache<Scalar>& cache,
                                    const std::vector<MatrixX<Scalar>>& hidden_gradients) {
    using Mat = MatrixX<Scalar>;
    const Index u = layer.units();
    const Index steps = cache.steps();
    if (static_cast<Index>(hidden_gradients.size()) != steps) {
        throw ConfigError("lstm_backward: need one hidden gradient per step");
    }
    const Index batch = cache.hidden.front().rows();

    LstmGradients<Scalar> grads;
    grads.params = LstmLayer<Scalar>::zeros(layer.input_dim(), u);
    grads.inputs.resize(static_cast<std::size_t>(steps));

    Mat dh_next = Mat::Zero(batch, u);
    Mat dc_next = Mat::Zero(batch, u);
    Mat dz(batch, 4 * u);
    for (Index t = steps - 1; t >= 0; --t) {
        const auto k = static_cast<std::size_t>(t);
        const Mat& i = cache.gate_i[k];
        const Mat& f = cache.gate_f[k];
        const Mat& g = cache.gate_g[k];
        const Mat& o = cache.gate_o[k];
        const Mat& c_prev = cache.cell[k];
        const Mat tanh_c = cache.cell[k + 1].array().tanh().matrix();

        const Mat dh = hidden_gradients[k] + dh_next;
        const auto one = Scalar(1);
        const Mat dc = dc_next + Mat(dh.array() * o.array() * (one - tanh_c.array().square()));
        dz.middleCols(0, u) = (dc.array() * g.array() * i.array() * (one - i.array())).matrix();
        dz.middleCols(u, u) = (dc.array() * c_prev.array() * f.array() * (one - f.array())).matrix();
        dz.middleCols(2 * u, u) = (dc.array() * i.array() * (one - g.array().square())).matrix();
        dz.middleCols(3 * u, u) = (dh.array() * tanh_c.array() * o.array() * (one - o.array())).matrix();

        grads.params.input_kernel.noalias() += cache.inputs[k].transpose() * dz;
        grads.params.recurrent_kernel.noalias() += cache.hidden[k].transpose() * dz;
        grads.params.bias += dz.colwise().sum().transpose();

        Mat dx = dz * layer.input_kernel.transpose();
        if (cache.input_mask.size() != 0) dx = dx.cwiseProduct(cache.input_mask);
        grads.inputs[k] = std::move(dx);
        dh_next.noalias() = dz * layer.recurrent_kernel.transpose();
        dc_next = dc.cwiseProduct(f);
    }
    return grads;
}

/// Convenience for losses that only read the final hidden state.
template <typename Scalar>
LstmGradients<Scalar> lstm_backward_last(const LstmLayer<Scalar>& layer, const LstmCache<Scalar>& cache,
                                         const MatrixX<Scalar>& last_hidden_gradient) {
    std::vector<MatrixX<Scalar>> dh(static_cast<std::size_t>(cache.steps()),
                                    MatrixX<Scalar>::Zero(last_hidden_gradient.rows(), layer.units()));
    dh.back() = last_hidden_gradient;
    return lstm_backward(layer, cache, dh);
}

}  // namespace covidfc::nn
