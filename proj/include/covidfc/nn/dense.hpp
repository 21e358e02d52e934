#pragma once

#include "covidfc/nn/init.hpp"

namespace covidfc::nn {

enum class Activation { Tanh, Linear };

template <typename Scalar>
struct DenseLayer {
    MatrixX<Scalar> kernel;  // in x out
    VectorX<Scalar> bias;    // out
    Activation activation = Activation::Linear;

    static DenseLayer zeros(Index in, Index out, Activation act) {
        return {MatrixX<Scalar>::Zero(in, out), VectorX<Scalar>::Zero(out), act};
    }
    static DenseLayer initialized(Index in, Index out, Activation act, Rng& rng) {
        return {glorot_uniform<Scalar>(in, out, rng), VectorX<Scalar>::Zero(out), act};
    }
};

template <typename Scalar>
struct DenseCache {
    MatrixX<Scalar> input;
    MatrixX<Scalar> output;  // after activation
};

template <typename Scalar>
struct DenseGradients {
    DenseLayer<Scalar> params;
    MatrixX<Scalar> input;
};

template <typename Scalar>
DenseCache<Scalar> dense_forward(const DenseLayer<Scalar>& layer, const MatrixX<Scalar>& x) {
    MatrixX<Scalar> y = x * layer.kernel;
    y.rowwise() += layer.bias.transpose();
    if (layer.activation == Activation::Tanh) y = y.array().tanh().matrix();
    return {x, std::move(y)};
}

template <typename Scalar>
DenseGradients<Scalar> dense_backward(const DenseLayer<Scalar>& layer, const DenseCache<Scalar>& cache,
                                      const MatrixX<Scalar>& output_gradient) {
    MatrixX<Scalar> dz = output_gradient;
    if (layer.activation == Activation::Tanh) {
        dz = (dz.array() * (Scalar(1) - cache.output.array().square())).matrix();
    }
    DenseGradients<Scalar> g;
    g.params.activation = layer.activation;
    g.params.kernel = cache.input.transpose() * dz;
    g.params.bias = dz.colwise().sum().transpose();
    g.input = dz * layer.kernel.transpose();
    return g;
}

}  // namespace covidfc::nn
