#pragma once

#include "covidfc/types.hpp"

#include <string_view>

namespace covidfc::nn {

enum class Loss { MSE, MAE };

constexpr std::string_view to_string(Loss l) { return l == Loss::MSE ? "MSE" : "MAE"; }

/// Mean over every element of the batch.
template <typename Scalar>
Scalar loss_value(Loss kind, const MatrixX<Scalar>& prediction, const MatrixX<Scalar>& target) {
    const auto diff = (prediction - target).array();
    return kind == Loss::MSE ? diff.square().mean() : diff.abs().mean();
}

/// d loss / d prediction. MAE uses sign(0) = 0.
template <typename Scalar>
MatrixX<Scalar> loss_gradient(Loss kind, const MatrixX<Scalar>& prediction, const MatrixX<Scalar>& target) {
    const auto n = static_cast<Scalar>(prediction.size());
    const MatrixX<Scalar> diff = prediction - target;
    if (kind == Loss::MSE) return (Scalar(2) / n) * diff;
    return diff.unaryExpr([n](Scalar d) { return (d > 0 ? Scalar(1) : d < 0 ? Scalar(-1) : Scalar(0)) / n; });
}

}  // namespace covidfc::nn
