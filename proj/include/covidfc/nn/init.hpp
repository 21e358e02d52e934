#pragma once

#include "covidfc/types.hpp"

#include <cmath>
#include <random>

namespace covidfc::nn {

using Rng = std::mt19937_64;

/// Glorot-uniform: U(-l, l) with l = sqrt(6 / (fan_in + fan_out)).
template <typename Scalar>
MatrixX<Scalar> glorot_uniform(Index rows, Index cols, Rng& rng) {
    const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
    std::uniform_real_distribution<double> dist(-limit, limit);
    MatrixX<Scalar> m(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) m(i, j) = static_cast<Scalar>(dist(rng));
    }
    return m;
}

/// Orthogonal init: Q factor of a standard-normal matrix, sign-corrected so
/// the decomposition is unique. Rows (or columns, whichever are fewer) are
/// orthonormal.
template <typename Scalar>
MatrixX<Scalar> orthogonal(Index rows, Index cols, Rng& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    const bool tall = rows >= cols;
    const Index r = tall ? rows : cols, c = tall ? cols : rows;
    Matrix a(r, c);
    for (Index j = 0; j < c; ++j) {
        for (Index i = 0; i < r; ++i) a(i, j) = dist(rng);
    }
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix q = qr.householderQ() * Matrix::Identity(r, c);
    const Matrix upper = qr.matrixQR().topRows(c).template triangularView<Eigen::Upper>();
    for (Index j = 0; j < c; ++j) {
        if (upper(j, j) < 0.0) q.col(j) = -q.col(j);
    }
    if (!tall) q.transposeInPlace();
    return q.template cast<Scalar>();
}

}  // namespace covidfc::nn
