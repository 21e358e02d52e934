#pragma once

#include "covidfc/types.hpp"

#include <cmath>

namespace covidfc::nn {

struct AdamConfig {
    double learning_rate = 0.003;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-7;
};

/// Adam over a flat parameter vector, with the bias correction folded into
/// the step size: lr_t = lr * sqrt(1 - beta2^t) / (1 - beta1^t).
template <typename Scalar>
class Adam {
public:
    Adam(Index parameter_count, AdamConfig config)
        : config_(config),
          m_(VectorX<Scalar>::Zero(parameter_count)),
          v_(VectorX<Scalar>::Zero(parameter_count)) {}

    void step(VectorX<Scalar>& params, const VectorX<Scalar>& grad) {
        ++t_;
        const Scalar b1 = static_cast<Scalar>(config_.beta1);
        const Scalar b2 = static_cast<Scalar>(config_.beta2);
        m_ = b1 * m_ + (Scalar(1) - b1) * grad;
        v_ = b2 * v_ + (Scalar(1) - b2) * grad.cwiseAbs2();
        const double lr_t = config_.learning_rate * std::sqrt(1.0 - std::pow(config_.beta2, t_)) /
                            (1.0 - std::pow(config_.beta1, t_));
        params.array() -= static_cast<Scalar>(lr_t) * m_.array() /
                          (v_.array().sqrt() + static_cast<Scalar>(config_.epsilon));
    }

    [[nodiscard]] long iterations() const { return t_; }

private:
    AdamConfig config_;
    VectorX<Scalar> m_, v_;
    long t_ = 0;
};

}  // namespace covidfc::nn
