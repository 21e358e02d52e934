#pragma once

#include "covidfc/types.hpp"

namespace covidfc {

/// ((y + shift)^lambda - 1) / lambda, or log(y + shift) at lambda = 0.
/// Throws NumericalError when y + shift <= 0.
double boxcox(double y, double lambda, double shift = 0.0);

/// Inverse of boxcox. Where 1 + lambda * z <= 0 the transform has no
/// preimage; the result saturates at -shift (lambda > 0) or at a large
/// finite value (lambda < 0).
double inv_boxcox(double z, double lambda, double shift = 0.0);

/// Profile log-likelihood of the Box-Cox model for a sample (already shifted
/// to be positive).
double boxcox_log_likelihood(const Eigen::Ref<const Vector>& positive, double lambda);

/// Golden-section search for the lambda in [lo, hi] that maximizes the
/// log-likelihood of y + shift. Constant samples return 1.
double estimate_boxcox_lambda(const Eigen::Ref<const Vector>& y, double shift, double lo = -1.0,
                              double hi = 2.0);

}  // namespace covidfc
