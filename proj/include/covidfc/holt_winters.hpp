#pragma once

#include "covidfc/types.hpp"

#include <optional>

namespace covidfc {

/// Damped additive-trend exponential smoothing without a seasonal part,
/// fitted in Box-Cox space. `level`/`trend` are the states after the last
/// observation; forecasts start from them.
struct HoltWintersParams {
    double alpha = 0.5;
    double beta = 0.1;
    double phi = 0.98;
    double boxcox_lambda = 1.0;
    double boxcox_shift = 1.0;
    double initial_level = 0.0;
    double initial_trend = 0.0;
    double level = 0.0;
    double trend = 0.0;
    double sse = 0.0;  // in-sample one-step SSE, transformed space
};

inline constexpr double kSmoothingFloor = 1e-4;
inline constexpr double kSmoothingCeil = 1.0 - 1e-4;

struct HoltWintersOptions {
    double shift = 1.0;
    bool use_boxcox = true;
    std::optional<double> fixed_lambda;
    std::optional<double> fixed_phi;
    Index min_length = 10;
};

/// Initial trend: mean of the first min(10, n - 1) first differences.
double initial_trend_estimate(const Eigen::Ref<const Vector>& z);

/// Runs the smoothing recursion over already-transformed data with the
/// smoothing constants and initial states in `params`; fills the final
/// states and the one-step SSE.
HoltWintersParams run_holt_winters(const Eigen::Ref<const Vector>& z, HoltWintersParams params);

/// Same as run_holt_winters but transforms `history` with the Box-Cox
/// settings in `params` and derives the initial states from it.
HoltWintersParams apply_holt_winters(const Eigen::Ref<const Vector>& history, HoltWintersParams params);

/// Least-squares fit of (alpha, beta, phi) by Nelder-Mead on logit
/// coordinates, starting from (0.5, 0.1, 0.98).
HoltWintersParams fit_holt_winters(const Eigen::Ref<const Vector>& history,
                                   const HoltWintersOptions& options = {});

/// h-step forecasts in the original scale, clamped at 0.
Vector hw_forecast(const HoltWintersParams& params, int steps);

/// Same forecasts before the inverse transform.
Vector hw_forecast_transformed(const HoltWintersParams& params, int steps);

}  // namespace covidfc
