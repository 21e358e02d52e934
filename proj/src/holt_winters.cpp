#include "covidfc/holt_winters.hpp"

#include "covidfc/boxcox.hpp"
#include "covidfc/nelder_mead.hpp"

#include <cmath>
#include <limits>

namespace covidfc {
namespace {

double to_unit(double u) {
    return kSmoothingFloor + (kSmoothingCeil - kSmoothingFloor) / (1.0 + std::exp(-u));
}

double from_unit(double p) {
    const double s = (p - kSmoothingFloor) / (kSmoothingCeil - kSmoothingFloor);
    return std::log(s / (1.0 - s));
}

Vector transform(const Eigen::Ref<const Vector>& y, double lambda, double shift) {
    return y.unaryExpr([&](double v) { return boxcox(v, lambda, shift); });
}

}  // namespace

double initial_trend_estimate(const Eigen::Ref<const Vector>& z) {
    const Index k = std::min<Index>(10, z.size() - 1);
    if (k <= 0) return 0.0;
    return (z(k) - z(0)) / static_cast<double>(k);
}

HoltWintersParams run_holt_winters(const Eigen::Ref<const Vector>& z, HoltWintersParams p) {
    double level = p.initial_level;
    double trend = p.initial_trend;
    double sse = 0.0;
    for (Index t = 1; t < z.size(); ++t) {
        const double damped = p.phi * trend;
        const double err = z(t) - (level + damped);
        sse += err * err;
        const double next_level = p.alpha * z(t) + (1.0 - p.alpha) * (level + damped);
        trend = p.beta * (next_level - level) + (1.0 - p.beta) * damped;
        level = next_level;
    }
    p.level = level;
    p.trend = trend;
    p.sse = sse;
    return p;
}

HoltWintersParams apply_holt_winters(const Eigen::Ref<const Vector>& history, HoltWintersParams p) {
    if (history.size() == 0) throw InsufficientHistory("Holt-Winters needs at least one value");
    const Vector z = transform(history, p.boxcox_lambda, p.boxcox_shift);
    p.initial_level = z(0);
    p.initial_trend = initial_trend_estimate(z);
    return run_holt_winters(z, p);
}

HoltWintersParams fit_holt_winters(const Eigen::Ref<const Vector>& history,
                                   const HoltWintersOptions& options) {
    if (history.size() < options.min_length) {
        throw InsufficientHistory("Holt-Winters needs " + std::to_string(options.min_length) +
                                  " values, got " + std::to_string(history.size()));
    }
    HoltWintersParams p;
    const bool flat = history.maxCoeff() == history.minCoeff();
    if (!options.use_boxcox) {
        // lambda = 1 with shift 1 is the identity map.
        p.boxcox_lambda = 1.0;
        p.boxcox_shift = 1.0;
    } else {
        p.boxcox_shift = options.shift;
        p.boxcox_lambda =
            flat ? 1.0 : options.fixed_lambda.value_or(estimate_boxcox_lambda(history, options.shift));
    }

    if (flat) {
        p.alpha = kSmoothingFloor;
        p.beta = kSmoothingFloor;
        p.phi = options.fixed_phi.value_or(p.phi);
        p.initial_level = p.level = boxcox(history(0), p.boxcox_lambda, p.boxcox_shift);
        p.initial_trend = p.trend = 0.0;
        p.sse = 0.0;
        return p;
    }

    const Vector z = transform(history, p.boxcox_lambda, p.boxcox_shift);
    p.initial_level = z(0);
    p.initial_trend = initial_trend_estimate(z);

    const bool free_phi = !options.fixed_phi.has_value();
    auto unpack = [&](const Vector& u) {
        HoltWintersParams q = p;
        q.alpha = to_unit(u(0));
        q.beta = to_unit(u(1));
        q.phi = free_phi ? to_unit(u(2)) : *options.fixed_phi;
        return q;
    };
    auto objective = [&](const Vector& u) {
        const double sse = run_holt_winters(z, unpack(u)).sse;
        return std::isfinite(sse) ? sse : std::numeric_limits<double>::max();
    };

    Vector u0(free_phi ? 3 : 2);
    u0(0) = from_unit(0.5);
    u0(1) = from_unit(0.1);
    if (free_phi) u0(2) = from_unit(0.98);
    const auto best = nelder_mead<double>(objective, u0);
    return run_holt_winters(z, unpack(best.x));
}

Vector hw_forecast_transformed(const HoltWintersParams& p, int steps) {
    Vector out(std::max(steps, 0));
    double damp_sum = 0.0, damp_pow = 1.0;
    for (int h = 0; h < steps; ++h) {
        damp_pow *= p.phi;
        damp_sum += damp_pow;
        out(h) = p.level + damp_sum * p.trend;
    }
    return out;
}

Vector hw_forecast(const HoltWintersParams& p, int steps) {
    return hw_forecast_transformed(p, steps).unaryExpr([&](double z) {
        return std::max(0.0, inv_boxcox(z, p.boxcox_lambda, p.boxcox_shift));
    });
}

}  // namespace covidfc
