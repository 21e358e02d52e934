#pragma once

#include "covidfc/types.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace covidfc {

struct NelderMeadOptions {
    int max_iterations = 2000;
    double initial_step = 0.5;
    double f_tolerance = 1e-12;
    double x_tolerance = 1e-9;
    int restarts = 2;  // re-launch from the best vertex after convergence
};

template <typename Scalar>
struct NelderMeadResult {
    VectorX<Scalar> x;
    Scalar value;
    int iterations = 0;
};

/// Unconstrained Nelder-Mead simplex minimizer (standard coefficients:
/// reflection 1, expansion 2, contraction 1/2, shrink 1/2).
template <typename Scalar, typename F>
NelderMeadResult<Scalar> nelder_mead(F&& f, VectorX<Scalar> x0, const NelderMeadOptions& opt = {}) {
    const Index n = x0.size();
    NelderMeadResult<Scalar> result{x0, f(x0), 0};

    for (int round = 0; round <= opt.restarts; ++round) {
        std::vector<VectorX<Scalar>> simplex(n + 1, result.x);
        std::vector<Scalar> values(n + 1, result.value);
        for (Index i = 0; i < n; ++i) {
            simplex[i + 1](i) += Scalar(opt.initial_step);
            values[i + 1] = f(simplex[i + 1]);
        }
        std::vector<std::size_t> order(n + 1);

        for (int it = 0; it < opt.max_iterations; ++it, ++result.iterations) {
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
            const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];

            Scalar x_spread = 0;
            for (Index i = 0; i <= n; ++i) {
                x_spread = std::max(x_spread, (simplex[i] - simplex[best]).cwiseAbs().maxCoeff());
            }
            if (values[worst] - values[best] <= Scalar(opt.f_tolerance) * (1 + std::abs(values[best])) &&
                x_spread <= Scalar(opt.x_tolerance)) {
                break;
            }

            VectorX<Scalar> centroid = VectorX<Scalar>::Zero(n);
            for (std::size_t i : order) {
                if (i != worst) centroid += simplex[i];
            }
            centroid /= Scalar(n);

            const VectorX<Scalar> reflected = centroid + (centroid - simplex[worst]);
            const Scalar fr = f(reflected);
            if (fr < values[best]) {
                const VectorX<Scalar> expanded = centroid + Scalar(2) * (centroid - simplex[worst]);
                const Scalar fe = f(expanded);
                if (fe < fr) {
                    simplex[worst] = expanded;
                    values[worst] = fe;
                } else {
                    simplex[worst] = reflected;
                    values[worst] = fr;
                }
                continue;
            }
            if (fr < values[second]) {
                simplex[worst] = reflected;
                values[worst] = fr;
                continue;
            }
            const bool outside = fr < values[worst];
            const VectorX<Scalar> contracted =
                outside ? VectorX<Scalar>(centroid + Scalar(0.5) * (reflected - centroid))
                        : VectorX<Scalar>(centroid + Scalar(0.5) * (simplex[worst] - centroid));
            const Scalar fc = f(contracted);
            if (fc < (outside ? fr : values[worst])) {
                simplex[worst] = contracted;
                values[worst] = fc;
                continue;
            }
            for (Index i = 0; i <= n; ++i) {
                if (static_cast<std::size_t>(i) == best) continue;
                simplex[i] = simplex[best] + Scalar(0.5) * (simplex[i] - simplex[best]);
                values[i] = f(simplex[i]);
            }
        }

        const auto best = static_cast<std::size_t>(
            std::min_element(values.begin(), values.end()) - values.begin());
        if (!(values[best] < result.value)) break;
        result.x = simplex[best];
        result.value = values[best];
    }
    return result;
}

}  // namespace covidfc
