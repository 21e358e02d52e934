#include "covidfc/boxcox.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace covidfc {
namespace {

constexpr double kLambdaZero = 1e-12;

}  // namespace

double boxcox(double y, double lambda, double shift) {
    const double x = y + shift;
    if (!(x > 0.0)) throw NumericalError("boxcox: non-positive input " + std::to_string(x));
    // log1p keeps small y accurate under the shift.
    const double lx = shift > 0.0 ? std::log(shift) + std::log1p(y / shift) : std::log(x);
    if (std::abs(lambda) < kLambdaZero) return lx;
    return std::expm1(lambda * lx) / lambda;
}

double inv_boxcox(double z, double lambda, double shift) {
    double lx = z;
    if (std::abs(lambda) >= kLambdaZero) {
        const double base = lambda * z;
        if (base <= -1.0) {
            return lambda > 0.0 ? -shift : std::sqrt(std::numeric_limits<double>::max());
        }
        lx = std::log1p(base) / lambda;
    }
    if (shift > 0.0) return shift * std::expm1(lx - std::log(shift));
    return std::exp(lx);
}

double boxcox_log_likelihood(const Eigen::Ref<const Vector>& positive, double lambda) {
    const auto n = static_cast<double>(positive.size());
    const Vector z = positive.unaryExpr([lambda](double x) { return boxcox(x, lambda); });
    const double var = (z.array() - z.mean()).square().sum() / n;
    const double log_sum = positive.array().log().sum();
    return (lambda - 1.0) * log_sum - 0.5 * n * std::log(var);
}

double estimate_boxcox_lambda(const Eigen::Ref<const Vector>& y, double shift, double lo, double hi) {
    const Vector x = y.array() + shift;
    if (x.size() < 2 || x.maxCoeff() == x.minCoeff()) return 1.0;
    if (!(x.minCoeff() > 0.0)) throw NumericalError("boxcox: non-positive shifted data");

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = boxcox_log_likelihood(x, c), fd = boxcox_log_likelihood(x, d);
    while (b - a > 1e-7) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = boxcox_log_likelihood(x, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = boxcox_log_likelihood(x, d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace covidfc
