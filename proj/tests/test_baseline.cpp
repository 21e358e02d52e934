#include "covidfc/baseline.hpp"
#include "covidfc/boxcox.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace covidfc;

namespace {

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Index>(v.size()));
    Index i = 0;
    for (double x : v) out(i++) = x;
    return out;
}

// Textbook recursion, written out separately from the library.
struct HandRolled {
    double level, trend;
};

HandRolled hand_rolled(const std::vector<double>& z, double a, double b, double phi) {
    const std::size_t k = std::min<std::size_t>(10, z.size() - 1);
    double diff_sum = 0.0;
    for (std::size_t i = 1; i <= k; ++i) diff_sum += z[i] - z[i - 1];
    HandRolled s{z[0], diff_sum / static_cast<double>(k)};
    for (std::size_t t = 1; t < z.size(); ++t) {
        const double prev = s.level;
        s.level = a * z[t] + (1 - a) * (s.level + phi * s.trend);
        s.trend = b * (s.level - prev) + (1 - b) * phi * s.trend;
    }
    return s;
}

}  // namespace

TEST_CASE("dummy forecasts") {
    NormalizedSeries n;
    n.start = make_date(2020, 3, 12);
    n.values = vec({1, 2, 3, 4});
    CHECK(d_sum_forecast(n, n.date_at(3), 2) == 7.0);
    CHECK(d_daily_forecast(n, n.date_at(3), 2) == 8.0);
    CHECK_THROWS_AS(d_sum_forecast(n, n.date_at(0), 2), InsufficientHistory);
    CHECK_THROWS_AS(d_daily_forecast(n, n.end(), 2), InsufficientHistory);

    CHECK(d_daily_forecast(vec({10}), 14) == 140.0);
    CHECK(d_daily_forecast(vec({0}), 42) == 0.0);
    CHECK(d_sum_forecast(Vector::Zero(30), 14) == 0.0);

    const Vector c = Vector::Constant(50, 3.5);
    for (int fh : {14, 28, 42}) CHECK(d_daily_forecast(c, fh) == d_sum_forecast(c, fh));
}

TEST_CASE("D-sum equals the sum series on the anchor") {
    std::mt19937_64 rng(9);
    NormalizedSeries n;
    n.values = covidfc::testing::random_series(rng, 120);
    for (int fh : {14, 28, 42}) {
        const auto s = build_sum_series(n, fh);
        for (Index k = 0; k < s.size(); ++k) {
            CHECK(d_sum_forecast(n, s.date_at(k), fh) == s.values(k));
        }
    }
}

TEST_CASE("Box-Cox identities and round trip") {
    CHECK(boxcox(5.0, 1.0) == doctest::Approx(4.0));
    CHECK(boxcox(std::exp(1.0), 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(boxcox(-1.0, 0.5), NumericalError);
    CHECK_THROWS_AS(boxcox(0.0, 0.5, 0.0), NumericalError);

    std::mt19937_64 rng(1);
    // Per-100k daily values; near lambda = -1 the transform's conditioning
    // grows like y, so much larger inputs cannot round-trip to 1e-12.
    std::uniform_real_distribution<double> y(1e-3, 1e3), lam(-1.0, 2.0);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double v = y(rng), l = lam(rng);
        const double back = inv_boxcox(boxcox(v, l, 1.0), l, 1.0);
        worst = std::max(worst, std::abs(back - v) / v);
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("lambda estimate maximizes the likelihood") {
    std::mt19937_64 rng(4);
    const Vector y = covidfc::testing::epidemic_curve(200, 80.0, 4);
    const double best = estimate_boxcox_lambda(y, 1.0);
    CHECK(best >= -1.0);
    CHECK(best <= 2.0);
    const Vector shifted = y.array() + 1.0;
    const double at_best = boxcox_log_likelihood(shifted, best);
    for (int i = 0; i <= 30; ++i) {
        const double l = -1.0 + 0.1 * i;
        CHECK(boxcox_log_likelihood(shifted, l) <= at_best + 1e-9);
    }
    CHECK(estimate_boxcox_lambda(Vector::Constant(20, 4.0), 1.0) == 1.0);
}

TEST_CASE("Holt-Winters fixed parameters match a hand-rolled recursion") {
    HoltWintersParams p;
    p.alpha = 0.5;
    p.beta = 0.5;
    p.phi = 0.9;
    for (double lambda : {1.0, 0.0, 0.37}) {
        p.boxcox_lambda = lambda;
        p.boxcox_shift = 1.0;
        const Vector y = vec({10, 12, 11, 13});
        const auto fitted = apply_holt_winters(y, p);

        std::vector<double> z;
        for (Index i = 0; i < y.size(); ++i) {
            const double s = y(i) + 1.0;
            z.push_back(lambda == 0.0 ? std::log(s) : (std::pow(s, lambda) - 1.0) / lambda);
        }
        const auto ref = hand_rolled(z, 0.5, 0.5, 0.9);
        const Vector f = hw_forecast(fitted, 5);
        double damp = 0.0;
        for (int h = 1; h <= 5; ++h) {
            damp += std::pow(0.9, h);
            const double zh = ref.level + damp * ref.trend;
            const double expected =
                (lambda == 0.0 ? std::exp(zh) : std::pow(lambda * zh + 1.0, 1.0 / lambda)) - 1.0;
            CHECK(std::abs(f(h - 1) - expected) < 1e-8);
        }
    }
}

TEST_CASE("damped geometric forecast") {
    HoltWintersParams p;
    p.phi = 0.5;
    p.level = 0.0;
    p.trend = 1.0;
    p.boxcox_lambda = 1.0;
    p.boxcox_shift = 0.0;
    const Vector zt = hw_forecast_transformed(p, 3);
    CHECK(zt(0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(zt(1) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(zt(2) == doctest::Approx(0.875).epsilon(1e-15));
    const Vector y = hw_forecast(p, 3);
    CHECK(y(0) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(y(1) == doctest::Approx(1.75).epsilon(1e-15));
    CHECK(y(2) == doctest::Approx(1.875).epsilon(1e-15));

    p.trend = 0.0;
    p.level = 3.0;
    const Vector flat = hw_forecast_transformed(p, 4);
    CHECK((flat.array() == 3.0).all());

    p.phi = 1.0;
    p.trend = 0.25;
    const Vector lin = hw_forecast_transformed(p, 6);
    for (Index h = 1; h < 6; ++h) CHECK(lin(h) - lin(h - 1) == doctest::Approx(0.25));
}

TEST_CASE("Holt-Winters on constants and lines") {
    const Vector c = Vector::Constant(40, 7.0);
    const auto pc = fit_holt_winters(c);
    CHECK(pc.alpha == kSmoothingFloor);
    CHECK(pc.trend == 0.0);
    const Vector fc = hw_forecast(pc, 10);
    for (Index i = 0; i < fc.size(); ++i) CHECK(fc(i) == doctest::Approx(7.0).epsilon(1e-12));

    HoltWintersOptions lin;
    lin.use_boxcox = false;
    lin.fixed_phi = 1.0;
    const double a = 3.0, b = 0.75;
    Vector y(30);
    for (Index t = 0; t < 30; ++t) y(t) = a + b * static_cast<double>(t);
    const auto pl = fit_holt_winters(y, lin);
    const Vector fl = hw_forecast(pl, 14);
    for (int h = 1; h <= 14; ++h) {
        const double expected = a + b * (29 + h);
        CHECK(std::abs(fl(h - 1) - expected) / expected < 1e-6);
    }

    CHECK_THROWS_AS(fit_holt_winters(Vector::Ones(9)), InsufficientHistory);
}

TEST_CASE("optimizer beats random admissible parameters") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(kSmoothingFloor, kSmoothingCeil);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const Vector y = covidfc::testing::epidemic_curve(150, 40.0, seed, 0.2) / 10.0;
        const auto best = fit_holt_winters(y);
        for (int i = 0; i < 100; ++i) {
            HoltWintersParams q = best;
            q.alpha = u(rng);
            q.beta = u(rng);
            q.phi = u(rng);
            CHECK(best.sse <= apply_holt_winters(y, q).sse + 1e-9);
        }
    }
}

TEST_CASE("ES predictions on constants and step changes") {
    for (int fh : {14, 28, 42}) {
        const Vector c = Vector::Constant(200, 2.5);
        CHECK(std::abs(es_daily_predict(c, fh) - fh * 2.5) / (fh * 2.5) < 1e-6);
        CHECK(std::abs(es_sum_predict(c, fh) - fh * 2.5) / (fh * 2.5) < 1e-6);
    }

    Vector step(120);
    step.head(80).setConstant(2.0);
    step.tail(40).setConstant(6.0);
    const double p = es_daily_predict(step, 14);
    CHECK(p >= 14 * 2.0 - 1e-9);
    CHECK(p <= 14 * 6.0 + 1e-9);
}

TEST_CASE("block sums tile backward and drop the partial block") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        std::uniform_int_distribution<int> len(42, 400);
        const Vector h = covidfc::testing::random_series(rng, len(rng));
        for (int fh : {14, 28, 42}) {
            const Vector b = block_sums(h, fh);
            REQUIRE(b.size() == h.size() / fh);
            // Enumerate blocks from the end.
            for (Index k = 0; k < b.size(); ++k) {
                double s = 0.0;
                const Index last = h.size() - 1 - (b.size() - 1 - k) * fh;
                for (Index i = last - fh + 1; i <= last; ++i) s += h(i);
                REQUIRE(std::abs(b(k) - s) <= 1e-12 * std::max(1.0, s));
            }
        }
    }
}

TEST_CASE("forecasts are never negative") {
    Vector falling(130);
    for (Index t = 0; t < 130; ++t) falling(t) = std::max(0.0, 60.0 - 0.5 * static_cast<double>(t));
    for (int fh : {14, 28, 42}) {
        CHECK(es_daily_predict(falling, fh) >= 0.0);
        CHECK(es_sum_predict(falling, fh) >= 0.0);
        CHECK(d_daily_forecast(falling, fh) >= 0.0);
    }
    CHECK_THROWS_AS(es_sum_predict(Vector::Ones(41), 14), InsufficientHistory);
}

TEST_CASE("ES smoke test on a synthetic country curve") {
    const Vector raw = covidfc::testing::epidemic_curve(132, 9000.0, 8);
    const Vector norm = raw * 100000.0 / 146'000'000.0;
    const double d = es_daily_predict(norm, 14);
    const double s = es_sum_predict(norm, 14);
    CHECK(std::isfinite(d));
    CHECK(std::isfinite(s));
    CHECK(d > 0.0);
    CHECK(s > 0.0);
}
