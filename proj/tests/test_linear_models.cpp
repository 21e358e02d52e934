#include "covidfc/forecasters.hpp"
#include "covidfc/linear_models.hpp"
#include "support.hpp"

#include <doctest.h>

#include <sstream>

using namespace covidfc;

namespace {

Matrix random_matrix(std::mt19937_64& rng, Index rows, Index cols, double scale = 10.0) {
    std::uniform_real_distribution<double> u(0.0, scale);
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = u(rng);
    return m;
}

double mse(const LinearModel& m, const Matrix& x, const Vector& y) {
    double s = 0.0;
    for (Index i = 0; i < x.rows(); ++i) {
        const double e = predict_raw(m, x.row(i).transpose()) - y(i);
        s += e * e;
    }
    return s / static_cast<double>(x.rows());
}

}  // namespace

TEST_CASE("OLS recovers an exact linear relation") {
    std::mt19937_64 rng(1);
    const Matrix x = random_matrix(rng, 40, 14);
    const Vector y = (2.0 * x.col(0)).array() + 3.0;
    const auto m = fit_ols(x, y);
    const Matrix held = random_matrix(rng, 10, 14);
    for (Index i = 0; i < held.rows(); ++i) {
        const double expected = 2.0 * held(i, 0) + 3.0;
        CHECK(std::abs(predict_raw(m, held.row(i).transpose()) - expected) / expected < 1e-10);
    }
    // Training points are reproduced.
    CHECK(std::abs(predict(m, x.row(0).transpose()) - y(0)) / y(0) < 1e-10);
}

TEST_CASE("OLS on constant targets") {
    std::mt19937_64 rng(2);
    const Matrix x = random_matrix(rng, 30, 14);
    const auto m = fit_ols(x, Vector::Constant(30, 4.25));
    CHECK(m.weights.cwiseAbs().maxCoeff() < 1e-10);
    CHECK(std::abs(m.bias - 4.25) < 1e-10);
}

TEST_CASE("OLS matches a normal-equations oracle") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix x = random_matrix(rng, 50, 14);
        const Vector y = covidfc::testing::random_series(rng, 50, 100.0);
        // Oracle: raw features plus an intercept column, solved via LLT.
        Matrix a(50, 15);
        a.leftCols(14) = x;
        a.col(14).setOnes();
        const Vector coef = (a.transpose() * a).llt().solve(a.transpose() * y);
        const auto m = fit_ols(x, y);
        for (Index i = 0; i < 50; ++i) {
            const double oracle = a.row(i).dot(coef);
            CHECK(std::abs(predict_raw(m, x.row(i).transpose()) - oracle) < 1e-8 * std::max(1.0, std::abs(oracle)));
        }
        // Residuals orthogonal to the preprocessed features.
        Vector r(50);
        for (Index i = 0; i < 50; ++i) r(i) = y(i) - predict_raw(m, x.row(i).transpose());
        const Matrix pre = (x.rowwise() - m.centers.transpose()).array().rowwise() / m.scales.transpose().array();
        CHECK((pre.transpose() * r).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("OLS preprocessing is center then column L2 norm") {
    std::mt19937_64 rng(4);
    const Matrix x = random_matrix(rng, 25, 14);
    const auto m = fit_ols(x, covidfc::testing::random_series(rng, 25));
    for (Index j = 0; j < 14; ++j) {
        const double mean = x.col(j).sum() / 25.0;
        double ss = 0.0;
        for (Index i = 0; i < 25; ++i) ss += (x(i, j) - mean) * (x(i, j) - mean);
        CHECK(m.centers(j) == doctest::Approx(mean).epsilon(1e-14));
        CHECK(m.scales(j) == doctest::Approx(std::sqrt(ss)).epsilon(1e-14));
    }
    Matrix degenerate = x;
    degenerate.col(3).setConstant(2.0);
    CHECK(fit_ols(degenerate, Vector::Ones(25)).scales(3) == 1.0);
}

TEST_CASE("OLS is optimal against random perturbations") {
    std::mt19937_64 rng(5);
    const Matrix x = random_matrix(rng, 60, 14);
    const Vector y = covidfc::testing::random_series(rng, 60, 30.0);
    const auto m = fit_ols(x, y);
    const double base = mse(m, x, y);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        LinearModel p = m;
        Vector d(14);
        for (Index j = 0; j < 14; ++j) d(j) = n(rng);
        p.weights += 1e-2 * d.normalized();
        CHECK(base <= mse(p, x, y));
    }
}

TEST_CASE("OLS underdetermined system gives a minimum-norm fit") {
    std::mt19937_64 rng(6);
    const Matrix x = random_matrix(rng, 8, 14);
    const Vector y = covidfc::testing::random_series(rng, 8);
    const auto m = fit_ols(x, y);
    for (Index i = 0; i < 8; ++i) CHECK(predict_raw(m, x.row(i).transpose()) == doctest::Approx(y(i)).epsilon(1e-8));
    CHECK(m.weights.allFinite());
}

TEST_CASE("SVR recovers a noiseless line with large C") {
    std::mt19937_64 rng(7);
    const Matrix x = random_matrix(rng, 60, 14);
    const Vector y = (2.0 * x.col(0)).array() + 3.0;
    SvrOptions opt;
    opt.c = 1000.0;
    opt.max_iterations = 50000;
    const auto fit = fit_linear_svr(x, y, opt);
    const auto ols = fit_ols(x, y);
    const Matrix held = random_matrix(rng, 10, 14);
    for (Index i = 0; i < held.rows(); ++i) {
        const double ref = predict_raw(ols, held.row(i).transpose());
        CHECK(std::abs(predict_raw(fit.model, held.row(i).transpose()) - ref) / ref < 1e-3);
    }
}

TEST_CASE("SVR is more robust than OLS to one outlier") {
    std::mt19937_64 rng(8);
    const Matrix x = random_matrix(rng, 60, 14);
    Vector y = (2.0 * x.col(0) + 0.5 * x.col(5)).array() + 3.0;
    y(17) += 500.0;
    SvrOptions opt;
    opt.c = 100.0;
    opt.max_iterations = 50000;
    const auto svr = fit_linear_svr(x, y, opt).model;
    const auto ols = fit_ols(x, y);
    const Matrix held = random_matrix(rng, 40, 14);
    double e_svr = 0.0, e_ols = 0.0;
    for (Index i = 0; i < held.rows(); ++i) {
        const double truth = 2.0 * held(i, 0) + 0.5 * held(i, 5) + 3.0;
        e_svr += std::abs(predict_raw(svr, held.row(i).transpose()) - truth);
        e_ols += std::abs(predict_raw(ols, held.row(i).transpose()) - truth);
    }
    CHECK(e_svr <= e_ols);
}

TEST_CASE("SVR on zero targets") {
    std::mt19937_64 rng(9);
    const Matrix x = random_matrix(rng, 30, 14);
    const auto fit = fit_linear_svr(x, Vector::Zero(30));
    CHECK(fit.converged);
    CHECK(fit.model.weights.isZero(0.0));
    CHECK(fit.model.bias == 0.0);
}

TEST_CASE("SVR dual objective never increases") {
    std::mt19937_64 rng(10);
    for (unsigned seed = 0; seed < 5; ++seed) {
        const Matrix x = random_matrix(rng, 80, 14);
        const Vector y = covidfc::testing::random_series(rng, 80, 40.0);
        SvrOptions opt;
        opt.seed = seed;
        const auto fit = fit_linear_svr(x, y, opt);
        REQUIRE(fit.dual_objective.size() == static_cast<std::size_t>(fit.sweeps));
        for (std::size_t k = 1; k < fit.dual_objective.size(); ++k) {
            CHECK(fit.dual_objective[k] <= fit.dual_objective[k - 1] + 1e-9 * std::abs(fit.dual_objective[k - 1]));
        }
    }
}

TEST_CASE("SVR iteration cap reports non-convergence") {
    std::mt19937_64 rng(11);
    const Matrix x = random_matrix(rng, 80, 14);
    const Vector y = covidfc::testing::random_series(rng, 80, 40.0);
    SvrOptions opt;
    opt.max_iterations = 2;
    opt.tolerance = 1e-14;
    const auto fit = fit_linear_svr(x, y, opt);
    CHECK_FALSE(fit.converged);
    CHECK(fit.sweeps == 2);
    CHECK(fit.model.weights.allFinite());
}

TEST_CASE("both models are translation covariant in the target") {
    std::mt19937_64 rng(12);
    const Matrix x = random_matrix(rng, 50, 14);
    const Vector y = covidfc::testing::random_series(rng, 50, 20.0);
    const double shift = 123.5;
    const Vector ys = y.array() + shift;
    const auto o1 = fit_ols(x, y), o2 = fit_ols(x, ys);
    const auto s1 = fit_linear_svr(x, y).model, s2 = fit_linear_svr(x, ys).model;
    for (Index i = 0; i < 50; ++i) {
        const Vector xi = x.row(i).transpose();
        CHECK(std::abs(predict_raw(o2, xi) - predict_raw(o1, xi) - shift) < 1e-8);
        CHECK(std::abs(predict_raw(s2, xi) - predict_raw(s1, xi) - shift) < 1e-8);
    }
}

TEST_CASE("preprocessing is frozen at fit time") {
    std::mt19937_64 rng(13);
    const Matrix x = random_matrix(rng, 30, 14);
    const auto m = fit_ols(x, covidfc::testing::random_series(rng, 30));
    const Vector centers = m.centers, scales = m.scales;
    const Matrix other = random_matrix(rng, 5, 14, 1000.0);
    for (Index i = 0; i < 5; ++i) (void)predict(m, other.row(i).transpose());
    CHECK(m.centers == centers);
    CHECK(m.scales == scales);
    const Vector z = other.row(0).transpose();
    const double manual = m.weights.dot(((z - centers).array() / scales.array()).matrix()) + m.bias;
    CHECK(predict_raw(m, z) == doctest::Approx(manual).epsilon(1e-14));
}

TEST_CASE("predict clamps at zero") {
    LinearModel m;
    m.weights = Vector::Ones(2);
    m.centers = Vector::Zero(2);
    m.scales = Vector::Ones(2);
    m.bias = -10.0;
    CHECK(predict_raw(m, Vector::Ones(2)) == -8.0);
    CHECK(predict(m, Vector::Ones(2)) == 0.0);
}

TEST_CASE("linear model text round trip") {
    std::mt19937_64 rng(14);
    const Matrix x = random_matrix(rng, 30, 14);
    const auto m = fit_linear_svr(x, covidfc::testing::random_series(rng, 30)).model;
    std::stringstream io;
    write_linear_model(io, m);
    const auto back = read_linear_model(io);
    CHECK(back.kind == LinearModel::Kind::SVR);
    CHECK(back.weights == m.weights);
    CHECK(back.bias == m.bias);
    CHECK(back.centers == m.centers);
    CHECK(back.scales == m.scales);
}

TEST_CASE("ML features are the last 14 backward sums") {
    std::mt19937_64 rng(15);
    NormalizedSeries n;
    n.start = make_date(2020, 3, 12);
    n.values = covidfc::testing::random_series(rng, 120);
    for (int fh : {14, 28, 42}) {
        const auto sums = build_sum_series(n, fh);
        const Vector f = ml_features(n.values, fh);
        REQUIRE(f.size() == kMlLag);
        for (Index k = 0; k < kMlLag; ++k) CHECK(f(k) == sums.values(sums.size() - kMlLag + k));
        CHECK(model_lag(ModelKind::MlLr, fh) == fh - 1 + kMlLag);
    }
    const DateRange train{n.start, n.start + Days{100}};
    const auto samples = ml_training_samples(n, train, 14);
    CHECK(static_cast<Index>(samples.size()) == window_count(100, 13 + kMlLag, 14));
}
