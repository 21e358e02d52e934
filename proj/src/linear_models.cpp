#include "covidfc/linear_models.hpp"

#include "covidfc/csv_io.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <random>

namespace covidfc {
namespace {

void check_shapes(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Vector>& y) {
    if (x.rows() == 0 || x.cols() == 0) throw InsufficientHistory("linear model: empty design matrix");
    if (x.rows() != y.size()) throw ConfigError("linear model: row count differs from target count");
}

Vector nonzero_or_one(Vector scales) {
    for (Index j = 0; j < scales.size(); ++j) {
        if (!(scales(j) > 0.0) || !std::isfinite(scales(j))) scales(j) = 1.0;
    }
    return scales;
}

}  // namespace

double predict_raw(const LinearModel& model, const Eigen::Ref<const Vector>& x) {
    return model.weights.dot(((x - model.centers).array() / model.scales.array()).matrix()) + model.bias;
}

double predict(const LinearModel& model, const Eigen::Ref<const Vector>& x) {
    return std::max(0.0, predict_raw(model, x));
}

Matrix design_matrix(std::span<const WindowSample> samples) {
    if (samples.empty()) return {};
    Matrix x(static_cast<Index>(samples.size()), samples.front().inputs.size());
    for (std::size_t i = 0; i < samples.size(); ++i) x.row(static_cast<Index>(i)) = samples[i].inputs.transpose();
    return x;
}

Vector target_vector(std::span<const WindowSample> samples) {
    Vector y(static_cast<Index>(samples.size()));
    for (std::size_t i = 0; i < samples.size(); ++i) y(static_cast<Index>(i)) = samples[i].target(0);
    return y;
}

LinearModel fit_ols(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Vector>& y) {
    check_shapes(x, y);
    if (x.rows() < x.cols() + 1) {
        std::clog << "warning: OLS underdetermined (" << x.rows() << " samples, " << x.cols()
                  << " features); returning the minimum-norm solution\n";
    }
    LinearModel m;
    m.kind = LinearModel::Kind::OLS;
    m.centers = x.colwise().mean().transpose();
    const Matrix centered = x.rowwise() - m.centers.transpose();
    m.scales = nonzero_or_one(centered.colwise().norm().transpose());
    const Matrix features = centered.array().rowwise() / m.scales.transpose().array();
    const double y_mean = y.mean();
    m.weights = features.completeOrthogonalDecomposition().solve((y.array() - y_mean).matrix());
    m.bias = y_mean;
    return m;
}

LinearModel fit_ols(std::span<const WindowSample> samples) {
    return fit_ols(design_matrix(samples), target_vector(samples));
}

SvrFit fit_linear_svr(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Vector>& y,
                      const SvrOptions& options) {
    check_shapes(x, y);
    const Index n = x.rows(), p = x.cols();
    SvrFit fit;
    LinearModel& m = fit.model;
    m.kind = LinearModel::Kind::SVR;
    m.centers = x.colwise().mean().transpose();
    const Matrix centered = x.rowwise() - m.centers.transpose();
    m.scales = nonzero_or_one((centered.colwise().squaredNorm() / static_cast<double>(n)).cwiseSqrt().transpose());

    // Augmented standardized features; last column is the bias feature.
    Matrix a(n, p + 1);
    a.leftCols(p) = centered.array().rowwise() / m.scales.transpose().array();
    a.col(p).setOnes();
    const double y_mean = y.mean();
    const Vector yc = y.array() - y_mean;
    const Vector q_diag = a.rowwise().squaredNorm();

    const double c = options.c, eps = options.epsilon;
    Vector beta = Vector::Zero(n);
    Vector w = Vector::Zero(p + 1);
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::mt19937 rng(options.seed);

    auto dual = [&] { return 0.5 * w.squaredNorm() - yc.dot(beta) + eps * beta.lpNorm<1>(); };

    for (fit.sweeps = 0; fit.sweeps < options.max_iterations;) {
        std::shuffle(order.begin(), order.end(), rng);
        double violation = 0.0;
        for (Index i : order) {
            const double g = a.row(i).dot(w) - yc(i);
            const double b = beta(i);
            double v;
            if (b == 0.0) {
                v = std::max({g - eps, -(g + eps), 0.0});
            } else {
                const double gs = b > 0.0 ? g + eps : g - eps;
                if (b >= c) {
                    v = std::max(gs, 0.0);
                } else if (b <= -c) {
                    v = std::max(-gs, 0.0);
                } else {
                    v = std::abs(gs);
                }
            }
            violation = std::max(violation, v);

            // Exact minimizer of the 1-D subproblem: soft-threshold, then box.
            const double raw = b - g / q_diag(i);
            const double shrink = eps / q_diag(i);
            double next = raw > shrink ? raw - shrink : (raw < -shrink ? raw + shrink : 0.0);
            next = std::clamp(next, -c, c);
            if (next != b) {
                w += (next - b) * a.row(i).transpose();
                beta(i) = next;
            }
        }
        ++fit.sweeps;
        fit.dual_objective.push_back(dual());
        if (violation < options.tolerance) {
            fit.converged = true;
            break;
        }
    }
    if (!fit.converged) {
        std::clog << "warning: linear SVR stopped at the iteration cap (" << options.max_iterations
                  << " sweeps) before reaching tolerance\n";
    }
    m.weights = w.head(p);
    m.bias = w(p) + y_mean;
    return fit;
}

SvrFit fit_linear_svr(std::span<const WindowSample> samples, const SvrOptions& options) {
    return fit_linear_svr(design_matrix(samples), target_vector(samples), options);
}

void write_linear_model(std::ostream& out, const LinearModel& model) {
    auto row = [&](const char* key, const Vector& v) {
        out << key;
        for (Index i = 0; i < v.size(); ++i) out << ' ' << format_number(v(i));
        out << '\n';
    };
    out << "kind " << (model.kind == LinearModel::Kind::OLS ? "OLS" : "SVR") << '\n';
    out << "features " << model.weights.size() << '\n';
    row("weights", model.weights);
    out << "bias " << format_number(model.bias) << '\n';
    row("centers", model.centers);
    row("scales", model.scales);
}

LinearModel read_linear_model(std::istream& in) {
    auto expect = [&](const char* key) {
        std::string k;
        if (!(in >> k) || k != key) throw DataError(std::string("linear model: expected '") + key + "'");
    };
    auto read_vec = [&](Index n) {
        Vector v(n);
        for (Index i = 0; i < n; ++i) {
            if (!(in >> v(i))) throw DataError("linear model: truncated vector");
        }
        return v;
    };
    LinearModel m;
    std::string kind;
    expect("kind");
    in >> kind;
    if (kind == "OLS") {
        m.kind = LinearModel::Kind::OLS;
    } else if (kind == "SVR") {
        m.kind = LinearModel::Kind::SVR;
    } else {
        throw DataError("linear model: unknown kind '" + kind + "'");
    }
    Index n = 0;
    expect("features");
    if (!(in >> n) || n <= 0) throw DataError("linear model: bad feature count");
    expect("weights");
    m.weights = read_vec(n);
    expect("bias");
    if (!(in >> m.bias)) throw DataError("linear model: bad bias");
    expect("centers");
    m.centers = read_vec(n);
    expect("scales");
    m.scales = read_vec(n);
    return m;
}

}  // namespace covidfc
