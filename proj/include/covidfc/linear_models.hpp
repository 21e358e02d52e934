#pragma once

#include "covidfc/series.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace covidfc {

/// Affine model over frozen per-feature preprocessing:
///   f(x) = weights . ((x - centers) / scales) + bias
struct LinearModel {
    enum class Kind { OLS, SVR };

    Kind kind = Kind::OLS;
    Vector weights;
    double bias = 0.0;
    Vector centers;
    Vector scales;
};

/// Unclamped affine prediction.
double predict_raw(const LinearModel& model, const Eigen::Ref<const Vector>& x);

/// Prediction clamped at 0 (case totals).
double predict(const LinearModel& model, const Eigen::Ref<const Vector>& x);

/// Rows are samples.
Matrix design_matrix(std::span<const WindowSample> samples);
Vector target_vector(std::span<const WindowSample> samples);

/// Least squares on centered, column-L2-normalized features via a complete
/// orthogonal decomposition (minimum-norm solution when rank deficient).
LinearModel fit_ols(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Vector>& y);
LinearModel fit_ols(std::span<const WindowSample> samples);

struct SvrOptions {
    double c = 1.0;
    double epsilon = 0.0;
    double tolerance = 1e-4;
    int max_iterations = 5000;  // full coordinate sweeps
    unsigned seed = 0;          // coordinate order
};

struct SvrFit {
    LinearModel model;
    bool converged = false;
    int sweeps = 0;
    std::vector<double> dual_objective;  // after each sweep
};

/// Linear SVR with L1 epsilon-insensitive loss, solved in the dual by
/// coordinate descent. Features are z-scored, targets centered; the bias is
/// an extra constant feature (regularized, as in liblinear).
SvrFit fit_linear_svr(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Vector>& y,
                      const SvrOptions& options = {});
SvrFit fit_linear_svr(std::span<const WindowSample> samples, const SvrOptions& options = {});

void write_linear_model(std::ostream& out, const LinearModel& model);
LinearModel read_linear_model(std::istream& in);

}  // namespace covidfc
