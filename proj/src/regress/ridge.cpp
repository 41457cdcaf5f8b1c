#include "cellbench/regress/ridge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cellbench/core/errors.hpp"

namespace cellbench::regress {

RidgeModel ridge_fit(const Matrix &z, const Matrix &y, double alpha, bool fit_intercept) {
    if (z.rows() < 1)
        throw DataError(DataErrorCode::DegenerateInput, "ridge_fit: no samples");
    if (z.rows() != y.rows())
        throw DataError(DataErrorCode::CountMismatch, "ridge_fit: design and target row counts differ");
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw ConfigError("ridge_fit: alpha must be finite and >= 0");
    if (!z.allFinite() || !y.allFinite())
        throw DataError(DataErrorCode::NonFinite, "ridge_fit: non-finite input");

    RidgeModel model;
    model.alpha = alpha;
    model.fit_intercept = fit_intercept;
    Vector z_mean = Vector::Zero(z.cols());
    Vector y_mean = Vector::Zero(y.cols());
    if (fit_intercept) {
        z_mean = z.colwise().mean().transpose();
        y_mean = y.colwise().mean().transpose();
    }
    const Matrix zc = z.rowwise() - z_mean.transpose();
    const Matrix yc = y.rowwise() - y_mean.transpose();

    model.weights = Matrix::Zero(z.cols(), y.cols());
    if (z.cols() > 0) {
        Eigen::BDCSVD<Matrix> svd(zc, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Vector &s = svd.singularValues();
        const double tol = static_cast<double>(std::max(z.rows(), z.cols())) *
                           std::numeric_limits<double>::epsilon() * (s.size() ? s(0) : 0.0);
        Vector shrink(s.size());
        for (Eigen::Index i = 0; i < s.size(); ++i) {
            if (s(i) <= tol) {
                shrink(i) = 0.0;
                if (alpha == 0.0)
                    model.min_norm = true;
            } else {
                shrink(i) = s(i) / (s(i) * s(i) + alpha);
            }
        }
        if (alpha == 0.0 && s.size() < z.cols())
            model.min_norm = true; // fewer samples than features
        model.weights = svd.matrixV() * shrink.asDiagonal() * (svd.matrixU().transpose() * yc);
    }
    model.intercepts = y_mean - model.weights.transpose() * z_mean;
    return model;
}

Matrix ridge_predict(const RidgeModel &model, const Matrix &z) {
    if (z.cols() != model.weights.rows())
        throw DataError(DataErrorCode::DimMismatch, "ridge_predict: design width differs from model");
    Matrix out = z * model.weights;
    out.rowwise() += model.intercepts.transpose();
    return out;
}

} // namespace cellbench::regress
