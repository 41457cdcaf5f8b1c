#include "cellbench/regress/pca.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cellbench/core/errors.hpp"

namespace cellbench::regress {

PcaModel pca_fit(const Matrix &x, std::size_t components) {
    const auto n = static_cast<std::size_t>(x.rows());
    const auto d = static_cast<std::size_t>(x.cols());
    if (n < 2)
        throw DataError(DataErrorCode::DegenerateInput, "pca_fit: need at least 2 samples");
    if (d == 0)
        throw DataError(DataErrorCode::DimMismatch, "pca_fit: zero-width data");
    if (!x.allFinite())
        throw DataError(DataErrorCode::NonFinite, "pca_fit: non-finite input");

    PcaModel model;
    model.requested = components;
    model.mean = x.colwise().mean().transpose();
    const Matrix centered = x.rowwise() - model.mean.transpose();

    Eigen::BDCSVD<Matrix> svd(centered, Eigen::ComputeThinV);
    const Vector &s = svd.singularValues();
    const double total = s.squaredNorm();
    const double tol = static_cast<double>(std::max(n, d)) * std::numeric_limits<double>::epsilon() *
                       (s.size() ? s(0) : 0.0);
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > tol)
            ++rank;

    const std::size_t m = std::min({components, n - 1, d, rank});
    model.capped = m < components;
    model.components.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(d));
    model.explained_variance_ratio.resize(static_cast<Eigen::Index>(m));
    for (std::size_t c = 0; c < m; ++c) {
        const auto ci = static_cast<Eigen::Index>(c);
        Vector axis = svd.matrixV().col(ci);
        Eigen::Index arg = 0;
        axis.cwiseAbs().maxCoeff(&arg);
        if (axis(arg) < 0.0)
            axis = -axis;
        model.components.row(ci) = axis.transpose();
        model.explained_variance_ratio(ci) = total > 0.0 ? s(ci) * s(ci) / total : 0.0;
    }
    return model;
}

Matrix pca_transform(const PcaModel &model, const Matrix &x) {
    if (x.cols() != model.mean.size())
        throw DataError(DataErrorCode::DimMismatch, "pca_transform: input width " + std::to_string(x.cols()) +
                                                        " differs from model width " + std::to_string(model.mean.size()));
    return (x.rowwise() - model.mean.transpose()) * model.components.transpose();
}

double variance_explained_first2(const Matrix &x) {
    if (x.rows() < 3)
        throw DataError(DataErrorCode::DegenerateInput, "variance_explained_first2: need at least 3 samples");
    const PcaModel model = pca_fit(x, 2);
    return model.explained_variance_ratio.sum();
}

} // namespace cellbench::regress
