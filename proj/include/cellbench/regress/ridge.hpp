#pragma once

#include "cellbench/core/table.hpp"

namespace cellbench::regress {

struct RidgeModel {
    Matrix weights;    // m x G
    Vector intercepts; // G
    double alpha = 0.0;
    bool fit_intercept = true;
    bool min_norm = false; // alpha == 0 on a rank-deficient design
};

/// Solves (Z^T Z + alpha I) W = Z^T Y per target through the SVD of Z
/// (centered when fit_intercept). With alpha == 0 and a singular design the
/// minimum-norm least-squares solution is returned and flagged.
RidgeModel ridge_fit(const Matrix &z, const Matrix &y, double alpha, bool fit_intercept = true);

Matrix ridge_predict(const RidgeModel &model, const Matrix &z);

} // namespace cellbench::regress
