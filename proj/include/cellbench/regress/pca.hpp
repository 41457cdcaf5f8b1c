#pragma once

#include "cellbench/core/table.hpp"

namespace cellbench::regress {

struct PcaModel {
    Vector mean;                    // D
    Matrix components;              // m x D, orthonormal rows
    Vector explained_variance_ratio; // m, nonincreasing
    std::size_t requested = 0;
    bool capped = false; // fewer than `requested` components were available
};

/// Principal axes from the thin SVD of the centered data. At most
/// min(requested, n - 1, D, numerical rank) components are kept. Each axis is
/// signed so that its largest-magnitude coordinate is positive.
PcaModel pca_fit(const Matrix &x, std::size_t components);

// (X - mean) * components^T. Throws DataError(DimMismatch) on a width mismatch.
Matrix pca_transform(const PcaModel &model, const Matrix &x);

// Sum of the first two explained-variance ratios (fewer when rank < 2). n >= 3.
double variance_explained_first2(const Matrix &x);

} // namespace cellbench::regress
