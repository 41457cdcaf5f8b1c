#pragma once

#include <map>
#include <string>
#include <vector>

#include "cellbench/core/table.hpp"
#include "cellbench/regress/pca.hpp"
#include "cellbench/regress/ridge.hpp"

namespace cellbench::regress {

struct PipelineConfig {
    std::size_t components = 256;
    double alpha = 1.0;
    bool fit_intercept = true;
};

struct FoldOutcome {
    std::string dataset;
    int fold = 0;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    std::vector<double> pcc; // per gene; NaN where undefined
    PcaModel pca;
    RidgeModel ridge;

    // Mean over genes with a defined PCC; NaN when none is defined.
    double mean_pcc() const;
};

// Fit PCA and ridge on the training rows only, predict the test rows, and
// score every target column by Pearson correlation.
FoldOutcome evaluate_fold(const Matrix &x_train, const Matrix &y_train, const Matrix &x_test, const Matrix &y_test,
                          const PipelineConfig &config);

struct DatasetSummary {
    double mean = 0.0; // over folds of the fold mean PCC
    double std = 0.0;  // population std across folds
    std::size_t folds = 0;
};

struct RegressionReport {
    std::vector<std::string> genes;
    std::vector<FoldOutcome> folds;
    std::map<std::string, DatasetSummary> datasets;
    double global_mean = 0.0; // mean of dataset means
};

/// Cross-validated PCA + ridge evaluation. Rows with fold < 0 are unused.
/// Within each dataset, fold f tests on its rows and trains on the dataset's
/// other assigned rows. Gene PCCs average into a fold score, fold scores into
/// a dataset mean and std, dataset means into the global mean.
RegressionReport hest_pipeline(const Matrix &x, const Matrix &y, const std::vector<int> &fold_of_row,
                               const std::vector<std::string> &dataset_of_row, std::vector<std::string> genes,
                               const PipelineConfig &config = {});

} // namespace cellbench::regress
