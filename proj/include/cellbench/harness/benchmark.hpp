#pragma once

#include <filesystem>

#include "cellbench/harness/config.hpp"
#include "cellbench/harness/report.hpp"

namespace cellbench::harness {

/// Runs one benchmark. Metrics per kind:
///   retrieval:  recall_top / recall_bottom per pair source and fold
///   map:        ap per group and fold, map per fold
///   regression: pcc per dataset, gene and fold; fold_pcc per dataset and fold;
///               global_pcc (summary only)
///   knn:        knn_accuracy
/// Errors from lower modules are rethrown with the benchmark name prefixed.
Report run_benchmark(const RunConfig &config);

// run_benchmark, then raw.csv and report.json into out_dir.
Report run_benchmark(const RunConfig &config, const std::filesystem::path &out_dir);

} // namespace cellbench::harness
