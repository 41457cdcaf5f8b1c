#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace cellbench::harness {

inline constexpr const char *kToolVersion = "0.1.0";

enum class BenchmarkKind { Retrieval, Map, Regression, Knn };

const char *to_string(BenchmarkKind kind);
BenchmarkKind parse_benchmark_kind(const std::string &text);

struct ProfileSection {
    std::string center = "none"; // none | negcon_per_plate
    std::string aggregate = "mean";
    std::string plate_key = "plate";
    std::string control_key = "control";
    std::string negative_value = "negative";
};

struct RetrievalSection {
    std::string pairs; // id_a,id_b,source CSV over profile ids
    double q = 0.05;
    std::string tail = "top";     // top | bottom
    std::string mode = "global";  // global | per_query
    std::string gene_key = "gene";
    std::size_t n_per = 10;
    int folds = 3;
};

struct MapSection {
    std::string label_key = "compound";
    std::string profile_key; // empty: score rows as they are
    std::vector<std::string> exclude_labels;
    int folds = 5; // 0: a single fold over all rows
    std::size_t plates_per_lab = 4;
    std::string lab_key = "lab";
};

struct RegressionSection {
    std::string targets; // item_id,g1..gG CSV
    std::size_t components = 256;
    double alpha = 1.0;
    bool fit_intercept = true;
    std::string fold_key = "fold";
    std::string dataset_key = "dataset"; // rows without it share dataset ""
};

struct KnnSection {
    std::string test_table;
    std::string label_key = "label";
    std::size_t k = 20;
};

/// Everything a benchmark run depends on. Paths are stored as written and
/// resolved against base_dir, which is not part of the serialized form.
struct RunConfig {
    BenchmarkKind kind = BenchmarkKind::Retrieval;
    std::string table;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> tags; // model, family, stage, ...
    ProfileSection profiles;
    RetrievalSection retrieval;
    MapSection map;
    RegressionSection regression;
    KnnSection knn;

    std::filesystem::path base_dir;

    std::filesystem::path resolve(const std::string &p) const;
};

// Canonical form: every field, fixed key order.
nlohmann::ordered_json to_json(const RunConfig &config);
// Missing fields take defaults; unknown keys are a ConfigError.
RunConfig config_from_json(const nlohmann::json &j, std::filesystem::path base_dir = {});
RunConfig load_config(const std::filesystem::path &path);

std::uint64_t fnv1a64(std::string_view bytes);
// 16 hex digits of FNV-1a over the canonical JSON text.
std::string config_hash(const RunConfig &config);

} // namespace cellbench::harness
