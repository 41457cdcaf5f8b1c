#include "cellbench/harness/config.hpp"

#include <cstdio>

#include "cellbench/core/errors.hpp"
#include "cellbench/core/io.hpp"

namespace cellbench::harness {

using nlohmann::json;
using nlohmann::ordered_json;

const char *to_string(BenchmarkKind kind) {
    switch (kind) {
    case BenchmarkKind::Retrieval: return "retrieval";
    case BenchmarkKind::Map: return "map";
    case BenchmarkKind::Regression: return "regression";
    case BenchmarkKind::Knn: return "knn";
    }
    return "?";
}

BenchmarkKind parse_benchmark_kind(const std::string &text) {
    for (auto k : {BenchmarkKind::Retrieval, BenchmarkKind::Map, BenchmarkKind::Regression, BenchmarkKind::Knn})
        if (text == to_string(k)) return k;
    throw ConfigError("unknown benchmark '" + text + "' (expected retrieval|map|regression|knn)");
}

std::filesystem::path RunConfig::resolve(const std::string &p) const {
    std::filesystem::path path(p);
    if (path.is_absolute() || base_dir.empty()) return path;
    return base_dir / path;
}

ordered_json to_json(const RunConfig &c) {
    ordered_json j;
    j["benchmark"] = to_string(c.kind);
    j["table"] = c.table;
    j["seed"] = c.seed;
    j["tags"] = c.tags;
    j["profiles"] = {{"center", c.profiles.center},
                     {"aggregate", c.profiles.aggregate},
                     {"plate_key", c.profiles.plate_key},
                     {"control_key", c.profiles.control_key},
                     {"negative_value", c.profiles.negative_value}};
    j["retrieval"] = {{"pairs", c.retrieval.pairs},       {"q", c.retrieval.q},
                      {"tail", c.retrieval.tail},         {"mode", c.retrieval.mode},
                      {"gene_key", c.retrieval.gene_key}, {"n_per", c.retrieval.n_per},
                      {"folds", c.retrieval.folds}};
    j["map"] = {{"label_key", c.map.label_key},   {"profile_key", c.map.profile_key},
                {"exclude_labels", c.map.exclude_labels}, {"folds", c.map.folds},
                {"plates_per_lab", c.map.plates_per_lab}, {"lab_key", c.map.lab_key}};
    j["regression"] = {{"targets", c.regression.targets},         {"components", c.regression.components},
                       {"alpha", c.regression.alpha},             {"fit_intercept", c.regression.fit_intercept},
                       {"fold_key", c.regression.fold_key},       {"dataset_key", c.regression.dataset_key}};
    j["knn"] = {{"test_table", c.knn.test_table}, {"label_key", c.knn.label_key}, {"k", c.knn.k}};
    return j;
}

namespace {

// Reads known keys of one object into fields; anything else is rejected.
class Reader {
public:
    Reader(const json &obj, std::string where) : obj_(obj), where_(std::move(where)) {
        if (!obj_.is_object()) throw ConfigError(where_ + ": expected an object");
    }

    template <class T>
    void get(const char *key, T &out) {
        seen_.push_back(key);
        const auto it = obj_.find(key);
        if (it == obj_.end()) return;
        try {
            out = it->get<T>();
        } catch (const json::exception &e) {
            throw ConfigError(where_ + "." + key + ": " + e.what());
        }
    }

    const json *section(const char *key) {
        seen_.push_back(key);
        const auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    void finish() const {
        for (auto it = obj_.begin(); it != obj_.end(); ++it) {
            bool known = false;
            for (const auto &k : seen_) known = known || k == it.key();
            if (!known) throw ConfigError(where_ + ": unknown key '" + it.key() + "'");
        }
    }

private:
    const json &obj_;
    std::string where_;
    std::vector<std::string> seen_;
};

} // namespace

RunConfig config_from_json(const json &j, std::filesystem::path base_dir) {
    RunConfig c;
    c.base_dir = std::move(base_dir);
    Reader top(j, "config");
    std::string kind;
    top.get("benchmark", kind);
    if (kind.empty()) throw ConfigError("config: 'benchmark' is required");
    c.kind = parse_benchmark_kind(kind);
    top.get("table", c.table);
    top.get("seed", c.seed);
    top.get("tags", c.tags);
    if (const json *s = top.section("profiles")) {
        Reader r(*s, "profiles");
        r.get("center", c.profiles.center);
        r.get("aggregate", c.profiles.aggregate);
        r.get("plate_key", c.profiles.plate_key);
        r.get("control_key", c.profiles.control_key);
        r.get("negative_value", c.profiles.negative_value);
        r.finish();
    }
    if (const json *s = top.section("retrieval")) {
        Reader r(*s, "retrieval");
        r.get("pairs", c.retrieval.pairs);
        r.get("q", c.retrieval.q);
        r.get("tail", c.retrieval.tail);
        r.get("mode", c.retrieval.mode);
        r.get("gene_key", c.retrieval.gene_key);
        r.get("n_per", c.retrieval.n_per);
        r.get("folds", c.retrieval.folds);
        r.finish();
    }
    if (const json *s = top.section("map")) {
        Reader r(*s, "map");
        r.get("label_key", c.map.label_key);
        r.get("profile_key", c.map.profile_key);
        r.get("exclude_labels", c.map.exclude_labels);
        r.get("folds", c.map.folds);
        r.get("plates_per_lab", c.map.plates_per_lab);
        r.get("lab_key", c.map.lab_key);
        r.finish();
    }
    if (const json *s = top.section("regression")) {
        Reader r(*s, "regression");
        r.get("targets", c.regression.targets);
        r.get("components", c.regression.components);
        r.get("alpha", c.regression.alpha);
        r.get("fit_intercept", c.regression.fit_intercept);
        r.get("fold_key", c.regression.fold_key);
        r.get("dataset_key", c.regression.dataset_key);
        r.finish();
    }
    if (const json *s = top.section("knn")) {
        Reader r(*s, "knn");
        r.get("test_table", c.knn.test_table);
        r.get("label_key", c.knn.label_key);
        r.get("k", c.knn.k);
        r.finish();
    }
    top.finish();
    if (c.table.empty()) throw ConfigError("config: 'table' is required");
    return c;
}

RunConfig load_config(const std::filesystem::path &path) {
    json j;
    try {
        j = json::parse(io::read_file(path));
    } catch (const json::exception &e) {
        throw ConfigError(path.string() + ": invalid JSON: " + e.what());
    } catch (const DataError &e) {
        throw ConfigError(e.what());
    }
    return config_from_json(j, path.parent_path());
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string config_hash(const RunConfig &config) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(to_json(config).dump())));
    return buf;
}

} // namespace cellbench::harness
