#include "cellbench/harness/interchange.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "cellbench/core/errors.hpp"
#include "cellbench/core/io.hpp"

namespace cellbench::harness {

namespace fs = std::filesystem;

static_assert(std::endian::native == std::endian::little, "interchange payload assumes a little-endian host");

namespace {

const std::string kManifestSuffix = ".manifest.json";

fs::path with_suffix(const fs::path &prefix, const std::string &suffix) {
    fs::path p = prefix;
    p += suffix;
    return p;
}

} // namespace

fs::path table_prefix(const fs::path &path) {
    const std::string s = path.string();
    if (s.size() > kManifestSuffix.size() && s.compare(s.size() - kManifestSuffix.size(), kManifestSuffix.size(), kManifestSuffix) == 0)
        return fs::path(s.substr(0, s.size() - kManifestSuffix.size()));
    return path;
}

std::string encode_manifest(const EmbeddingTable &table) {
    nlohmann::ordered_json j;
    j["version"] = kInterchangeVersion;
    j["n_items"] = table.size();
    j["dim"] = table.dim;
    j["dtype"] = "f32le";
    j["ids"] = table.ids;
    j["meta_keys"] = table.meta_keys;
    return j.dump() + "\n";
}

std::string encode_payload(const EmbeddingTable &table) {
    std::string out(table.data.size() * sizeof(float), '\0');
    std::memcpy(out.data(), table.data.data(), out.size());
    return out;
}

std::string encode_meta(const EmbeddingTable &table) {
    std::string out = "item_id,key,value\n";
    for (std::size_t i = 0; i < table.meta.size(); ++i)
        for (const auto &key : table.meta_keys)
            if (const auto *v = table.meta_value(i, key))
                out += io::csv_row({table.ids[i], key, *v});
    return out;
}

void write_table(const EmbeddingTable &table, const fs::path &path) {
    table.validate();
    const fs::path prefix = table_prefix(path);
    io::write_file_atomic(with_suffix(prefix, kManifestSuffix), encode_manifest(table));
    io::write_file_atomic(with_suffix(prefix, ".f32"), encode_payload(table));
    io::write_file_atomic(with_suffix(prefix, ".meta.csv"), encode_meta(table));
}

EmbeddingTable read_table(const fs::path &path) {
    const fs::path prefix = table_prefix(path);
    const fs::path manifest_path = with_suffix(prefix, kManifestSuffix);
    const std::string origin = manifest_path.string();

    nlohmann::json manifest;
    try {
        manifest = nlohmann::json::parse(io::read_file(manifest_path));
    } catch (const nlohmann::json::exception &e) {
        throw DataError(DataErrorCode::BadFormat, origin + ": invalid JSON: " + e.what());
    }

    EmbeddingTable table;
    std::size_t n_items = 0;
    try {
        if (!manifest.is_object())
            throw DataError(DataErrorCode::BadFormat, origin + ": manifest must be a JSON object");
        const int version = manifest.at("version").get<int>();
        if (version != kInterchangeVersion)
            throw DataError(DataErrorCode::UnsupportedVersion, origin + ": unsupported version " + std::to_string(version));
        if (manifest.at("dtype").get<std::string>() != "f32le")
            throw DataError(DataErrorCode::BadFormat, origin + ": dtype must be f32le");
        n_items = manifest.at("n_items").get<std::size_t>();
        table.dim = manifest.at("dim").get<std::size_t>();
        table.ids = manifest.at("ids").get<std::vector<std::string>>();
        if (manifest.contains("meta_keys"))
            table.meta_keys = manifest.at("meta_keys").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception &e) {
        throw DataError(DataErrorCode::BadFormat, origin + ": malformed manifest: " + e.what());
    }
    if (table.ids.size() != n_items)
        throw DataError(DataErrorCode::CountMismatch, origin + ": n_items is " + std::to_string(n_items) + " but " +
                                                          std::to_string(table.ids.size()) + " ids are listed");
    if (table.dim == 0)
        throw DataError(DataErrorCode::DimMismatch, origin + ": dim must be positive");
    {
        std::unordered_set<std::string> seen;
        for (const auto &id : table.ids)
            if (!seen.insert(id).second)
                throw DataError(DataErrorCode::DuplicateId, origin + ": duplicate id '" + id + "'");
    }

    const fs::path payload_path = with_suffix(prefix, ".f32");
    const std::string payload = io::read_file(payload_path);
    const std::size_t expected = n_items * table.dim * sizeof(float);
    if (payload.size() != expected)
        throw DataError(DataErrorCode::PayloadSize, payload_path.string() + ": expected " + std::to_string(expected) +
                                                        " bytes, found " + std::to_string(payload.size()));
    table.data.resize(n_items * table.dim);
    std::memcpy(table.data.data(), payload.data(), expected);
    for (std::size_t k = 0; k < table.data.size(); ++k)
        if (!std::isfinite(table.data[k])) {
            const std::size_t row = k / table.dim;
            throw DataError(DataErrorCode::NonFinite, payload_path.string() + ": non-finite value in row " +
                                                          std::to_string(row) + " ('" + table.ids[row] + "')");
        }

    const fs::path meta_path = with_suffix(prefix, ".meta.csv");
    table.meta.assign(n_items, {});
    if (fs::exists(meta_path)) {
        const auto csv = io::read_csv(meta_path);
        const auto c_id = csv.column("item_id"), c_key = csv.column("key"), c_value = csv.column("value");
        std::unordered_map<std::string, std::size_t> index;
        for (std::size_t i = 0; i < n_items; ++i)
            index.emplace(table.ids[i], i);
        std::unordered_set<std::string> keys(table.meta_keys.begin(), table.meta_keys.end());
        for (const auto &row : csv.rows) {
            const auto it = index.find(row[c_id]);
            if (it == index.end())
                throw DataError(DataErrorCode::CountMismatch, meta_path.string() + ": unknown item '" + row[c_id] + "'");
            if (!keys.count(row[c_key]))
                throw DataError(DataErrorCode::BadFormat, meta_path.string() + ": key '" + row[c_key] + "' not in meta_keys");
            table.meta[it->second][row[c_key]] = row[c_value];
        }
    } else if (!table.meta_keys.empty()) {
        throw DataError(DataErrorCode::MissingFile, meta_path.string() + ": missing although meta_keys is non-empty");
    }
    return table;
}

} // namespace cellbench::harness
