#include "cellbench/core/table.hpp"

#include <cmath>
#include <unordered_set>

#include "cellbench/core/errors.hpp"

namespace cellbench {

namespace {

void append_meta(EmbeddingTable &t, MetaMap item_meta) {
    for (const auto &[k, v] : item_meta) {
        bool known = false;
        for (const auto &key : t.meta_keys)
            known = known || key == k;
        if (!known)
            t.meta_keys.push_back(k);
    }
    t.meta.resize(t.ids.size() - 1);
    t.meta.push_back(std::move(item_meta));
}

} // namespace

void EmbeddingTable::add_row(std::string id, std::span<const double> values, MetaMap item_meta) {
    if (dim == 0 && ids.empty())
        dim = values.size();
    if (values.size() != dim)
        throw DataError(DataErrorCode::DimMismatch, "add_row: row '" + id + "' has wrong dimension");
    for (double v : values)
        data.push_back(static_cast<float>(v));
    ids.push_back(std::move(id));
    append_meta(*this, std::move(item_meta));
}

void EmbeddingTable::add_row(std::string id, std::span<const float> values, MetaMap item_meta) {
    if (dim == 0 && ids.empty())
        dim = values.size();
    if (values.size() != dim)
        throw DataError(DataErrorCode::DimMismatch, "add_row: row '" + id + "' has wrong dimension");
    data.insert(data.end(), values.begin(), values.end());
    ids.push_back(std::move(id));
    append_meta(*this, std::move(item_meta));
}

const std::string *EmbeddingTable::meta_value(std::size_t i, const std::string &key) const {
    if (i >= meta.size())
        return nullptr;
    const auto it = meta[i].find(key);
    return it == meta[i].end() ? nullptr : &it->second;
}

const std::string &EmbeddingTable::require_meta(std::size_t i, const std::string &key) const {
    if (const auto *v = meta_value(i, key))
        return *v;
    throw DataError(DataErrorCode::MissingKey, "item '" + ids.at(i) + "' lacks metadata key '" + key + "'");
}

Matrix EmbeddingTable::matrix() const {
    Matrix m(static_cast<Eigen::Index>(size()), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t d = 0; d < dim; ++d)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) = data[i * dim + d];
    return m;
}

EmbeddingTable EmbeddingTable::subset(const std::vector<std::size_t> &rows) const {
    EmbeddingTable out;
    out.dim = dim;
    out.meta_keys = meta_keys;
    out.ids.reserve(rows.size());
    out.data.reserve(rows.size() * dim);
    for (std::size_t r : rows) {
        out.ids.push_back(ids.at(r));
        const auto src = row(r);
        out.data.insert(out.data.end(), src.begin(), src.end());
        if (!meta.empty())
            out.meta.push_back(meta.at(r));
    }
    return out;
}

std::size_t EmbeddingTable::index_of(const std::string &id) const {
    for (std::size_t i = 0; i < ids.size(); ++i)
        if (ids[i] == id)
            return i;
    throw DataError(DataErrorCode::UnresolvedIds, "unknown item id '" + id + "'");
}

void EmbeddingTable::validate() const {
    if (dim == 0)
        throw DataError(DataErrorCode::DimMismatch, "embedding table has dimension 0");
    if (data.size() != ids.size() * dim)
        throw DataError(DataErrorCode::PayloadSize, "embedding payload does not match N*D");
    if (!meta.empty() && meta.size() != ids.size())
        throw DataError(DataErrorCode::CountMismatch, "metadata rows do not match item count");
    std::unordered_set<std::string> seen;
    for (const auto &id : ids)
        if (!seen.insert(id).second)
            throw DataError(DataErrorCode::DuplicateId, "duplicate item id '" + id + "'");
    for (std::size_t i = 0; i < data.size(); ++i)
        if (!std::isfinite(data[i]))
            throw DataError(DataErrorCode::NonFinite,
                            "non-finite value in row " + std::to_string(i / dim) + " ('" + ids[i / dim] + "')");
}

EmbeddingTable table_from_matrix(std::vector<std::string> ids, const Matrix &values) {
    if (static_cast<std::size_t>(values.rows()) != ids.size())
        throw DataError(DataErrorCode::CountMismatch, "table_from_matrix: row count differs from id count");
    EmbeddingTable t;
    t.ids = std::move(ids);
    t.dim = static_cast<std::size_t>(values.cols());
    t.data.resize(t.ids.size() * t.dim);
    for (Eigen::Index i = 0; i < values.rows(); ++i)
        for (Eigen::Index d = 0; d < values.cols(); ++d)
            t.data[static_cast<std::size_t>(i) * t.dim + static_cast<std::size_t>(d)] = static_cast<float>(values(i, d));
    return t;
}

} // namespace cellbench
