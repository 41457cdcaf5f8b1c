#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cellbench {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

using MetaMap = std::map<std::string, std::string>;

/// N items x D float32 embedding, with unique item ids and per-item
/// string metadata (plate, well, lab, gene, compound, stage, ...).
struct EmbeddingTable {
    std::vector<std::string> ids;
    std::size_t dim = 0;
    std::vector<float> data; // row-major N x D
    std::vector<std::string> meta_keys;
    std::vector<MetaMap> meta; // one map per item; empty or same length as ids

    std::size_t size() const { return ids.size(); }
    std::span<const float> row(std::size_t i) const { return {data.data() + i * dim, dim}; }

    void add_row(std::string id, std::span<const double> values, MetaMap item_meta = {});
    void add_row(std::string id, std::span<const float> values, MetaMap item_meta = {});

    // Value of a metadata key, or nullptr when absent.
    const std::string *meta_value(std::size_t i, const std::string &key) const;
    // Throws DataError(MissingKey) naming the item when absent.
    const std::string &require_meta(std::size_t i, const std::string &key) const;

    Matrix matrix() const;
    EmbeddingTable subset(const std::vector<std::size_t> &rows) const;
    std::size_t index_of(const std::string &id) const; // throws when unknown

    // ids unique, entries finite, D > 0, consistent sizes; throws DataError.
    void validate() const;

    friend bool operator==(const EmbeddingTable &, const EmbeddingTable &) = default;
};

// Builds a table from a double matrix, rounding entries to float32.
EmbeddingTable table_from_matrix(std::vector<std::string> ids, const Matrix &values);

} // namespace cellbench
