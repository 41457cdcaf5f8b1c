#include "cellbench/harness/profiles.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "cellbench/core/errors.hpp"

namespace cellbench::harness {

Centering parse_centering(const std::string &text) {
    if (text == "none") return Centering::None;
    if (text == "negcon_per_plate" || text == "negcon") return Centering::NegControlPerPlate;
    throw ConfigError("unknown centering '" + text + "' (expected none|negcon_per_plate)");
}

Aggregate parse_aggregate(const std::string &text) {
    if (text == "mean") return Aggregate::Mean;
    if (text == "median") return Aggregate::Median;
    throw ConfigError("unknown aggregate '" + text + "' (expected mean|median)");
}

Matrix center_on_negative_controls(const Matrix &values, const std::vector<std::string> &plate,
                                   const std::vector<bool> &is_negative) {
    const auto n = static_cast<std::size_t>(values.rows());
    if (plate.size() != n || is_negative.size() != n)
        throw DataError(DataErrorCode::CountMismatch, "centering: plate/control labels do not match row count");

    std::map<std::string, std::pair<Vector, std::size_t>> sums;
    for (std::size_t i = 0; i < n; ++i) {
        auto &entry = sums.try_emplace(plate[i], Vector::Zero(values.cols()), 0).first->second;
        if (is_negative[i]) {
            entry.first += values.row(static_cast<Eigen::Index>(i)).transpose();
            ++entry.second;
        }
    }
    std::string missing;
    for (const auto &[name, entry] : sums)
        if (entry.second == 0) missing += (missing.empty() ? "" : ", ") + name;
    if (!missing.empty())
        throw DataError(DataErrorCode::MissingControls, "plates without negative controls: " + missing);

    std::map<std::string, Vector> means;
    for (const auto &[name, entry] : sums)
        means.emplace(name, entry.first / static_cast<double>(entry.second));
    Matrix out = values;
    for (std::size_t i = 0; i < n; ++i)
        out.row(static_cast<Eigen::Index>(i)) -= means.at(plate[i]).transpose();
    return out;
}

Matrix center_on_negative_controls(const EmbeddingTable &table, const ProfileOptions &options) {
    std::vector<std::string> plate(table.size());
    std::vector<bool> negative(table.size());
    for (std::size_t i = 0; i < table.size(); ++i) {
        plate[i] = table.require_meta(i, options.plate_key);
        const auto *c = table.meta_value(i, options.control_key);
        negative[i] = c && *c == options.negative_value;
    }
    return center_on_negative_controls(table.matrix(), plate, negative);
}

namespace {

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

} // namespace

EmbeddingTable build_profiles(const EmbeddingTable &table, const std::string &group_key,
                              const ProfileOptions &options) {
    table.validate();
    const Matrix values = options.center == Centering::NegControlPerPlate
                              ? center_on_negative_controls(table, options)
                              : table.matrix();

    std::vector<std::string> order;
    std::unordered_map<std::string, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < table.size(); ++i) {
        const std::string &g = table.require_meta(i, group_key);
        auto [it, inserted] = members.try_emplace(g);
        if (inserted) order.push_back(g);
        it->second.push_back(i);
    }

    EmbeddingTable out;
    out.dim = table.dim;
    out.meta_keys.push_back(group_key);
    out.meta_keys.push_back("n_members");
    for (const auto &k : table.meta_keys)
        if (k != group_key && k != "n_members") out.meta_keys.push_back(k);

    std::vector<double> row(table.dim);
    for (const auto &g : order) {
        const auto &rows = members.at(g);
        for (std::size_t d = 0; d < table.dim; ++d) {
            const auto col = static_cast<Eigen::Index>(d);
            if (options.aggregate == Aggregate::Mean) {
                double s = 0.0;
                for (std::size_t r : rows) s += values(static_cast<Eigen::Index>(r), col);
                row[d] = s / static_cast<double>(rows.size());
            } else {
                std::vector<double> v;
                v.reserve(rows.size());
                for (std::size_t r : rows) v.push_back(values(static_cast<Eigen::Index>(r), col));
                row[d] = median_of(std::move(v));
            }
        }
        MetaMap meta{{group_key, g}, {"n_members", std::to_string(rows.size())}};
        for (const auto &k : table.meta_keys) {
            if (k == group_key || k == "n_members") continue;
            const std::string *first = table.meta_value(rows.front(), k);
            if (!first) continue;
            bool constant = true;
            for (std::size_t r : rows) {
                const std::string *v = table.meta_value(r, k);
                if (!v || *v != *first) { constant = false; break; }
            }
            if (constant) meta.emplace(k, *first);
        }
        out.add_row(g, std::span<const double>(row), std::move(meta));
    }
    return out;
}

} // namespace cellbench::harness
