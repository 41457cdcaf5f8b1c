#include "cellbench/harness/folds.hpp"

#include <algorithm>
#include <map>

#include "cellbench/core/errors.hpp"
#include "cellbench/core/rng.hpp"

namespace cellbench::harness {

namespace {

template <class T>
void shuffle(std::vector<T> &v, Rng &rng) {
    for (std::size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[rng.below(i)]);
}

// Chunk boundaries for `supply` units over `folds` folds, `per` units each
// when possible, otherwise an even split.
std::vector<std::size_t> chunk_starts(std::size_t supply, int folds, std::size_t per, bool &short_supply) {
    std::vector<std::size_t> starts(static_cast<std::size_t>(folds) + 1);
    short_supply = supply < per * static_cast<std::size_t>(folds);
    for (int f = 0; f <= folds; ++f) {
        const auto uf = static_cast<std::size_t>(f);
        starts[uf] = short_supply ? supply * uf / static_cast<std::size_t>(folds) : per * uf;
    }
    return starts;
}

void check_folds(int folds) {
    if (folds < 1)
        throw ConfigError("make_folds: number of folds must be positive");
}

FoldSpec per_gene(const EmbeddingTable &table, const PerGeneSubsample &s, std::uint64_t seed) {
    check_folds(s.folds);
    if (s.n_per == 0)
        throw ConfigError("make_folds: n_per must be positive");
    std::map<std::string, std::vector<std::size_t>> by_gene;
    for (std::size_t i = 0; i < table.size(); ++i)
        by_gene[table.require_meta(i, s.gene_key)].push_back(i);

    FoldSpec spec;
    spec.n_folds = s.folds;
    spec.scheme = "per_gene_subsample(n_per=" + std::to_string(s.n_per) + ",folds=" + std::to_string(s.folds) + ")";
    Rng rng(seed);
    for (auto &[gene, rows] : by_gene) {
        // Canonical order before shuffling, so row order in the input does not matter.
        std::sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) { return table.ids[a] < table.ids[b]; });
        shuffle(rows, rng);
        bool short_supply = false;
        const auto starts = chunk_starts(rows.size(), s.folds, s.n_per, short_supply);
        if (short_supply)
            spec.warnings.push_back("gene '" + gene + "' has " + std::to_string(rows.size()) + " items, fewer than " +
                                    std::to_string(s.n_per * static_cast<std::size_t>(s.folds)) + "; split evenly");
        for (int f = 0; f < s.folds; ++f)
            for (std::size_t k = starts[static_cast<std::size_t>(f)]; k < starts[static_cast<std::size_t>(f) + 1]; ++k)
                spec.fold_of[table.ids[rows[k]]] = f;
    }
    return spec;
}

FoldSpec plate_grouped(const EmbeddingTable &table, const PlateGrouped &s, std::uint64_t seed) {
    check_folds(s.folds);
    if (s.plates_per_lab == 0)
        throw ConfigError("make_folds: plates_per_lab must be positive");
    std::map<std::string, std::vector<std::string>> plates_of_lab;
    std::map<std::string, std::string> lab_of_plate;
    for (std::size_t i = 0; i < table.size(); ++i) {
        const auto &plate = table.require_meta(i, s.plate_key);
        const auto &lab = table.require_meta(i, s.lab_key);
        const auto [it, inserted] = lab_of_plate.emplace(plate, lab);
        if (inserted)
            plates_of_lab[lab].push_back(plate);
        else if (it->second != lab)
            throw DataError(DataErrorCode::BadFormat, "plate '" + plate + "' appears under labs '" + it->second +
                                                          "' and '" + lab + "'");
    }

    FoldSpec spec;
    spec.n_folds = s.folds;
    spec.scheme = "plate_grouped(folds=" + std::to_string(s.folds) + ",plates_per_lab=" +
                  std::to_string(s.plates_per_lab) + ")";
    std::map<std::string, int> fold_of_plate;
    Rng rng(seed);
    for (auto &[lab, plates] : plates_of_lab) {
        std::sort(plates.begin(), plates.end());
        shuffle(plates, rng);
        bool short_supply = false;
        const auto starts = chunk_starts(plates.size(), s.folds, s.plates_per_lab, short_supply);
        if (short_supply)
            spec.warnings.push_back("lab '" + lab + "' has " + std::to_string(plates.size()) + " plates, fewer than " +
                                    std::to_string(s.plates_per_lab * static_cast<std::size_t>(s.folds)) +
                                    "; split evenly");
        for (int f = 0; f < s.folds; ++f)
            for (std::size_t k = starts[static_cast<std::size_t>(f)]; k < starts[static_cast<std::size_t>(f) + 1]; ++k)
                fold_of_plate[plates[k]] = f;
    }
    for (std::size_t i = 0; i < table.size(); ++i) {
        const auto it = fold_of_plate.find(table.require_meta(i, s.plate_key));
        if (it != fold_of_plate.end())
            spec.fold_of[table.ids[i]] = it->second;
    }
    return spec;
}

} // namespace

FoldSpec make_folds(const EmbeddingTable &table, const FoldScheme &scheme, std::uint64_t seed) {
    return std::visit(
        [&](const auto &s) -> FoldSpec {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, PerGeneSubsample>)
                return per_gene(table, s, seed);
            else
                return plate_grouped(table, s, seed);
        },
        scheme);
}

} // namespace cellbench::harness
