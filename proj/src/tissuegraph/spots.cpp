#include "cellbench/tissuegraph/spots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "cellbench/core/errors.hpp"
#include "cellbench/core/io.hpp"

namespace cellbench::graph {

GridKind parse_grid_kind(const std::string &text) {
    std::string t = text;
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
    if (t == "square")
        return GridKind::Square;
    if (t == "hex" || t == "hexagonal")
        return GridKind::Hex;
    throw DataError(DataErrorCode::BadFormat, "unknown grid kind '" + text + "'");
}

std::string to_string(GridKind kind) { return kind == GridKind::Square ? "square" : "hex"; }

double grid_pitch(const SpotGrid &grid) {
    const std::size_t n = grid.centers.size();
    if (n < 2)
        return 0.0;
    std::vector<double> nn(n, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d2 = squared_distance(grid.centers[i], grid.centers[j]);
            nn[i] = std::min(nn[i], d2);
            nn[j] = std::min(nn[j], d2);
        }
    std::sort(nn.begin(), nn.end());
    const double mid = n % 2 ? std::sqrt(nn[n / 2]) : 0.5 * (std::sqrt(nn[n / 2 - 1]) + std::sqrt(nn[n / 2]));
    return mid;
}

std::vector<BinnedPatch> bin_spots(const SpotGrid &grid, double patch_extent_um) {
    const std::size_t n = grid.centers.size();
    if (n == 0)
        throw DataError(DataErrorCode::DegenerateInput, "bin_spots: empty spot grid");
    if (grid.spot_ids.size() != n)
        throw DataError(DataErrorCode::CountMismatch, "bin_spots: ids and centers differ in length");
    if (!(patch_extent_um > 0.0))
        throw ConfigError("bin_spots: patch extent must be positive");

    const double pitch = grid_pitch(grid);
    const double radius = 1.5 * pitch * (1.0 + 1e-9);
    const double r2 = radius * radius;
    const std::size_t cap = grid.kind == GridKind::Square ? 8 : 6;
    const double half = 0.5 * patch_extent_um;

    std::vector<BinnedPatch> patches;
    patches.reserve(n);
    std::vector<std::pair<double, std::size_t>> near;
    for (std::size_t a = 0; a < n; ++a) {
        near.clear();
        if (pitch > 0.0)
            for (std::size_t j = 0; j < n; ++j) {
                if (j == a)
                    continue;
                const double d2 = squared_distance(grid.centers[a], grid.centers[j]);
                if (d2 <= r2)
                    near.emplace_back(d2, j);
            }
        std::sort(near.begin(), near.end());
        if (near.size() > cap)
            near.resize(cap);

        BinnedPatch patch;
        patch.anchor_spot_id = grid.spot_ids[a];
        patch.member_spot_ids.push_back(grid.spot_ids[a]);
        const auto &c = grid.centers[a];
        Box box{c.x - half, c.y - half, c.x + half, c.y + half};
        for (const auto &[d2, j] : near) {
            patch.member_spot_ids.push_back(grid.spot_ids[j]);
            const auto &m = grid.centers[j];
            box.x0 = std::min(box.x0, m.x - half);
            box.y0 = std::min(box.y0, m.y - half);
            box.x1 = std::max(box.x1, m.x + half);
            box.y1 = std::max(box.y1, m.y + half);
        }
        patch.bounding_box = box;
        patches.push_back(std::move(patch));
    }
    return patches;
}

std::vector<double> average_targets(const BinnedPatch &patch, const TargetMap &per_spot_targets) {
    if (patch.member_spot_ids.empty())
        throw DataError(DataErrorCode::DegenerateInput, "average_targets: patch without members");
    std::vector<double> sum;
    for (const auto &id : patch.member_spot_ids) {
        const auto it = per_spot_targets.find(id);
        if (it == per_spot_targets.end())
            throw DataError(DataErrorCode::UnresolvedIds, "average_targets: no targets for spot '" + id + "'");
        if (sum.empty())
            sum.assign(it->second.size(), 0.0);
        else if (it->second.size() != sum.size())
            throw DataError(DataErrorCode::DimMismatch, "average_targets: target length differs for spot '" + id + "'");
        for (std::size_t g = 0; g < sum.size(); ++g)
            sum[g] += it->second[g];
    }
    const double n = static_cast<double>(patch.member_spot_ids.size());
    for (auto &v : sum)
        v /= n;
    return sum;
}

std::size_t count_cells_in_box(const Box &box, const std::vector<Point2> &cells) {
    return static_cast<std::size_t>(
        std::count_if(cells.begin(), cells.end(), [&](const Point2 &p) { return box.contains(p); }));
}

std::vector<BinnedPatch> drop_empty_patches(std::vector<BinnedPatch> patches, const std::vector<Point2> &cells) {
    // Sorting by x lets each box scan only its x-range.
    std::vector<Point2> sorted = cells;
    std::sort(sorted.begin(), sorted.end(), [](const Point2 &a, const Point2 &b) { return a.x < b.x; });
    auto non_empty = [&](const BinnedPatch &p) {
        const auto &b = p.bounding_box;
        auto it = std::lower_bound(sorted.begin(), sorted.end(), b.x0,
                                   [](const Point2 &q, double x) { return q.x < x; });
        for (; it != sorted.end() && it->x <= b.x1; ++it)
            if (it->y >= b.y0 && it->y <= b.y1)
                return true;
        return false;
    };
    std::vector<BinnedPatch> kept;
    kept.reserve(patches.size());
    for (auto &p : patches)
        if (non_empty(p))
            kept.push_back(std::move(p));
    return kept;
}

std::vector<Point2> cells_in_box(const Box &box, const std::vector<Point2> &cells) {
    std::vector<Point2> out;
    for (const auto &p : cells)
        if (box.contains(p))
            out.push_back(p);
    return out;
}

SpotGrid read_spot_grid(const std::filesystem::path &path) {
    const auto csv = io::read_csv(path);
    const auto c_id = csv.column("spot_id"), c_x = csv.column("x_um"), c_y = csv.column("y_um"),
               c_kind = csv.column("grid_kind"), c_px = csv.column("pixel_size_um");
    SpotGrid grid;
    std::set<std::string> seen_ids;
    std::set<std::pair<double, double>> seen_centers;
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        const auto &row = csv.rows[r];
        const std::string ctx = path.string() + " row " + std::to_string(r + 1);
        const GridKind kind = parse_grid_kind(row[c_kind]);
        const double px = io::parse_double(row[c_px], ctx);
        if (r == 0) {
            grid.kind = kind;
            grid.pixel_size_um = px;
        } else if (kind != grid.kind || px != grid.pixel_size_um) {
            throw DataError(DataErrorCode::BadFormat, ctx + ": grid_kind/pixel_size_um must be constant per file");
        }
        if (!(px > 0.0))
            throw DataError(DataErrorCode::BadFormat, ctx + ": pixel_size_um must be positive");
        const Point2 c{io::parse_double(row[c_x], ctx), io::parse_double(row[c_y], ctx)};
        if (!seen_ids.insert(row[c_id]).second)
            throw DataError(DataErrorCode::DuplicateId, ctx + ": duplicate spot id '" + row[c_id] + "'");
        if (!seen_centers.insert({c.x, c.y}).second)
            throw DataError(DataErrorCode::DuplicateId, ctx + ": duplicate spot center");
        grid.spot_ids.push_back(row[c_id]);
        grid.centers.push_back(c);
    }
    if (grid.centers.empty())
        throw DataError(DataErrorCode::DegenerateInput, path.string() + ": no spots");
    return grid;
}

CellTable read_cells(const std::filesystem::path &path) {
    const auto csv = io::read_csv(path);
    const auto c_id = csv.column("cell_id"), c_x = csv.column("x_um"), c_y = csv.column("y_um");
    CellTable cells;
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        const std::string ctx = path.string() + " row " + std::to_string(r + 1);
        cells.ids.push_back(csv.rows[r][c_id]);
        cells.centroids.push_back({io::parse_double(csv.rows[r][c_x], ctx), io::parse_double(csv.rows[r][c_y], ctx)});
    }
    return cells;
}

TargetMap read_targets(const std::filesystem::path &path, std::vector<std::string> &genes) {
    const auto csv = io::read_csv(path);
    if (csv.header.size() < 2 || csv.header[0] != "item_id")
        throw DataError(DataErrorCode::BadFormat, path.string() + ": expected header item_id,g1..gG");
    genes.assign(csv.header.begin() + 1, csv.header.end());
    TargetMap out;
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        const auto &row = csv.rows[r];
        std::vector<double> v(genes.size());
        for (std::size_t g = 0; g < genes.size(); ++g) {
            v[g] = io::parse_double(row[g + 1], path.string() + " row " + std::to_string(r + 1));
            if (!std::isfinite(v[g]))
                throw DataError(DataErrorCode::NonFinite, path.string() + ": non-finite target for '" + row[0] + "'");
        }
        if (!out.emplace(row[0], std::move(v)).second)
            throw DataError(DataErrorCode::DuplicateId, path.string() + ": duplicate item '" + row[0] + "'");
    }
    return out;
}

} // namespace cellbench::graph
