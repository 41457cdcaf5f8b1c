#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "cellbench/core/geometry.hpp"

namespace cellbench::graph {

enum class GridKind { Square, Hex };

GridKind parse_grid_kind(const std::string &text);
std::string to_string(GridKind kind);

// Spatial-transcriptomics capture spots of one slide, in micrometres.
struct SpotGrid {
    std::vector<std::string> spot_ids;
    std::vector<Point2> centers;
    GridKind kind = GridKind::Square;
    double pixel_size_um = 1.0;
};

struct Box {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

    bool contains(const Point2 &p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
};

struct BinnedPatch {
    std::string anchor_spot_id;
    std::vector<std::string> member_spot_ids; // anchor first, then by distance
    Box bounding_box;
    std::vector<double> averaged_targets;
};

// Median nearest-neighbor distance between spot centers; 0 for a single spot.
double grid_pitch(const SpotGrid &grid);

/// Groups each anchor spot with its lattice neighbors: spots within 1.5x the
/// grid pitch, keeping at most 8 (square) or 6 (hex) nearest. Partial
/// neighborhoods at slide edges are kept. The bounding box is the union of the
/// members' patch squares (side patch_extent_um, centered on the spot).
std::vector<BinnedPatch> bin_spots(const SpotGrid &grid, double patch_extent_um);

using TargetMap = std::map<std::string, std::vector<double>>;

// Componentwise mean of the members' target vectors.
std::vector<double> average_targets(const BinnedPatch &patch, const TargetMap &per_spot_targets);

std::size_t count_cells_in_box(const Box &box, const std::vector<Point2> &cells);

// Removes patches whose bounding box holds no cell centroid (boundary inclusive).
std::vector<BinnedPatch> drop_empty_patches(std::vector<BinnedPatch> patches, const std::vector<Point2> &cells);

// Cell centroids inside a box, in input order.
std::vector<Point2> cells_in_box(const Box &box, const std::vector<Point2> &cells);

// CSV readers: `spot_id,x_um,y_um,grid_kind,pixel_size_um` and `cell_id,x_um,y_um`.
SpotGrid read_spot_grid(const std::filesystem::path &path);
struct CellTable {
    std::vector<std::string> ids;
    std::vector<Point2> centroids;
};
CellTable read_cells(const std::filesystem::path &path);

// `item_id,g1..gG`; returns gene names through `genes`.
TargetMap read_targets(const std::filesystem::path &path, std::vector<std::string> &genes);

} // namespace cellbench::graph
