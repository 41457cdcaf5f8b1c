#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "cellbench/core/geometry.hpp"

namespace cellbench::graph {

// Undirected simple graph; every edge stored once as (i, j) with i < j,
// sorted lexicographically.
struct EdgeList {
    std::size_t n_nodes = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;

    friend bool operator==(const EdgeList &, const EdgeList &) = default;
};

// Subtract the centroid, divide by the larger half-extent of the bounding box.
// A single point (or coincident points) maps to the origin.
PointPattern normalize_coords(const PointPattern &pattern);

struct KnnGraph {
    EdgeList graph;
    std::size_t k_used = 0;
    bool clamped = false; // k was reduced to n - 1
};

/// Symmetrized k-nearest-neighbor graph under the Euclidean metric.
/// Neighbor ties are broken by (distance, lower index). Uses a uniform bucket
/// grid; results are identical to exhaustive search.
KnnGraph knn_graph(const std::vector<Point2> &points, std::size_t k);

// Per node: degree, then min / max / mean / population std of the neighbor
// degrees. Isolated nodes get all zeros.
using DegreeProfile = std::array<double, 5>;
std::vector<DegreeProfile> local_degree_profile(const EdgeList &graph);

} // namespace cellbench::graph
