#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cellbench/core/geometry.hpp"
#include "cellbench/tissuegraph/graph.hpp"

namespace cellbench::graph {

// Row-major binary image. Row 0 corresponds to the viewport's y0 edge and
// column 0 to its x0 edge.
struct BinaryRaster {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    BinaryRaster() = default;
    BinaryRaster(int w, int h);

    std::uint8_t at(int col, int row) const { return bits[static_cast<std::size_t>(row) * width + col]; }
    void set(int col, int row) { bits[static_cast<std::size_t>(row) * width + col] = 1; }
    std::size_t count() const;

    friend bool operator==(const BinaryRaster &, const BinaryRaster &) = default;
};

// Region of point space mapped onto the native raster.
struct Viewport {
    double x0 = -1.0;
    double y0 = -1.0;
    double x1 = 1.0;
    double y1 = 1.0;
};

struct RenderOptions {
    int edge_width = 1;
    int native_width = 224;
    int native_height = 224;
    int out_width = 224;
    int out_height = 224;
    Viewport viewport;
};

/// Draws every edge as an integer-pixel segment between the pixels holding its
/// endpoints, then thickens with a disc of diameter edge_width. Where the exact
/// segment passes halfway between two pixels both are set, so the pixel set
/// commutes with the dihedral symmetries of a square raster.
BinaryRaster rasterize_edges(const std::vector<Point2> &points, const EdgeList &edges, int width,
                             int height, int edge_width = 1, const Viewport &viewport = {});

// Bilinear resize (pixel-center alignment) followed by a >= 0.5 threshold.
BinaryRaster resize_binary(const BinaryRaster &raster, int out_width, int out_height);

BinaryRaster render_edges(const std::vector<Point2> &points, const EdgeList &edges,
                          const RenderOptions &options = {});

// Native raster side lengths for a bounding box in micrometres.
std::pair<int, int> native_size_for_extent(double width_um, double height_um, double um_per_pixel);

// P5 greymap with maxval 1.
std::string encode_pgm(const BinaryRaster &raster);
// 8-byte header (width:u32le, height:u32le), then width*height bits packed
// MSB-first, row-major, the final byte zero padded.
std::string encode_packed(const BinaryRaster &raster);
BinaryRaster decode_packed(const std::string &bytes);

} // namespace cellbench::graph
