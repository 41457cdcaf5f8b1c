#include "cellbench/tissuegraph/raster.hpp"

#include <algorithm>
#include <cmath>

#include "cellbench/core/errors.hpp"

namespace cellbench::graph {

BinaryRaster::BinaryRaster(int w, int h) : width(w), height(h) {
    if (w <= 0 || h <= 0)
        throw ConfigError("raster dimensions must be positive");
    bits.assign(static_cast<std::size_t>(w) * h, 0);
}

std::size_t BinaryRaster::count() const {
    return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

namespace {

long long floor_div(long long a, long long b) {
    long long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

class Painter {
public:
    Painter(BinaryRaster &r, int edge_width) : r_(r) {
        const long long reach = edge_width / 2;
        const long long w2 = static_cast<long long>(edge_width) * edge_width;
        for (long long dy = -reach; dy <= reach; ++dy)
            for (long long dx = -reach; dx <= reach; ++dx)
                if (4 * (dx * dx + dy * dy) <= w2)
                    brush_.emplace_back(dx, dy);
    }

    void plot(long long c, long long row) {
        for (const auto &[dx, dy] : brush_) {
            const long long x = c + dx, y = row + dy;
            if (x >= 0 && y >= 0 && x < r_.width && y < r_.height)
                r_.set(static_cast<int>(x), static_cast<int>(y));
        }
    }

    void line(long long c0, long long r0, long long c1, long long r1) {
        const long long dx = c1 - c0, dy = r1 - r0;
        if (dx == 0 && dy == 0) {
            plot(c0, r0);
            return;
        }
        const bool x_major = std::llabs(dx) >= std::llabs(dy);
        const long long a0 = x_major ? c0 : r0;
        const long long m0 = x_major ? r0 : c0;
        const long long da = x_major ? dx : dy;
        const long long dm = x_major ? dy : dx;
        const long long len = std::llabs(da);
        const long long step = da > 0 ? 1 : -1;
        for (long long i = 0; i <= len; ++i) {
            const long long a = a0 + step * i;
            // Exact minor coordinate is m0 + dm * i / len.
            const long long num = m0 * len + dm * i;
            const long long q = floor_div(num, len);
            const long long rem2 = 2 * (num - q * len);
            if (rem2 <= len)
                emit(x_major, a, q);
            if (rem2 >= len)
                emit(x_major, a, q + 1);
        }
    }

private:
    void emit(bool x_major, long long a, long long m) {
        if (x_major)
            plot(a, m);
        else
            plot(m, a);
    }

    BinaryRaster &r_;
    std::vector<std::pair<long long, long long>> brush_;
};

constexpr double kMaxPixelCoordinate = 1e7;

long long to_pixel(double v, double lo, double hi, int n) {
    const double p = std::floor((v - lo) / (hi - lo) * n);
    if (!std::isfinite(p) || std::fabs(p) > kMaxPixelCoordinate)
        throw DataError(DataErrorCode::NonFinite, "rasterize_edges: coordinate far outside the viewport");
    return static_cast<long long>(p);
}

} // namespace

BinaryRaster rasterize_edges(const std::vector<Point2> &points, const EdgeList &edges, int width,
                             int height, int edge_width, const Viewport &viewport) {
    if (width <= 0 || height <= 0)
        throw ConfigError("rasterize_edges: zero-area native raster");
    if (edge_width < 1)
        throw ConfigError("rasterize_edges: edge width must be >= 1");
    if (!(viewport.x1 > viewport.x0) || !(viewport.y1 > viewport.y0))
        throw ConfigError("rasterize_edges: empty viewport");
    if (edges.n_nodes != points.size())
        throw DataError(DataErrorCode::CountMismatch, "rasterize_edges: edge list node count differs from points");

    BinaryRaster raster(width, height);
    Painter painter(raster, edge_width);
    for (const auto &[a, b] : edges.edges) {
        if (a >= points.size() || b >= points.size())
            throw DataError(DataErrorCode::DegenerateInput, "rasterize_edges: edge index out of range");
        const auto &pa = points[a];
        const auto &pb = points[b];
        painter.line(to_pixel(pa.x, viewport.x0, viewport.x1, width),
                     to_pixel(pa.y, viewport.y0, viewport.y1, height),
                     to_pixel(pb.x, viewport.x0, viewport.x1, width),
                     to_pixel(pb.y, viewport.y0, viewport.y1, height));
    }
    return raster;
}

BinaryRaster resize_binary(const BinaryRaster &raster, int out_width, int out_height) {
    if (raster.width <= 0 || raster.height <= 0)
        throw ConfigError("resize_binary: zero-area input");
    BinaryRaster out(out_width, out_height);
    const double sx = static_cast<double>(raster.width) / out_width;
    const double sy = static_cast<double>(raster.height) / out_height;
    for (int v = 0; v < out_height; ++v) {
        const double fy = std::clamp((v + 0.5) * sy - 0.5, 0.0, static_cast<double>(raster.height - 1));
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, raster.height - 1);
        const double wy = fy - y0;
        for (int u = 0; u < out_width; ++u) {
            const double fx = std::clamp((u + 0.5) * sx - 0.5, 0.0, static_cast<double>(raster.width - 1));
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, raster.width - 1);
            const double wx = fx - x0;
            const double top = (1.0 - wx) * raster.at(x0, y0) + wx * raster.at(x1, y0);
            const double bottom = (1.0 - wx) * raster.at(x0, y1) + wx * raster.at(x1, y1);
            if ((1.0 - wy) * top + wy * bottom >= 0.5)
                out.set(u, v);
        }
    }
    return out;
}

BinaryRaster render_edges(const std::vector<Point2> &points, const EdgeList &edges,
                          const RenderOptions &options) {
    const BinaryRaster native = rasterize_edges(points, edges, options.native_width, options.native_height,
                                                options.edge_width, options.viewport);
    if (native.width == options.out_width && native.height == options.out_height)
        return native;
    return resize_binary(native, options.out_width, options.out_height);
}

std::pair<int, int> native_size_for_extent(double width_um, double height_um, double um_per_pixel) {
    if (!(um_per_pixel > 0.0))
        throw ConfigError("pixel size must be positive");
    const auto w = static_cast<long long>(std::lround(width_um / um_per_pixel));
    const auto h = static_cast<long long>(std::lround(height_um / um_per_pixel));
    if (w <= 0 || h <= 0 || w > (1 << 16) || h > (1 << 16))
        throw ConfigError("native raster size out of range");
    return {static_cast<int>(w), static_cast<int>(h)};
}

std::string encode_pgm(const BinaryRaster &raster) {
    std::string out = "P5\n" + std::to_string(raster.width) + " " + std::to_string(raster.height) + "\n1\n";
    out.append(reinterpret_cast<const char *>(raster.bits.data()), raster.bits.size());
    return out;
}

namespace {

void put_u32le(std::string &out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i)
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32le(const std::string &in, std::size_t off) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
        v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[off + i])) << (8 * i);
    return v;
}

} // namespace

std::string encode_packed(const BinaryRaster &raster) {
    std::string out;
    put_u32le(out, static_cast<std::uint32_t>(raster.width));
    put_u32le(out, static_cast<std::uint32_t>(raster.height));
    const std::size_t n = raster.bits.size();
    std::string payload((n + 7) / 8, '\0');
    for (std::size_t i = 0; i < n; ++i)
        if (raster.bits[i])
            payload[i / 8] = static_cast<char>(static_cast<unsigned char>(payload[i / 8]) | (0x80u >> (i % 8)));
    return out + payload;
}

BinaryRaster decode_packed(const std::string &bytes) {
    if (bytes.size() < 8)
        throw DataError(DataErrorCode::PayloadSize, "packed raster: truncated header");
    const auto w = get_u32le(bytes, 0);
    const auto h = get_u32le(bytes, 4);
    const std::size_t n = static_cast<std::size_t>(w) * h;
    if (bytes.size() != 8 + (n + 7) / 8)
        throw DataError(DataErrorCode::PayloadSize, "packed raster: payload size does not match header");
    BinaryRaster r(static_cast<int>(w), static_cast<int>(h));
    for (std::size_t i = 0; i < n; ++i)
        r.bits[i] = (static_cast<unsigned char>(bytes[8 + i / 8]) >> (7 - i % 8)) & 1u;
    return r;
}

} // namespace cellbench::graph
