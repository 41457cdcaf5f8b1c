#include "cellbench/tissuegraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cellbench/core/errors.hpp"

namespace cellbench::graph {

PointPattern normalize_coords(const PointPattern &pattern) {
    if (pattern.empty())
        throw DataError(DataErrorCode::DegenerateInput, "normalize_coords: empty pattern");
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto &p : pattern.points) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    const double half = 0.5 * std::max(xmax - xmin, ymax - ymin);
    const Point2 c = centroid(pattern.points);
    PointPattern out = pattern;
    for (auto &p : out.points) {
        if (half > 0.0)
            p = {(p.x - c.x) / half, (p.y - c.y) / half};
        else
            p = {0.0, 0.0};
    }
    return out;
}

namespace {

struct Candidate {
    double d2;
    std::uint32_t index;
    bool operator<(const Candidate &o) const { return d2 < o.d2 || (d2 == o.d2 && index < o.index); }
};

class BucketGrid {
public:
    BucketGrid(const std::vector<Point2> &points, double target_per_cell) : points_(points) {
        xmin_ = ymin_ = std::numeric_limits<double>::infinity();
        double xmax = -xmin_, ymax = -ymin_;
        for (const auto &p : points) {
            xmin_ = std::min(xmin_, p.x);
            ymin_ = std::min(ymin_, p.y);
            xmax = std::max(xmax, p.x);
            ymax = std::max(ymax, p.y);
        }
        const double w = std::max(xmax - xmin_, 1e-300);
        const double h = std::max(ymax - ymin_, 1e-300);
        const double cells = std::max(1.0, static_cast<double>(points.size()) / target_per_cell);
        cell_ = std::sqrt(w * h / cells);
        if (!(cell_ > 0.0) || !std::isfinite(cell_))
            cell_ = std::max(w, h);
        nx_ = std::clamp<long>(static_cast<long>(w / cell_) + 1, 1, 1 << 14);
        ny_ = std::clamp<long>(static_cast<long>(h / cell_) + 1, 1, 1 << 14);
        cell_ = std::max(w / static_cast<double>(nx_), h / static_cast<double>(ny_)) * (1.0 + 1e-12);
        if (!(cell_ > 0.0))
            cell_ = 1.0;
        start_.assign(static_cast<std::size_t>(nx_ * ny_) + 1, 0);
        std::vector<std::size_t> cell_of(points.size());
        for (std::size_t i = 0; i < points.size(); ++i) {
            cell_of[i] = cell_index(cell_x(points[i].x), cell_y(points[i].y));
            ++start_[cell_of[i] + 1];
        }
        for (std::size_t c = 1; c < start_.size(); ++c)
            start_[c] += start_[c - 1];
        members_.resize(points.size());
        std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
        for (std::size_t i = 0; i < points.size(); ++i)
            members_[fill[cell_of[i]]++] = static_cast<std::uint32_t>(i);
    }

    long cell_x(double x) const { return std::clamp<long>(static_cast<long>((x - xmin_) / cell_), 0, nx_ - 1); }
    long cell_y(double y) const { return std::clamp<long>(static_cast<long>((y - ymin_) / cell_), 0, ny_ - 1); }
    std::size_t cell_index(long cx, long cy) const { return static_cast<std::size_t>(cy * nx_ + cx); }

    // k nearest neighbors of point i (excluding i), sorted by (d2, index).
    void query(std::uint32_t i, std::size_t k, std::vector<Candidate> &best) const {
        best.clear();
        const Point2 &q = points_[i];
        const long hx = cell_x(q.x), hy = cell_y(q.y);
        const long max_ring = std::max(nx_, ny_);
        for (long ring = 0; ring <= max_ring; ++ring) {
            for (long cy = hy - ring; cy <= hy + ring; ++cy) {
                if (cy < 0 || cy >= ny_)
                    continue;
                const bool edge_row = (cy == hy - ring || cy == hy + ring);
                for (long cx = hx - ring; cx <= hx + ring; cx += (edge_row ? 1 : 2 * ring)) {
                    if (cx >= 0 && cx < nx_)
                        scan_cell(cell_index(cx, cy), i, q, k, best);
                    if (ring == 0)
                        break;
                }
            }
            // Every point outside the scanned block lies at distance >= ring * cell_.
            if (best.size() == k) {
                const double bound = static_cast<double>(ring) * cell_;
                if (best.back().d2 < bound * bound)
                    break;
            }
        }
    }

private:
    void scan_cell(std::size_t cell, std::uint32_t self, const Point2 &q, std::size_t k,
                   std::vector<Candidate> &best) const {
        for (std::size_t m = start_[cell]; m < start_[cell + 1]; ++m) {
            const std::uint32_t j = members_[m];
            if (j == self)
                continue;
            const Candidate c{squared_distance(q, points_[j]), j};
            if (best.size() < k) {
                best.insert(std::upper_bound(best.begin(), best.end(), c), c);
            } else if (c < best.back()) {
                best.pop_back();
                best.insert(std::upper_bound(best.begin(), best.end(), c), c);
            }
        }
    }

    const std::vector<Point2> &points_;
    double xmin_, ymin_, cell_;
    long nx_, ny_;
    std::vector<std::size_t> start_;
    std::vector<std::uint32_t> members_;
};

} // namespace

KnnGraph knn_graph(const std::vector<Point2> &points, std::size_t k) {
    const std::size_t n = points.size();
    if (n < 2)
        throw DataError(DataErrorCode::DegenerateInput, "knn_graph: need at least 2 points");
    if (k < 1)
        throw ConfigError("knn_graph: k must be >= 1");
    for (const auto &p : points)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw DataError(DataErrorCode::NonFinite, "knn_graph: non-finite coordinate");

    KnnGraph result;
    result.clamped = k >= n;
    result.k_used = std::min(k, n - 1);
    result.graph.n_nodes = n;

    BucketGrid grid(points, 2.0);
    std::vector<Candidate> best;
    best.reserve(result.k_used + 1);
    auto &edges = result.graph.edges;
    edges.reserve(n * result.k_used);
    for (std::uint32_t i = 0; i < n; ++i) {
        grid.query(i, result.k_used, best);
        for (const auto &c : best)
            edges.emplace_back(std::min(i, c.index), std::max(i, c.index));
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return result;
}

std::vector<DegreeProfile> local_degree_profile(const EdgeList &graph) {
    const std::size_t n = graph.n_nodes;
    std::vector<std::size_t> degree(n, 0);
    for (const auto &[a, b] : graph.edges) {
        if (a >= n || b >= n || a == b)
            throw DataError(DataErrorCode::DegenerateInput, "local_degree_profile: invalid edge");
        ++degree[a];
        ++degree[b];
    }
    std::vector<std::vector<std::uint32_t>> adjacency(n);
    for (const auto &[a, b] : graph.edges) {
        adjacency[a].push_back(b);
        adjacency[b].push_back(a);
    }
    std::vector<DegreeProfile> out(n, DegreeProfile{0, 0, 0, 0, 0});
    for (std::size_t v = 0; v < n; ++v) {
        const auto &nbrs = adjacency[v];
        if (nbrs.empty())
            continue;
        double mn = std::numeric_limits<double>::infinity(), mx = -mn, sum = 0.0;
        for (auto u : nbrs) {
            const double d = static_cast<double>(degree[u]);
            mn = std::min(mn, d);
            mx = std::max(mx, d);
            sum += d;
        }
        const double mean = sum / static_cast<double>(nbrs.size());
        double ss = 0.0;
        for (auto u : nbrs) {
            const double dev = static_cast<double>(degree[u]) - mean;
            ss += dev * dev;
        }
        out[v] = {static_cast<double>(degree[v]), mn, mx, mean,
                  std::sqrt(ss / static_cast<double>(nbrs.size()))};
    }
    return out;
}

} // namespace cellbench::graph
