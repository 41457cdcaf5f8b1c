#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace cellbench {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2 &, const Point2 &) = default;
};

inline double squared_distance(const Point2 &a, const Point2 &b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

// Ordered 2-D point set; the structure-only view of a tissue region or a
// synthetic sample.
struct PointPattern {
    std::vector<Point2> points;
    std::optional<int> class_id;
    std::uint64_t seed = 0;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }

    friend bool operator==(const PointPattern &, const PointPattern &) = default;
};

Point2 centroid(const std::vector<Point2> &points);

} // namespace cellbench
