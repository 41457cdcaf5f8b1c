#include "cellbench/core/geometry.hpp"

namespace cellbench {

Point2 centroid(const std::vector<Point2> &points) {
    if (points.empty())
        return {};
    double sx = 0.0, sy = 0.0;
    for (const auto &p : points) {
        sx += p.x;
        sy += p.y;
    }
    const double n = static_cast<double>(points.size());
    return {sx / n, sy / n};
}

} // namespace cellbench
