#pragma once

#include <string>
#include <vector>

#include "cellbench/core/geometry.hpp"
#include "cellbench/core/rng.hpp"

namespace cellbench::synth {

enum class LandscapeKind { Constant, Slope, Step, DiscsEmboss, DiscsDeboss };

std::string to_string(LandscapeKind kind);

/// Parametric non-negative function on the unit square, used either as a
/// point density (lambda) or as a positional-noise scale (sigma).
///
///   Constant     1
///   Slope        1 + max(offset - rate * x, 0)
///   Step         1 + amplitude * [x < threshold]
///   DiscsEmboss  1 + amplitude * min(#discs containing (x,y), 1)
///   DiscsDeboss  1 - min(#discs containing (x,y), 1)
///
/// Disc landscapes need their centers resolved (see resolve_discs) before
/// evaluation.
struct IntensityLandscape {
    LandscapeKind kind = LandscapeKind::Constant;
    double slope_rate = 0.0;
    double slope_offset = 0.0;
    double step_threshold = 0.5;
    double amplitude = 0.0;
    int n_discs = 0;
    double radius = 0.0;
    std::vector<Point2> disc_centers;

    static IntensityLandscape constant();
    static IntensityLandscape slope(double rate, double offset);
    static IntensityLandscape step(double threshold, double amplitude);
    static IntensityLandscape emboss(int n_discs, double radius, double amplitude);
    static IntensityLandscape deboss(int n_discs, double radius);

    bool has_discs() const {
        return kind == LandscapeKind::DiscsEmboss || kind == LandscapeKind::DiscsDeboss;
    }
    bool resolved() const {
        return !has_discs() || disc_centers.size() == static_cast<std::size_t>(n_discs);
    }

    // Throws ConfigError for unresolved disc centers.
    double operator()(double x, double y) const;
    double operator()(const Point2 &p) const { return (*this)(p.x, p.y); }

    // Supremum over the unit square (attained or approached).
    double upper_bound() const;

    bool inside_any_disc(double x, double y) const;
};

/// Places disc centers: n > 1 discs evenly on the circle of radius 0.25 about
/// (0.5, 0.5) starting at angle 0; a single disc uniformly in [r, 1-r]^2.
/// Non-disc landscapes are returned unchanged and draw nothing from rng.
IntensityLandscape resolve_discs(IntensityLandscape landscape, Rng &rng);

} // namespace cellbench::synth
