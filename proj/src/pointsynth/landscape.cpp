#include "cellbench/pointsynth/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cellbench/core/errors.hpp"

namespace cellbench::synth {

std::string to_string(LandscapeKind kind) {
    switch (kind) {
    case LandscapeKind::Constant: return "constant";
    case LandscapeKind::Slope: return "slope";
    case LandscapeKind::Step: return "step";
    case LandscapeKind::DiscsEmboss: return "discs_emboss";
    case LandscapeKind::DiscsDeboss: return "discs_deboss";
    }
    return "unknown";
}

IntensityLandscape IntensityLandscape::constant() { return {}; }

IntensityLandscape IntensityLandscape::slope(double rate, double offset) {
    IntensityLandscape l;
    l.kind = LandscapeKind::Slope;
    l.slope_rate = rate;
    l.slope_offset = offset;
    return l;
}

IntensityLandscape IntensityLandscape::step(double threshold, double amplitude) {
    if (amplitude < -1.0)
        throw ConfigError("step landscape: amplitude below -1 makes the landscape negative");
    IntensityLandscape l;
    l.kind = LandscapeKind::Step;
    l.step_threshold = threshold;
    l.amplitude = amplitude;
    return l;
}

IntensityLandscape IntensityLandscape::emboss(int n_discs, double radius, double amplitude) {
    if (n_discs < 1 || !(radius > 0.0) || radius > 0.5)
        throw ConfigError("emboss landscape: need n_discs >= 1 and radius in (0, 0.5]");
    if (amplitude < -1.0)
        throw ConfigError("emboss landscape: amplitude below -1 makes the landscape negative");
    IntensityLandscape l;
    l.kind = LandscapeKind::DiscsEmboss;
    l.n_discs = n_discs;
    l.radius = radius;
    l.amplitude = amplitude;
    return l;
}

IntensityLandscape IntensityLandscape::deboss(int n_discs, double radius) {
    if (n_discs < 1 || !(radius > 0.0) || radius > 0.5)
        throw ConfigError("deboss landscape: need n_discs >= 1 and radius in (0, 0.5]");
    IntensityLandscape l;
    l.kind = LandscapeKind::DiscsDeboss;
    l.n_discs = n_discs;
    l.radius = radius;
    return l;
}

bool IntensityLandscape::inside_any_disc(double x, double y) const {
    const double r2 = radius * radius;
    for (const auto &c : disc_centers) {
        const double dx = x - c.x;
        const double dy = y - c.y;
        if (dx * dx + dy * dy <= r2)
            return true;
    }
    return false;
}

double IntensityLandscape::operator()(double x, double y) const {
    switch (kind) {
    case LandscapeKind::Constant:
        return 1.0;
    case LandscapeKind::Slope:
        return 1.0 + std::max(slope_offset - slope_rate * x, 0.0);
    case LandscapeKind::Step:
        return x < step_threshold ? 1.0 + amplitude : 1.0;
    case LandscapeKind::DiscsEmboss:
    case LandscapeKind::DiscsDeboss:
        break;
    }
    if (!resolved())
        throw ConfigError("disc landscape evaluated before its centers were resolved");
    const bool inside = inside_any_disc(x, y);
    if (kind == LandscapeKind::DiscsEmboss)
        return inside ? 1.0 + amplitude : 1.0;
    return inside ? 0.0 : 1.0;
}

double IntensityLandscape::upper_bound() const {
    switch (kind) {
    case LandscapeKind::Constant:
        return 1.0;
    case LandscapeKind::Slope:
        // b - k x is linear on [0, 1]; the maximum is at an endpoint.
        return 1.0 + std::max({slope_offset, slope_offset - slope_rate, 0.0});
    case LandscapeKind::Step:
    case LandscapeKind::DiscsEmboss:
        return std::max(1.0, 1.0 + amplitude);
    case LandscapeKind::DiscsDeboss:
        return 1.0;
    }
    return 1.0;
}

IntensityLandscape resolve_discs(IntensityLandscape landscape, Rng &rng) {
    if (!landscape.has_discs())
        return landscape;
    landscape.disc_centers.clear();
    const double r = landscape.radius;
    if (landscape.n_discs == 1) {
        const double x = rng.uniform(r, 1.0 - r);
        const double y = rng.uniform(r, 1.0 - r);
        landscape.disc_centers.push_back({x, y});
        return landscape;
    }
    for (int i = 0; i < landscape.n_discs; ++i) {
        const double angle = 2.0 * std::numbers::pi * i / landscape.n_discs;
        landscape.disc_centers.push_back({0.5 + 0.25 * std::cos(angle), 0.5 + 0.25 * std::sin(angle)});
    }
    return landscape;
}

} // namespace cellbench::synth
