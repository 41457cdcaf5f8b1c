#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cellbench/core/geometry.hpp"
#include "cellbench/core/rng.hpp"
#include "cellbench/pointsynth/landscape.hpp"
#include "cellbench/pointsynth/samplers.hpp"

namespace cellbench::synth {

enum class Sampling { NoisyGrid, UniformPoisson };

std::string to_string(Sampling sampling);

inline constexpr int kNumClasses = 24;

struct ClassSpec {
    int class_id = 0;
    Sampling sampling = Sampling::NoisyGrid;
    int voxels = 0;                            // NoisyGrid only
    std::optional<IntensityLandscape> density; // none: uniform
    std::optional<IntensityLandscape> noise;   // none: sigma == 1
    double base_noise_std = 0.0;               // NoisyGrid only
    double poisson_mean = 0.0;                 // UniformPoisson only
    int table_count = 0; // nominal count listed for grid classes, 0 for Poisson classes
    std::string description;
};

// The 24 synthetic classes, indexed by class_id.
const std::vector<ClassSpec> &class_registry();

// Throws ConfigError for ids outside [0, 24).
const ClassSpec &class_spec(int class_id);

// Resolves disc centers from rng, then samples. The returned pattern carries
// class_id; its seed field is left for the caller.
PointPattern generate_class(const ClassSpec &spec, Rng &rng, const NoisyGridOptions &grid = {});
PointPattern generate_class(int class_id, Rng &rng, const NoisyGridOptions &grid = {});

// Seeds a fresh generator and records the seed in the pattern.
PointPattern generate_sample(int class_id, std::uint64_t seed, const NoisyGridOptions &grid = {});

} // namespace cellbench::synth
