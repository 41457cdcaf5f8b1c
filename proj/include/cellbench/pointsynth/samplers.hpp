#pragma once

#include <optional>
#include <vector>

#include "cellbench/core/geometry.hpp"
#include "cellbench/core/rng.hpp"
#include "cellbench/pointsynth/landscape.hpp"

namespace cellbench::synth {

/// Inhomogeneous Poisson process on the unit square: N ~ Poisson(mean_count),
/// then N positions drawn by rejection against density.upper_bound().
/// Throws DataError(DegenerateInput) when the density appears identically zero.
PointPattern sample_poisson(const IntensityLandscape &density, double mean_count, Rng &rng);

// How voxel densities are normalized before choosing the sub-grid size.
enum class GridScaling {
    VoxelMean, // s_v = round(s0 * sqrt(mean_v / mean over voxels of mean_v))
    VoxelMax,  // s_v = round(s0 * sqrt(mean_v / max over voxels of mean_v))
};

struct NoisyGridOptions {
    // Point total of a uniform density; s0 = sqrt(reference_count) / voxels.
    double reference_count = 900.0;
    GridScaling scaling = GridScaling::VoxelMean;
    // Midpoint-rule samples per voxel side for the voxel-mean density.
    int quadrature = 32;
};

/// Sub-grid side length per voxel, row-major with y outer (index j * V + i).
std::vector<int> voxel_subgrid_sizes(const std::optional<IntensityLandscape> &density, int voxels,
                                     const NoisyGridOptions &options = {});

/// Density-adaptive square grid: V x V voxels, each holding a regular
/// s_v x s_v sub-grid at cell centers, every node displaced by isotropic
/// Gaussian noise of std base_noise_std * noise(node) and clamped to [0,1]^2.
/// Missing density means uniform, missing noise means sigma == 1.
PointPattern sample_noisy_grid(const std::optional<IntensityLandscape> &density,
                               const std::optional<IntensityLandscape> &noise, int voxels,
                               double base_noise_std, Rng &rng,
                               const NoisyGridOptions &options = {});

} // namespace cellbench::synth
