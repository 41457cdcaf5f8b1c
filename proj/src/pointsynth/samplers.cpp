#include "cellbench/pointsynth/samplers.hpp"

#include <algorithm>
#include <cmath>

#include "cellbench/core/errors.hpp"

namespace cellbench::synth {

namespace {

constexpr std::uint64_t kMaxConsecutiveRejections = 10'000'000;

double voxel_mean(const IntensityLandscape &density, int i, int j, int voxels, int quadrature) {
    const double h = 1.0 / voxels;
    double sum = 0.0;
    for (int b = 0; b < quadrature; ++b) {
        const double y = (j + (b + 0.5) / quadrature) * h;
        for (int a = 0; a < quadrature; ++a) {
            const double x = (i + (a + 0.5) / quadrature) * h;
            sum += density(x, y);
        }
    }
    return sum / (static_cast<double>(quadrature) * quadrature);
}

} // namespace

PointPattern sample_poisson(const IntensityLandscape &density, double mean_count, Rng &rng) {
    if (!(mean_count > 0.0))
        throw ConfigError("sample_poisson: mean_count must be positive");
    if (!density.resolved())
        throw ConfigError("sample_poisson: density has unresolved disc centers");
    const double sup = density.upper_bound();
    if (!(sup > 0.0))
        throw DataError(DataErrorCode::DegenerateInput, "sample_poisson: density is identically zero");

    const std::uint64_t n = rng.poisson(mean_count);
    PointPattern pattern;
    pattern.points.reserve(n);
    for (std::uint64_t k = 0; k < n; ++k) {
        std::uint64_t rejections = 0;
        for (;;) {
            const double x = rng.uniform();
            const double y = rng.uniform();
            const double u = rng.uniform() * sup;
            if (u < density(x, y)) {
                pattern.points.push_back({x, y});
                break;
            }
            if (++rejections >= kMaxConsecutiveRejections)
                throw DataError(DataErrorCode::DegenerateInput,
                                "sample_poisson: no acceptance after 1e7 proposals; density is "
                                "(numerically) identically zero");
        }
    }
    return pattern;
}

std::vector<int> voxel_subgrid_sizes(const std::optional<IntensityLandscape> &density, int voxels,
                                     const NoisyGridOptions &options) {
    if (voxels < 1)
        throw ConfigError("noisy grid: voxels must be >= 1");
    if (options.quadrature < 1 || !(options.reference_count > 0.0))
        throw ConfigError("noisy grid: quadrature and reference_count must be positive");
    const std::size_t n_vox = static_cast<std::size_t>(voxels) * voxels;
    const double s0 = std::sqrt(options.reference_count) / voxels;
    if (!density)
        return std::vector<int>(n_vox, static_cast<int>(std::lround(s0)));
    if (!density->resolved())
        throw ConfigError("noisy grid: density has unresolved disc centers");

    std::vector<double> means(n_vox);
    for (int j = 0; j < voxels; ++j)
        for (int i = 0; i < voxels; ++i)
            means[static_cast<std::size_t>(j) * voxels + i] =
                voxel_mean(*density, i, j, voxels, options.quadrature);

    double reference = 0.0;
    if (options.scaling == GridScaling::VoxelMax) {
        reference = *std::max_element(means.begin(), means.end());
    } else {
        for (double m : means)
            reference += m;
        reference /= static_cast<double>(n_vox);
    }
    if (!(reference > 0.0))
        throw DataError(DataErrorCode::DegenerateInput, "noisy grid: density is identically zero");

    std::vector<int> sizes(n_vox);
    for (std::size_t v = 0; v < n_vox; ++v)
        sizes[v] = static_cast<int>(std::lround(s0 * std::sqrt(means[v] / reference)));
    return sizes;
}

PointPattern sample_noisy_grid(const std::optional<IntensityLandscape> &density,
                               const std::optional<IntensityLandscape> &noise, int voxels,
                               double base_noise_std, Rng &rng, const NoisyGridOptions &options) {
    if (base_noise_std < 0.0)
        throw ConfigError("noisy grid: base_noise_std must be non-negative");
    if (noise && !noise->resolved())
        throw ConfigError("noisy grid: noise landscape has unresolved disc centers");
    const auto sizes = voxel_subgrid_sizes(density, voxels, options);

    std::size_t total = 0;
    for (int s : sizes)
        total += static_cast<std::size_t>(s) * s;

    PointPattern pattern;
    pattern.points.reserve(total);
    const double h = 1.0 / voxels;
    for (int j = 0; j < voxels; ++j) {
        for (int i = 0; i < voxels; ++i) {
            const int s = sizes[static_cast<std::size_t>(j) * voxels + i];
            for (int b = 0; b < s; ++b) {
                for (int a = 0; a < s; ++a) {
                    const double x0 = (i + (a + 0.5) / s) * h;
                    const double y0 = (j + (b + 0.5) / s) * h;
                    const double sigma = base_noise_std * (noise ? (*noise)(x0, y0) : 1.0);
                    double x = x0, y = y0;
                    if (sigma > 0.0) {
                        x += sigma * rng.normal();
                        y += sigma * rng.normal();
                    }
                    pattern.points.push_back({std::clamp(x, 0.0, 1.0), std::clamp(y, 0.0, 1.0)});
                }
            }
        }
    }
    return pattern;
}

} // namespace cellbench::synth
