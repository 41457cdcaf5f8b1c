#include "cellbench/pointsynth/classes.hpp"

#include <cmath>

#include "cellbench/core/errors.hpp"

namespace cellbench::synth {

std::string to_string(Sampling sampling) {
    return sampling == Sampling::NoisyGrid ? "noisy_grid" : "uniform_poisson";
}

namespace {

using L = IntensityLandscape;

constexpr double kGridNoise = 0.01;
constexpr double kPoissonMean = 900.0;

ClassSpec grid_noise(int id, L noise, int count, std::string text) {
    ClassSpec c;
    c.class_id = id;
    c.sampling = Sampling::NoisyGrid;
    c.voxels = 10;
    c.noise = std::move(noise);
    c.base_noise_std = kGridNoise;
    c.table_count = count;
    c.description = std::move(text);
    return c;
}

ClassSpec grid_density(int id, int voxels, L density, int count, std::string text) {
    ClassSpec c;
    c.class_id = id;
    c.sampling = Sampling::NoisyGrid;
    c.voxels = voxels;
    c.density = std::move(density);
    c.base_noise_std = kGridNoise;
    c.table_count = count;
    c.description = std::move(text);
    return c;
}

ClassSpec uniform(int id, L density, std::string text) {
    ClassSpec c;
    c.class_id = id;
    c.sampling = Sampling::UniformPoisson;
    c.density = std::move(density);
    c.poisson_mean = kPoissonMean;
    c.description = std::move(text);
    return c;
}

std::vector<ClassSpec> build_registry() {
    const double r3 = std::sqrt(0.2 * 0.2 / 3.0);
    const double r5 = std::sqrt(0.2 * 0.2 / 5.0);
    std::vector<ClassSpec> r;
    r.push_back(grid_noise(0, L::constant(), 900, "grid 10, sigma ~ constant"));
    r.push_back(grid_noise(1, L::slope(3, 3), 900, "grid 10, sigma ~ slope(3,3)"));
    r.push_back(grid_density(2, 10, L::slope(3, 3), 890, "grid 10, lambda ~ slope(3,3)"));
    r.push_back(grid_density(3, 4, L::step(0.5, 1), 848, "grid 4, lambda ~ step(0.5,1)"));
    r.push_back(grid_density(4, 10, L::emboss(1, 0.1, 2), 964, "grid 10, lambda ~ emboss(1,0.1,2)"));
    r.push_back(grid_density(5, 10, L::emboss(3, 0.1, 2), 1028, "grid 10, lambda ~ emboss(3,0.1,2)"));
    r.push_back(grid_density(6, 10, L::deboss(1, 0.1), 864, "grid 10, lambda ~ deboss(1,0.1)"));
    r.push_back(grid_density(7, 10, L::deboss(3, 0.1), 819, "grid 10, lambda ~ deboss(3,0.1)"));
    r.push_back(uniform(8, L::emboss(3, 0.1, 2), "poisson, lambda ~ emboss(3,0.1,2)"));
    r.push_back(uniform(9, L::deboss(1, 0.1), "poisson, lambda ~ deboss(1,0.1)"));
    r.push_back(uniform(10, L::constant(), "poisson, lambda ~ constant"));
    r.push_back(uniform(11, L::emboss(1, 0.1, 2), "poisson, lambda ~ emboss(1,0.1,2)"));
    r.push_back(uniform(12, L::deboss(1, 0.1), "poisson, lambda ~ deboss(1,0.1)"));
    r.push_back(grid_noise(13, L::step(0.5, 1), 900, "grid 10, sigma ~ step(0.5,1)"));
    r.push_back(uniform(14, L::emboss(3, r3, 2), "poisson, lambda ~ emboss(3,sqrt(0.04/3),2)"));
    r.push_back(uniform(15, L::deboss(3, r3), "poisson, lambda ~ deboss(3,sqrt(0.04/3))"));
    r.push_back(uniform(16, L::emboss(5, r5, 2), "poisson, lambda ~ emboss(5,sqrt(0.04/5),2)"));
    r.push_back(uniform(17, L::deboss(5, r5), "poisson, lambda ~ deboss(5,sqrt(0.04/5))"));
    r.push_back(uniform(18, L::slope(3, 3), "poisson, lambda ~ slope(3,3)"));
    r.push_back(uniform(19, L::slope(2, 2), "poisson, lambda ~ slope(2,2)"));
    r.push_back(uniform(20, L::slope(1, 1), "poisson, lambda ~ slope(1,1)"));
    r.push_back(uniform(21, L::emboss(1, 0.2, 2), "poisson, lambda ~ emboss(1,0.2,2)"));
    r.push_back(uniform(22, L::deboss(1, 0.2), "poisson, lambda ~ deboss(1,0.2)"));
    r.push_back(uniform(23, L::step(0.5, 1), "poisson, lambda ~ step(0.5,1)"));
    return r;
}

} // namespace

const std::vector<ClassSpec> &class_registry() {
    static const std::vector<ClassSpec> registry = build_registry();
    return registry;
}

const ClassSpec &class_spec(int class_id) {
    if (class_id < 0 || class_id >= kNumClasses)
        throw ConfigError("unknown synthetic class id " + std::to_string(class_id));
    return class_registry()[static_cast<std::size_t>(class_id)];
}

PointPattern generate_class(const ClassSpec &spec, Rng &rng, const NoisyGridOptions &grid) {
    std::optional<IntensityLandscape> density;
    std::optional<IntensityLandscape> noise;
    if (spec.density)
        density = resolve_discs(*spec.density, rng);
    if (spec.noise)
        noise = resolve_discs(*spec.noise, rng);

    PointPattern pattern;
    if (spec.sampling == Sampling::NoisyGrid) {
        pattern = sample_noisy_grid(density, noise, spec.voxels, spec.base_noise_std, rng, grid);
    } else {
        pattern = sample_poisson(density.value_or(IntensityLandscape::constant()), spec.poisson_mean, rng);
    }
    pattern.class_id = spec.class_id;
    return pattern;
}

PointPattern generate_class(int class_id, Rng &rng, const NoisyGridOptions &grid) {
    return generate_class(class_spec(class_id), rng, grid);
}

PointPattern generate_sample(int class_id, std::uint64_t seed, const NoisyGridOptions &grid) {
    Rng rng(seed);
    PointPattern p = generate_class(class_id, rng, grid);
    p.seed = seed;
    return p;
}

} // namespace cellbench::synth
