#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "cellbench/core/errors.hpp"
#include "cellbench/pointsynth/classes.hpp"
#include "cellbench/pointsynth/dataset.hpp"
#include "cellbench/pointsynth/landscape.hpp"
#include "cellbench/pointsynth/samplers.hpp"

using namespace cellbench;
using namespace cellbench::synth;

namespace {

std::vector<double> pairwise(const std::vector<Point2> &p) {
    std::vector<double> d;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j) d.push_back(std::sqrt(squared_distance(p[i], p[j])));
    return d;
}

} // namespace

TEST_SUITE("pointsynth") {

TEST_CASE("landscape values at named points") {
    CHECK(IntensityLandscape::slope(3, 3)(1.0, 0.5) == 1.0);
    CHECK(IntensityLandscape::slope(3, 3)(0.0, 0.5) == 4.0);
    CHECK(IntensityLandscape::step(0.5, 1)(0.3, 0.2) == 2.0);
    CHECK(IntensityLandscape::step(0.5, 1)(0.7, 0.2) == 1.0);
    auto deboss = IntensityLandscape::deboss(1, 0.1);
    deboss.disc_centers = {{0.5, 0.5}};
    CHECK(deboss(0.52, 0.49) == 0.0);
    CHECK(deboss(0.9, 0.9) == 1.0);
    CHECK_THROWS_AS(IntensityLandscape::deboss(1, 0.1)(0.5, 0.5), ConfigError);
}

TEST_CASE("landscape ranges over the unit square") {
    Rng rng(11);
    for (const auto &spec : class_registry()) {
        for (const auto *l : {spec.density ? &*spec.density : nullptr, spec.noise ? &*spec.noise : nullptr}) {
            if (!l) continue;
            Rng disc_rng(rng.next());
            const auto r = resolve_discs(*l, disc_rng);
            for (int i = 0; i <= 40; ++i)
                for (int j = 0; j <= 40; ++j) {
                    const double v = r(i / 40.0, j / 40.0);
                    CHECK(v >= 0.0);
                    CHECK(v <= r.upper_bound());
                    if (r.kind == LandscapeKind::DiscsEmboss) CHECK(v <= 1.0 + r.amplitude);
                    if (r.kind == LandscapeKind::Step) CHECK((v == 1.0 || v == 1.0 + r.amplitude));
                }
        }
    }
}

TEST_CASE("disc centers: ring for several discs, inside the square for one") {
    Rng rng(3);
    const auto ring = resolve_discs(IntensityLandscape::emboss(3, 0.1, 2), rng);
    REQUIRE(ring.disc_centers.size() == 3);
    for (const auto &c : ring.disc_centers)
        CHECK(std::hypot(c.x - 0.5, c.y - 0.5) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(ring.disc_centers[0].x == doctest::Approx(0.75));
    for (int s = 0; s < 50; ++s) {
        Rng r(static_cast<std::uint64_t>(s));
        const auto one = resolve_discs(IntensityLandscape::deboss(1, 0.2), r);
        CHECK(one.disc_centers[0].x >= 0.2);
        CHECK(one.disc_centers[0].x <= 0.8);
        CHECK(one.disc_centers[0].y >= 0.2);
        CHECK(one.disc_centers[0].y <= 0.8);
    }
}

TEST_CASE("poisson counts follow the requested mean") {
    const auto density = IntensityLandscape::constant();
    double total = 0.0;
    for (int s = 0; s < 200; ++s) {
        Rng rng(static_cast<std::uint64_t>(1000 + s));
        total += static_cast<double>(sample_poisson(density, 900.0, rng).size());
    }
    CHECK(std::abs(total / 200.0 - 900.0) <= 3.0 * std::sqrt(900.0 / 200.0));
}

TEST_CASE("poisson spatial histogram matches the integrated intensity") {
    // lambda = 4 - 3x on [0,1]^2, integrated per 4x4 bin in closed form.
    const auto density = IntensityLandscape::slope(3, 3);
    const int seeds = 500;
    std::array<double, 16> counts{};
    double total = 0.0;
    for (int s = 0; s < seeds; ++s) {
        Rng rng(static_cast<std::uint64_t>(77 + s));
        for (const auto &p : sample_poisson(density, 900.0, rng).points) {
            const int bx = std::min(3, static_cast<int>(p.x * 4)), by = std::min(3, static_cast<int>(p.y * 4));
            counts[static_cast<std::size_t>(by * 4 + bx)] += 1.0;
            total += 1.0;
        }
    }
    const double mass = 4.0 - 1.5; // integral of 4 - 3x over the square
    for (int by = 0; by < 4; ++by)
        for (int bx = 0; bx < 4; ++bx) {
            const double a = bx / 4.0, b = (bx + 1) / 4.0;
            const double bin_mass = (4.0 * (b - a) - 1.5 * (b * b - a * a)) * 0.25;
            const double expected = total * bin_mass / mass;
            CHECK(std::abs(counts[static_cast<std::size_t>(by * 4 + bx)] - expected) <= 4.0 * std::sqrt(expected));
        }
}

TEST_CASE("poisson sampling never lands inside a deboss disc") {
    for (int s = 0; s < 30; ++s) {
        Rng rng(static_cast<std::uint64_t>(s));
        const auto l = resolve_discs(IntensityLandscape::deboss(3, 0.15), rng);
        for (const auto &p : sample_poisson(l, 900.0, rng).points) {
            for (const auto &c : l.disc_centers) CHECK(squared_distance(p, c) >= 0.15 * 0.15);
        }
    }
}

TEST_CASE("poisson on an all-zero density is rejected") {
    auto l = IntensityLandscape::deboss(1, 0.5);
    l.radius = 2.0;
    l.disc_centers = {{0.5, 0.5}};
    Rng rng(1);
    CHECK_THROWS_AS(sample_poisson(l, 5.0, rng), DataError);
}

TEST_CASE("uniform noisy grid has exactly 900 points") {
    for (int s = 0; s < 20; ++s) {
        Rng rng(static_cast<std::uint64_t>(s));
        CHECK(sample_noisy_grid(std::nullopt, IntensityLandscape::slope(3, 3), 10, 0.01, rng).size() == 900);
    }
}

TEST_CASE("noise-free grid puts points on the sub-grid nodes") {
    const auto density = IntensityLandscape::step(0.5, 1);
    const int voxels = 10;
    Rng rng(5);
    const auto pattern = sample_noisy_grid(density, std::nullopt, voxels, 0.0, rng);
    const auto sizes = voxel_subgrid_sizes(density, voxels);

    std::vector<std::pair<double, double>> nodes;
    const double h = 1.0 / voxels;
    for (int j = 0; j < voxels; ++j)
        for (int i = 0; i < voxels; ++i) {
            const int s = sizes[static_cast<std::size_t>(j * voxels + i)];
            for (int b = 0; b < s; ++b)
                for (int a = 0; a < s; ++a) nodes.emplace_back((i + (a + 0.5) / s) * h, (j + (b + 0.5) / s) * h);
        }
    std::vector<std::pair<double, double>> got;
    for (const auto &p : pattern.points) got.emplace_back(p.x, p.y);
    std::sort(nodes.begin(), nodes.end());
    std::sort(got.begin(), got.end());
    REQUIRE(got.size() == nodes.size());
    for (std::size_t k = 0; k < got.size(); ++k) {
        CHECK(got[k].first == doctest::Approx(nodes[k].first).epsilon(1e-12));
        CHECK(got[k].second == doctest::Approx(nodes[k].second).epsilon(1e-12));
    }
}

TEST_CASE("noise-free uniform grid is symmetric about the center") {
    Rng rng(9);
    const auto pattern = sample_noisy_grid(std::nullopt, std::nullopt, 10, 0.0, rng);
    std::vector<double> xs;
    for (const auto &p : pattern.points) xs.push_back(p.x);
    std::sort(xs.begin(), xs.end());
    for (std::size_t i = 0; i < xs.size(); ++i) CHECK(std::abs(xs[i] + xs[xs.size() - 1 - i] - 1.0) <= 1e-12);
}

TEST_CASE("step density: left and right counts follow the rounding rule") {
    // Voxel means are 2 (left) and 1 (right), so the mean over voxels is 1.5 and
    // s0 = 3: left s = round(3 sqrt(2/1.5)) = 3, right s = round(3 sqrt(1/1.5)) = 2.
    const auto density = IntensityLandscape::step(0.5, 1);
    const auto sizes = voxel_subgrid_sizes(density, 10);
    for (int j = 0; j < 10; ++j)
        for (int i = 0; i < 10; ++i) CHECK(sizes[static_cast<std::size_t>(j * 10 + i)] == (i < 5 ? 3 : 2));

    const double s0 = 3.0;
    const int left_s = static_cast<int>(std::lround(s0 * std::sqrt(2.0 / 1.5)));
    const int right_s = static_cast<int>(std::lround(s0 * std::sqrt(1.0 / 1.5)));
    const double oracle_ratio = static_cast<double>(left_s * left_s) / (right_s * right_s);
    Rng rng(21);
    const auto pattern = sample_noisy_grid(density, std::nullopt, 10, 0.01, rng);
    double left = 0, right = 0;
    for (const auto &p : pattern.points) (p.x < 0.5 ? left : right) += 1.0;
    CHECK(std::abs(left / right - oracle_ratio) <= 0.15 * oracle_ratio);
}

TEST_CASE("points stay in the unit square") {
    for (int c = 0; c < kNumClasses; ++c) {
        const auto p = generate_sample(c, 1234 + static_cast<std::uint64_t>(c));
        for (const auto &q : p.points) {
            CHECK(q.x >= 0.0);
            CHECK(q.x <= 1.0);
            CHECK(q.y >= 0.0);
            CHECK(q.y <= 1.0);
        }
    }
}

TEST_CASE("registry: 24 classes, grid noise classes hold 900 points") {
    REQUIRE(class_registry().size() == 24);
    for (int c = 0; c < kNumClasses; ++c) CHECK(class_spec(c).class_id == c);
    CHECK_THROWS_AS(class_spec(24), ConfigError);
    CHECK_THROWS_AS(class_spec(-1), ConfigError);
    for (int c : {0, 1, 13})
        for (std::uint64_t s = 0; s < 10; ++s) CHECK(generate_sample(c, s).size() == 900);
    CHECK(class_spec(10).sampling == Sampling::UniformPoisson);
    CHECK(class_spec(10).poisson_mean == 900.0);
}

TEST_CASE("grid density classes land near their nominal counts") {
    for (int c = 2; c <= 7; ++c) {
        const auto n = static_cast<double>(generate_sample(c, 42).size());
        const double nominal = class_spec(c).table_count;
        CHECK(std::abs(n - nominal) <= 0.2 * nominal);
    }
}

TEST_CASE("single deboss disc thins the grid class around its center") {
    // The disc is narrower than a voxel, so it thins rather than empties.
    const auto &spec = class_spec(6);
    double inside = 0.0, total = 0.0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        Rng probe(s);
        const auto l = resolve_discs(*spec.density, probe);
        Rng rng(s);
        const auto pattern = generate_class(spec, rng);
        const auto &c = l.disc_centers.at(0);
        for (const auto &p : pattern.points) inside += squared_distance(p, c) < 0.01 ? 1.0 : 0.0;
        total += static_cast<double>(pattern.size());
    }
    CHECK(inside < 0.5 * total * M_PI * 0.01);
}

TEST_CASE("sampling is a pure function of the seed") {
    for (int c : {0, 3, 9, 16}) {
        CHECK(generate_sample(c, 99) == generate_sample(c, 99));
        CHECK(generate_sample(c, 99) != generate_sample(c, 100));
    }
}

TEST_CASE("splits: sizes, order and determinism") {
    const SplitSizes defaults;
    CHECK((defaults.train + defaults.val + defaults.test) * kNumClasses == 24u * 2100u);

    const SplitSizes small{2, 1, 2};
    std::size_t visited = 0;
    Split last_split = Split::Train;
    int last_class = 0;
    for_each_sample(small, 5, [&](Split split, int class_id, std::size_t, PointPattern &&p) {
        CHECK(p.class_id == class_id);
        CHECK(static_cast<int>(split) >= static_cast<int>(last_split));
        if (split == last_split) CHECK(class_id >= last_class);
        last_split = split;
        last_class = class_id;
        ++visited;
    });
    CHECK(visited == 24u * 5u);

    const auto a = make_splits(small, 5), b = make_splits(small, 5), c = make_splits(small, 6);
    CHECK(a.train == b.train);
    CHECK(a.test == b.test);
    CHECK(a.train.size() == 48);
    CHECK(a.train[0].points[0] != c.train[0].points[0]);
    CHECK(sample_seed(5, 3, Split::Val, 0) != sample_seed(5, 3, Split::Test, 0));
}

TEST_CASE("dihedral augmentation") {
    const auto p = generate_sample(18, 7);
    CHECK(apply_dihedral(p, 0) == p);
    const auto twice = apply_dihedral(apply_dihedral(p, 1), 1);
    const auto half_turn = apply_dihedral(p, 2);
    REQUIRE(twice.size() == half_turn.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        CHECK(std::abs(twice.points[i].x - half_turn.points[i].x) <= 1e-12);
        CHECK(std::abs(twice.points[i].y - half_turn.points[i].y) <= 1e-12);
    }
    const auto base = pairwise(p.points);
    for (int g = 0; g < 8; ++g) {
        const auto d = pairwise(apply_dihedral(p, g).points);
        for (std::size_t k = 0; k < d.size(); k += 997) CHECK(std::abs(d[k] - base[k]) <= 1e-12);
    }
    // Mirror element maps x to 1 - x.
    CHECK(apply_dihedral(p, 4).points[0].x == doctest::Approx(1.0 - p.points[0].x));
}

TEST_CASE("free rotation preserves count and pairwise distances") {
    const auto p = generate_sample(4, 3);
    Rng rng(8);
    const auto r = augment_points(p, AugmentMode::FreeRotation, rng);
    REQUIRE(r.size() == p.size());
    auto a = pairwise(p.points), b = pairwise(r.points);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::abs(a[k] - b[k]) <= 1e-9);
    const auto q = rotate_about_centroid(p, 2.0 * std::numbers::pi);
    for (std::size_t k = 0; k < p.size(); ++k) CHECK(std::abs(q.points[k].x - p.points[k].x) <= 1e-12);
}

TEST_CASE("sample text format round-trips") {
    const auto p = generate_sample(12, 555);
    const auto text = format_sample(p);
    CHECK(text.rfind("12,555," + std::to_string(p.size()) + "\n", 0) == 0);
    const auto q = parse_sample(text);
    CHECK(q.class_id == 12);
    CHECK(q.seed == 555);
    REQUIRE(q.size() == p.size());
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(std::abs(q.points[i].x - p.points[i].x) <= 1e-8);
    CHECK(format_sample(q) == text);
    CHECK_THROWS_AS(parse_sample("1,2,3\n0.5,0.5\n"), DataError);
}

} // TEST_SUITE
