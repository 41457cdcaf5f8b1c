#include "cellbench/pointsynth/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "cellbench/core/errors.hpp"
#include "cellbench/core/io.hpp"
#include "cellbench/pointsynth/classes.hpp"

namespace cellbench::synth {

std::string to_string(Split split) {
    switch (split) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
    }
    return "unknown";
}

std::uint64_t sample_seed(std::uint64_t master_seed, int class_id, Split split, std::size_t index) {
    return derive_seed(master_seed, {static_cast<std::uint64_t>(class_id),
                                     static_cast<std::uint64_t>(split), index});
}

void for_each_sample(const SplitSizes &sizes, std::uint64_t master_seed, const SampleVisitor &visit) {
    for (Split split : kAllSplits) {
        for (int c = 0; c < kNumClasses; ++c) {
            for (std::size_t i = 0; i < sizes[split]; ++i) {
                visit(split, c, i, generate_sample(c, sample_seed(master_seed, c, split, i)));
            }
        }
    }
}

SynthDataset make_splits(const SplitSizes &sizes, std::uint64_t master_seed) {
    if (sizes.train == 0 || sizes.val == 0 || sizes.test == 0)
        throw ConfigError("make_splits: split sizes must be positive");
    SynthDataset ds;
    for (Split s : kAllSplits)
        ds[s].reserve(sizes[s] * kNumClasses);
    for_each_sample(sizes, master_seed, [&](Split split, int, std::size_t, PointPattern &&p) {
        ds[split].push_back(std::move(p));
    });
    return ds;
}

PointPattern apply_dihedral(const PointPattern &pattern, int element) {
    if (element < 0 || element >= 8)
        throw ConfigError("apply_dihedral: element must be in [0, 8)");
    PointPattern out = pattern;
    const int turns = element % 4;
    const bool mirror = element >= 4;
    for (auto &p : out.points) {
        double x = p.x, y = p.y;
        for (int t = 0; t < turns; ++t) {
            // 90 degrees counter-clockwise about (0.5, 0.5).
            const double nx = 1.0 - y;
            const double ny = x;
            x = nx;
            y = ny;
        }
        if (mirror)
            x = 1.0 - x;
        p = {x, y};
    }
    return out;
}

PointPattern rotate_about_centroid(const PointPattern &pattern, double theta) {
    PointPattern out = pattern;
    const Point2 c = centroid(pattern.points);
    const double cs = std::cos(theta);
    const double sn = std::sin(theta);
    for (auto &p : out.points) {
        const double dx = p.x - c.x;
        const double dy = p.y - c.y;
        p = {c.x + cs * dx - sn * dy, c.y + sn * dx + cs * dy};
    }
    return out;
}

PointPattern augment_points(const PointPattern &pattern, AugmentMode mode, Rng &rng) {
    if (pattern.empty())
        throw ConfigError("augment_points: empty pattern");
    if (mode == AugmentMode::Rot90Flip)
        return apply_dihedral(pattern, static_cast<int>(rng.below(8)));
    return rotate_about_centroid(pattern, rng.uniform(0.0, 2.0 * std::numbers::pi));
}

std::string format_sample(const PointPattern &pattern) {
    std::string out;
    out.reserve(pattern.size() * 24 + 32);
    out += std::to_string(pattern.class_id.value_or(-1));
    out += ',';
    out += std::to_string(pattern.seed);
    out += ',';
    out += std::to_string(pattern.size());
    out += '\n';
    char buf[64];
    for (const auto &p : pattern.points) {
        std::snprintf(buf, sizeof buf, "%.9g,%.9g\n", p.x, p.y);
        out += buf;
    }
    return out;
}

PointPattern parse_sample(const std::string &text, const std::string &origin) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw DataError(DataErrorCode::BadFormat, origin + ": empty sample file");
    const auto head = io::parse_csv(line + "\n", origin).header;
    if (head.size() != 3)
        throw DataError(DataErrorCode::BadFormat, origin + ": first line must be class_id,seed,n_points");
    PointPattern p;
    const long long cls = io::parse_int(head[0], origin + " class_id");
    if (cls >= 0)
        p.class_id = static_cast<int>(cls);
    p.seed = std::stoull(head[1]);
    const auto n = static_cast<std::size_t>(io::parse_int(head[2], origin + " n_points"));
    p.points.reserve(n);
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw DataError(DataErrorCode::BadFormat, origin + ": point row without comma");
        p.points.push_back({io::parse_double(line.substr(0, comma), origin),
                            io::parse_double(line.substr(comma + 1), origin)});
    }
    if (p.points.size() != n)
        throw DataError(DataErrorCode::CountMismatch,
                        origin + ": header announces " + std::to_string(n) + " points, found " +
                            std::to_string(p.points.size()));
    return p;
}

PointPattern read_sample(const std::filesystem::path &path) {
    return parse_sample(io::read_file(path), path.string());
}

namespace {

nlohmann::ordered_json landscape_json(const IntensityLandscape &l) {
    nlohmann::ordered_json j;
    j["kind"] = to_string(l.kind);
    switch (l.kind) {
    case LandscapeKind::Constant:
        break;
    case LandscapeKind::Slope:
        j["k"] = l.slope_rate;
        j["b"] = l.slope_offset;
        break;
    case LandscapeKind::Step:
        j["a_x"] = l.step_threshold;
        j["delta"] = l.amplitude;
        break;
    case LandscapeKind::DiscsEmboss:
        j["n_discs"] = l.n_discs;
        j["radius"] = l.radius;
        j["delta"] = l.amplitude;
        break;
    case LandscapeKind::DiscsDeboss:
        j["n_discs"] = l.n_discs;
        j["radius"] = l.radius;
        break;
    }
    return j;
}

} // namespace

std::string registry_json() {
    nlohmann::ordered_json classes = nlohmann::ordered_json::array();
    for (const auto &c : class_registry()) {
        nlohmann::ordered_json j;
        j["class_id"] = c.class_id;
        j["sampling"] = to_string(c.sampling);
        if (c.sampling == Sampling::NoisyGrid)
            j["voxels"] = c.voxels;
        j["density"] = c.density ? landscape_json(*c.density) : nlohmann::ordered_json(nullptr);
        j["noise"] = c.noise ? landscape_json(*c.noise) : nlohmann::ordered_json(nullptr);
        if (c.sampling == Sampling::NoisyGrid) {
            j["base_noise_std"] = c.base_noise_std;
            j["target_count"] = {{"kind", "grid"}, {"table_count", c.table_count}};
        } else {
            j["target_count"] = {{"kind", "poisson_mean"}, {"mean", c.poisson_mean}};
        }
        j["description"] = c.description;
        classes.push_back(std::move(j));
    }
    nlohmann::ordered_json root;
    root["version"] = 1;
    root["n_classes"] = kNumClasses;
    root["classes"] = std::move(classes);
    return root.dump(2) + "\n";
}

void write_dataset(const std::filesystem::path &dir, const SplitSizes &sizes, std::uint64_t master_seed) {
    std::filesystem::create_directories(dir);
    for (Split s : kAllSplits)
        std::filesystem::create_directories(dir / to_string(s));
    io::write_file_atomic(dir / "registry.json", registry_json());
    char name[64];
    for_each_sample(sizes, master_seed, [&](Split split, int c, std::size_t i, PointPattern &&p) {
        std::snprintf(name, sizeof name, "c%02d_%05zu.csv", c, i);
        io::write_file_atomic(dir / to_string(split) / name, format_sample(p));
    });
}

} // namespace cellbench::synth
