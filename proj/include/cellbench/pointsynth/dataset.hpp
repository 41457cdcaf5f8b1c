#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "cellbench/core/geometry.hpp"
#include "cellbench/core/rng.hpp"

namespace cellbench::synth {

enum class Split { Train = 0, Val = 1, Test = 2 };

std::string to_string(Split split);

struct SplitSizes {
    std::size_t train = 1000;
    std::size_t val = 100;
    std::size_t test = 1000;

    std::size_t operator[](Split s) const {
        return s == Split::Train ? train : s == Split::Val ? val : test;
    }
};

inline constexpr std::array<Split, 3> kAllSplits{Split::Train, Split::Val, Split::Test};

struct SynthDataset {
    std::vector<PointPattern> train;
    std::vector<PointPattern> val;
    std::vector<PointPattern> test;

    std::vector<PointPattern> &operator[](Split s) {
        return s == Split::Train ? train : s == Split::Val ? val : test;
    }
    const std::vector<PointPattern> &operator[](Split s) const {
        return s == Split::Train ? train : s == Split::Val ? val : test;
    }
};

// Per-sample seed; a pure function of its coordinates in the dataset.
std::uint64_t sample_seed(std::uint64_t master_seed, int class_id, Split split, std::size_t index);

using SampleVisitor =
    std::function<void(Split split, int class_id, std::size_t index, PointPattern &&pattern)>;

// Streams every sample in (split, class, index) order without holding the
// dataset in memory.
void for_each_sample(const SplitSizes &sizes, std::uint64_t master_seed, const SampleVisitor &visit);

// In-memory dataset; each split lists classes in order, samples in index order.
SynthDataset make_splits(const SplitSizes &sizes, std::uint64_t master_seed);

enum class AugmentMode { Rot90Flip, FreeRotation };

// Element g in [0, 8) of the dihedral group of the unit square about its
// center: rotation by (g % 4) * 90 degrees counter-clockwise, followed by a
// mirror x -> 1 - x when g >= 4.
PointPattern apply_dihedral(const PointPattern &pattern, int element);

// Rotation by theta (radians) about the pattern centroid.
PointPattern rotate_about_centroid(const PointPattern &pattern, double theta);

PointPattern augment_points(const PointPattern &pattern, AugmentMode mode, Rng &rng);

/// Writes `<dir>/<split>/c<class>_<index>.csv` for every sample plus
/// `<dir>/registry.json`. A sample file's first line is `class_id,seed,n_points`
/// (values), followed by one `x,y` row per point with 9 significant digits.
void write_dataset(const std::filesystem::path &dir, const SplitSizes &sizes, std::uint64_t master_seed);

std::string format_sample(const PointPattern &pattern);
PointPattern parse_sample(const std::string &text, const std::string &origin = "<memory>");
PointPattern read_sample(const std::filesystem::path &path);

std::string registry_json();

} // namespace cellbench::synth
