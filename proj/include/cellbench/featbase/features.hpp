#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cellbench/featbase/image.hpp"

namespace cellbench::feat {

struct FeatureVector {
    std::vector<double> values;
    std::string provenance; // baseline name and its configuration
};

enum class PixelMode { MeanOnly, MeanStdSkew };

/// Channel-wise statistics. MeanStdSkew orders the output as all means, then
/// all (population) standard deviations, then all skewnesses; skewness is 0
/// for a constant channel.
FeatureVector pixel_features(const MultiChannelImage &image, PixelMode mode);

enum class Activation { Identity, Relu };

// F x C x k x k weights, filter-major.
struct FilterBank {
    int filters = 0;
    int channels = 0;
    int kernel = 0;
    std::vector<double> weights;

    double at(int f, int c, int dy, int dx) const {
        return weights[((static_cast<std::size_t>(f) * channels + c) * kernel + dy) * kernel + dx];
    }
};

// Weights i.i.d. N(0, 1 / (k^2 C)) from the seeded stream; k must be odd.
FilterBank random_filters(int filters, int channels, int kernel, std::uint64_t seed);

// Valid-mode cross-correlation (zero bias), activation, global average pool.
FeatureVector singleconv_apply(const MultiChannelImage &image, const FilterBank &bank,
                               Activation activation = Activation::Identity);

FeatureVector singleconv_features(const MultiChannelImage &image, int filters, int kernel, std::uint64_t seed,
                                  Activation activation = Activation::Identity);

inline constexpr std::size_t kCellCountBase = 16;
inline constexpr std::size_t kCellCountDim = 256;
inline constexpr double kCellCountNoise = 0.01;

// The 16 deterministic functions of the cell count.
std::array<double, kCellCountBase> cellcount_base(std::uint64_t count);

// Per-feature z-scoring of the base features, fit on a reference set of counts.
struct CellCountStandardizer {
    std::array<double, kCellCountBase> mean{};
    std::array<double, kCellCountBase> scale{};

    static CellCountStandardizer fit(const std::vector<std::uint64_t> &counts);
    std::array<double, kCellCountBase> apply(const std::array<double, kCellCountBase> &base) const;
};

/// Base features (optionally standardized), tiled cyclically to 256 entries,
/// plus N(0, 0.01^2) noise from the seeded stream.
FeatureVector cellcount_features(std::uint64_t count, std::uint64_t seed,
                                 const CellCountStandardizer *standardizer = nullptr);

} // namespace cellbench::feat
