#include "cellbench/featbase/features.hpp"

#include <algorithm>
#include <cmath>

#include "cellbench/core/errors.hpp"
#include "cellbench/core/rng.hpp"

namespace cellbench::feat {

namespace {

struct Moments {
    double mean = 0.0;
    double std = 0.0;
    double skew = 0.0;
};

Moments channel_moments(const float *plane, std::size_t n) {
    Moments m;
    const auto [lo, hi] = std::minmax_element(plane, plane + n);
    if (*lo == *hi) {
        m.mean = *lo;
        return m;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        sum += plane[i];
    m.mean = sum / static_cast<double>(n);
    double m2 = 0.0, m3 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = plane[i] - m.mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    m.std = std::sqrt(m2);
    if (m.std > 1e-12 * std::max(1.0, std::fabs(m.mean)))
        m.skew = m3 / (m.std * m.std * m.std);
    return m;
}

void check_image(const MultiChannelImage &image) {
    if (image.channels <= 0 || image.height <= 0 || image.width <= 0 ||
        image.data.size() != static_cast<std::size_t>(image.channels) * image.plane_size())
        throw DataError(DataErrorCode::DegenerateInput, "image has empty or inconsistent planes");
}

} // namespace

FeatureVector pixel_features(const MultiChannelImage &image, PixelMode mode) {
    check_image(image);
    const int c_count = image.channels;
    const std::size_t n = image.plane_size();
    FeatureVector out;
    out.provenance = mode == PixelMode::MeanOnly ? "pixel_mean" : "pixel_stats";
    out.values.assign(mode == PixelMode::MeanOnly ? c_count : 3 * c_count, 0.0);
    for (int c = 0; c < c_count; ++c) {
        const Moments m = channel_moments(image.data.data() + static_cast<std::size_t>(c) * n, n);
        out.values[c] = m.mean;
        if (mode == PixelMode::MeanStdSkew) {
            out.values[c_count + c] = m.std;
            out.values[2 * c_count + c] = m.skew;
        }
    }
    return out;
}

FilterBank random_filters(int filters, int channels, int kernel, std::uint64_t seed) {
    if (filters < 1 || channels < 1)
        throw ConfigError("singleconv: filters and channels must be positive");
    if (kernel < 1 || kernel % 2 == 0)
        throw ConfigError("singleconv: kernel size must be odd");
    FilterBank bank{filters, channels, kernel, {}};
    const double std = 1.0 / std::sqrt(static_cast<double>(kernel) * kernel * channels);
    Rng rng(seed);
    bank.weights.resize(static_cast<std::size_t>(filters) * channels * kernel * kernel);
    for (auto &w : bank.weights)
        w = std * rng.normal();
    return bank;
}

FeatureVector singleconv_apply(const MultiChannelImage &image, const FilterBank &bank, Activation activation) {
    check_image(image);
    const int k = bank.kernel;
    if (bank.channels != image.channels)
        throw DataError(DataErrorCode::DimMismatch, "singleconv: filter channels differ from image channels");
    if (k > image.height || k > image.width)
        throw DataError(DataErrorCode::DegenerateInput, "singleconv: image smaller than kernel");

    const int oh = image.height - k + 1;
    const int ow = image.width - k + 1;
    const double positions = static_cast<double>(oh) * ow;
    FeatureVector out;
    out.provenance = "singleconv:f=" + std::to_string(bank.filters) + ",k=" + std::to_string(k) +
                     (activation == Activation::Relu ? ",relu" : "");
    out.values.assign(bank.filters, 0.0);

    if (activation == Activation::Identity) {
        // Pooling commutes with the linear filter: each tap sees the mean of
        // one shifted oh x ow window, read from a summed-area table.
        std::vector<double> window_mean(static_cast<std::size_t>(image.channels) * k * k);
        std::vector<double> sat(static_cast<std::size_t>(image.height + 1) * (image.width + 1));
        const auto S = [&](int y, int x) -> double & { return sat[static_cast<std::size_t>(y) * (image.width + 1) + x]; };
        for (int c = 0; c < image.channels; ++c) {
            for (int y = 0; y <= image.height; ++y)
                for (int x = 0; x <= image.width; ++x)
                    S(y, x) = (y == 0 || x == 0) ? 0.0
                                                 : image.at(c, y - 1, x - 1) + S(y - 1, x) + S(y, x - 1) - S(y - 1, x - 1);
            for (int dy = 0; dy < k; ++dy)
                for (int dx = 0; dx < k; ++dx) {
                    const double sum = S(dy + oh, dx + ow) - S(dy, dx + ow) - S(dy + oh, dx) + S(dy, dx);
                    window_mean[(static_cast<std::size_t>(c) * k + dy) * k + dx] = sum / positions;
                }
        }
        for (int f = 0; f < bank.filters; ++f) {
            double acc = 0.0;
            const double *w = bank.weights.data() + static_cast<std::size_t>(f) * window_mean.size();
            for (std::size_t t = 0; t < window_mean.size(); ++t)
                acc += w[t] * window_mean[t];
            out.values[f] = acc;
        }
        return out;
    }

    std::vector<double> response(static_cast<std::size_t>(oh) * ow);
    for (int f = 0; f < bank.filters; ++f) {
        std::fill(response.begin(), response.end(), 0.0);
        for (int c = 0; c < image.channels; ++c)
            for (int dy = 0; dy < k; ++dy)
                for (int dx = 0; dx < k; ++dx) {
                    const double w = bank.at(f, c, dy, dx);
                    if (w == 0.0)
                        continue;
                    for (int y = 0; y < oh; ++y) {
                        const float *row = &image.data[(static_cast<std::size_t>(c) * image.height + y + dy) * image.width + dx];
                        double *dst = &response[static_cast<std::size_t>(y) * ow];
                        for (int x = 0; x < ow; ++x)
                            dst[x] += w * row[x];
                    }
                }
        double acc = 0.0;
        for (double r : response)
            acc += std::max(r, 0.0);
        out.values[f] = acc / positions;
    }
    return out;
}

FeatureVector singleconv_features(const MultiChannelImage &image, int filters, int kernel, std::uint64_t seed,
                                  Activation activation) {
    FeatureVector out = singleconv_apply(image, random_filters(filters, image.channels, kernel, seed), activation);
    out.provenance += ",seed=" + std::to_string(seed);
    return out;
}

std::array<double, kCellCountBase> cellcount_base(std::uint64_t count) {
    const double c = static_cast<double>(count);
    const double l = std::log1p(c);
    return {c,
            c * c,
            c * c * c,
            std::sqrt(c),
            l,
            1.0 / (1.0 + c),
            std::sin(c / 10.0),
            std::cos(c / 10.0),
            std::sin(c / 100.0),
            std::cos(c / 100.0),
            c * l,
            l * l,
            std::sqrt(std::sqrt(c)),
            std::tanh(c / 100.0),
            static_cast<double>(count % 10),
            std::min(c, 500.0)};
}

CellCountStandardizer CellCountStandardizer::fit(const std::vector<std::uint64_t> &counts) {
    if (counts.empty())
        throw DataError(DataErrorCode::DegenerateInput, "cell-count standardizer: no reference counts");
    CellCountStandardizer s;
    std::array<double, kCellCountBase> sum{}, sumsq{};
    for (auto c : counts) {
        const auto b = cellcount_base(c);
        for (std::size_t i = 0; i < kCellCountBase; ++i)
            sum[i] += b[i];
    }
    const double n = static_cast<double>(counts.size());
    for (std::size_t i = 0; i < kCellCountBase; ++i)
        s.mean[i] = sum[i] / n;
    for (auto c : counts) {
        const auto b = cellcount_base(c);
        for (std::size_t i = 0; i < kCellCountBase; ++i)
            sumsq[i] += (b[i] - s.mean[i]) * (b[i] - s.mean[i]);
    }
    for (std::size_t i = 0; i < kCellCountBase; ++i) {
        const double sd = std::sqrt(sumsq[i] / n);
        s.scale[i] = sd > 0.0 ? sd : 1.0;
    }
    return s;
}

std::array<double, kCellCountBase> CellCountStandardizer::apply(const std::array<double, kCellCountBase> &base) const {
    std::array<double, kCellCountBase> out{};
    for (std::size_t i = 0; i < kCellCountBase; ++i)
        out[i] = (base[i] - mean[i]) / scale[i];
    return out;
}

FeatureVector cellcount_features(std::uint64_t count, std::uint64_t seed, const CellCountStandardizer *standardizer) {
    auto base = cellcount_base(count);
    if (standardizer)
        base = standardizer->apply(base);
    FeatureVector out;
    out.provenance = standardizer ? "cellcount:standardized" : "cellcount:raw";
    out.values.resize(kCellCountDim);
    Rng rng(seed);
    for (std::size_t i = 0; i < kCellCountDim; ++i)
        out.values[i] = base[i % kCellCountBase] + kCellCountNoise * rng.normal();
    return out;
}

} // namespace cellbench::feat
