#include "cellbench/featbase/image.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>

#include "cellbench/core/errors.hpp"
#include "cellbench/core/io.hpp"

namespace cellbench::feat {

static_assert(std::endian::native == std::endian::little, "raw image I/O assumes a little-endian host");

MultiChannelImage::MultiChannelImage(int c, int h, int w) : channels(c), height(h), width(w) {
    if (c <= 0 || h <= 0 || w <= 0)
        throw ConfigError("image dimensions must be positive");
    data.assign(static_cast<std::size_t>(c) * h * w, 0.0f);
}

std::string encode_raw(const MultiChannelImage &image) {
    std::string out(12 + image.data.size() * sizeof(float), '\0');
    const std::uint32_t dims[3] = {static_cast<std::uint32_t>(image.channels),
                                   static_cast<std::uint32_t>(image.height),
                                   static_cast<std::uint32_t>(image.width)};
    std::memcpy(out.data(), dims, sizeof dims);
    std::memcpy(out.data() + 12, image.data.data(), image.data.size() * sizeof(float));
    return out;
}

MultiChannelImage decode_raw(const std::string &bytes, const std::string &origin) {
    if (bytes.size() < 12)
        throw DataError(DataErrorCode::PayloadSize, origin + ": truncated raw image header");
    std::uint32_t dims[3];
    std::memcpy(dims, bytes.data(), sizeof dims);
    if (dims[0] == 0 || dims[1] == 0 || dims[2] == 0)
        throw DataError(DataErrorCode::BadFormat, origin + ": zero image dimension");
    const std::size_t n = static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
    if (bytes.size() != 12 + n * sizeof(float))
        throw DataError(DataErrorCode::PayloadSize, origin + ": payload size does not match C*H*W");
    MultiChannelImage img(static_cast<int>(dims[0]), static_cast<int>(dims[1]), static_cast<int>(dims[2]));
    std::memcpy(img.data.data(), bytes.data() + 12, n * sizeof(float));
    for (float v : img.data)
        if (!std::isfinite(v))
            throw DataError(DataErrorCode::NonFinite, origin + ": non-finite pixel value");
    return img;
}

MultiChannelImage read_raw(const std::filesystem::path &path) { return decode_raw(io::read_file(path), path.string()); }

void write_raw(const std::filesystem::path &path, const MultiChannelImage &image) {
    io::write_file_atomic(path, encode_raw(image));
}

std::vector<std::pair<std::string, std::filesystem::path>> read_manifest(const std::filesystem::path &path) {
    const auto csv = io::read_csv(path);
    const auto c_id = csv.column("item_id"), c_path = csv.column("path");
    const auto base = path.parent_path();
    std::vector<std::pair<std::string, std::filesystem::path>> out;
    for (const auto &row : csv.rows) {
        std::filesystem::path p = row[c_path];
        if (p.is_relative())
            p = base / p;
        out.emplace_back(row[c_id], p);
    }
    return out;
}

} // namespace cellbench::feat
