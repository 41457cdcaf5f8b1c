#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace cellbench::feat {

// Planar C x H x W image of non-negative intensities.
struct MultiChannelImage {
    int channels = 0;
    int height = 0;
    int width = 0;
    std::vector<float> data; // channel-major, then row-major
    std::vector<std::string> channel_names;

    MultiChannelImage() = default;
    MultiChannelImage(int c, int h, int w);

    float at(int c, int y, int x) const {
        return data[(static_cast<std::size_t>(c) * height + y) * width + x];
    }
    float &at(int c, int y, int x) { return data[(static_cast<std::size_t>(c) * height + y) * width + x]; }
    std::size_t plane_size() const { return static_cast<std::size_t>(height) * width; }
};

// Raw planar format: C, H, W as u32le, then C*H*W float32 little-endian.
std::string encode_raw(const MultiChannelImage &image);
MultiChannelImage decode_raw(const std::string &bytes, const std::string &origin = "<memory>");
MultiChannelImage read_raw(const std::filesystem::path &path);
void write_raw(const std::filesystem::path &path, const MultiChannelImage &image);

// `item_id,path` manifest; relative paths resolve against the manifest's directory.
std::vector<std::pair<std::string, std::filesystem::path>> read_manifest(const std::filesystem::path &path);

} // namespace cellbench::feat
