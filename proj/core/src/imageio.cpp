#include "salmap/imageio.hpp"

#include <algorithm>
#include <cmath>

#include "raster_io.hpp"

namespace fs = std::filesystem;

namespace salmap {

namespace {

inline std::uint8_t quantize255(float v) {
    const float c = std::clamp(v, 0.f, 1.f);
    return std::uint8_t(std::lround(c * 255.f));
}

}  // namespace

RgbImage load_rgb(const fs::path& path) {
    const auto raw = detail::read_raster(path);
    RgbImage img;
    img.width = raw.width;
    img.height = raw.height;
    img.data.resize(3 * img.pixels());
    const float inv = 1.f / float(raw.max_value);
    if (raw.channels == 3) {
        for (std::size_t i = 0; i < raw.data.size(); ++i) img.data[i] = raw.data[i] * inv;
    } else {
        for (std::size_t i = 0; i < img.pixels(); ++i) {
            const float v = raw.data[i] * inv;
            img.data[3 * i] = img.data[3 * i + 1] = img.data[3 * i + 2] = v;
        }
    }
    return img;
}

DepthMap load_depth(const fs::path& path, DepthPolarity polarity) {
    const auto raw = detail::read_raster(path);
    if (raw.channels != 1)
        throw IoError(IoErrorKind::MultiChannel, path.string(),
                      "depth map must be single-channel");
    DepthMap depth;
    depth.polarity = polarity;
    depth.values.width = raw.width;
    depth.values.height = raw.height;
    depth.values.data.resize(raw.data.size());
    const auto [lo_it, hi_it] = std::minmax_element(raw.data.begin(), raw.data.end());
    const std::uint16_t lo = *lo_it, hi = *hi_it;
    if (hi == lo) {
        std::fill(depth.values.data.begin(), depth.values.data.end(), 0.f);
        return depth;
    }
    const float inv = 1.f / float(hi - lo);
    for (std::size_t i = 0; i < raw.data.size(); ++i)
        depth.values.data[i] = float(raw.data[i] - lo) * inv;
    return depth;
}

SaliencyMap load_gray(const fs::path& path) {
    const auto raw = detail::read_raster(path);
    if (raw.channels != 1)
        throw IoError(IoErrorKind::MultiChannel, path.string(),
                      "expected a single-channel raster");
    SaliencyMap map;
    map.width = raw.width;
    map.height = raw.height;
    map.data.resize(raw.data.size());
    const float inv = 1.f / float(raw.max_value);
    for (std::size_t i = 0; i < raw.data.size(); ++i) map.data[i] = raw.data[i] * inv;
    return map;
}

GroundTruthMask load_mask(const fs::path& path) {
    const auto raw = detail::read_raster(path);
    GroundTruthMask mask;
    mask.width = raw.width;
    mask.height = raw.height;
    mask.data.resize(mask.pixels());
    const float inv = 1.f / float(raw.max_value);
    for (std::size_t i = 0; i < mask.pixels(); ++i) {
        float v = 0.f;
        for (int c = 0; c < raw.channels; ++c) v += raw.data[raw.channels * i + c] * inv;
        v /= float(raw.channels);
        mask.data[i] = v >= 0.5f ? 1 : 0;
    }
    return mask;
}

void save_saliency(const SaliencyMap& map, const fs::path& path) {
    std::vector<std::uint8_t> bytes(map.pixels());
    for (std::size_t i = 0; i < map.pixels(); ++i) bytes[i] = quantize255(map.data[i]);
    detail::write_png_gray8(path, map.width, map.height, bytes.data());
}

void save_rgb(const RgbImage& img, const fs::path& path) {
    std::vector<std::uint8_t> bytes(3 * img.pixels());
    for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = quantize255(img.data[i]);
    detail::write_png_rgb8(path, img.width, img.height, bytes.data());
}

void save_labels(const LabelMap& labels, const fs::path& path) {
    std::vector<std::uint8_t> bytes(labels.pixels());
    for (std::size_t i = 0; i < labels.pixels(); ++i)
        bytes[i] = std::uint8_t(labels.data[i] % 256);
    detail::write_png_gray8(path, labels.width, labels.height, bytes.data());
}

}  // namespace salmap
