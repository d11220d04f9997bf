#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "salmap/errors.hpp"

namespace salmap {

enum class DepthPolarity { NearIsLow, NearIsHigh };

/// H×W×3 color raster, RGB interleaved, row-major, intensities in [0,1].
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<float> data;  // size 3*width*height

    RgbImage() = default;
    RgbImage(int w, int h, float r = 0.f, float g = 0.f, float b = 0.f);

    std::size_t pixels() const { return std::size_t(width) * height; }
    float& at(int x, int y, int c) { return data[3 * (std::size_t(y) * width + x) + c]; }
    float at(int x, int y, int c) const { return data[3 * (std::size_t(y) * width + x) + c]; }
};

/// H×W scalar raster, row-major. Used for saliency maps, depth values,
/// center-bias maps and dark-channel maps.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<float> data;  // size width*height

    GrayImage() = default;
    GrayImage(int w, int h, float fill = 0.f);

    std::size_t pixels() const { return std::size_t(width) * height; }
    float& at(int x, int y) { return data[std::size_t(y) * width + x]; }
    float at(int x, int y) const { return data[std::size_t(y) * width + x]; }
};

using SaliencyMap = GrayImage;

/// Depth raster in [0,1] plus the convention its values follow.
struct DepthMap {
    GrayImage values;
    DepthPolarity polarity = DepthPolarity::NearIsLow;

    int width() const { return values.width; }
    int height() const { return values.height; }
};

/// Binary ground-truth mask; every entry is exactly 0 or 1.
struct GroundTruthMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    std::size_t pixels() const { return std::size_t(width) * height; }
};

/// Per-pixel region index in [0,K).
struct LabelMap {
    int width = 0;
    int height = 0;
    std::vector<std::int32_t> data;

    std::size_t pixels() const { return std::size_t(width) * height; }
    std::int32_t at(int x, int y) const { return data[std::size_t(y) * width + x]; }
};

/// Min-max normalize to [0,1]; a zero-range input maps to all zeros.
void min_max_normalize(GrayImage& map);
void min_max_normalize(std::vector<double>& values);

/// Returns 1 - v on every pixel (polarity flip helper).
GrayImage flipped(const GrayImage& map);

void require_same_size(int wa, int ha, int wb, int hb, const char* what_for);

}  // namespace salmap
