#pragma once

#include <array>

#include "salmap/types.hpp"

namespace salmap {

/// H×W×3 CIE L*a*b* raster (sRGB/D65). L in [0,100], a/b roughly [-128,127].
struct LabImage {
    int width = 0;
    int height = 0;
    std::vector<float> data;  // L,a,b interleaved

    std::size_t pixels() const { return std::size_t(width) * height; }
    const float* px(std::size_t i) const { return &data[3 * i]; }
};

/// One sRGB pixel (channels in [0,1]) to L*a*b* under D65.
std::array<double, 3> srgb_to_lab(double r, double g, double b);

LabImage rgb_to_lab(const RgbImage& img);

}  // namespace salmap
