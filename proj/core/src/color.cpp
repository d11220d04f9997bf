#include "salmap/color.hpp"

#include <cmath>

namespace salmap {

namespace {

inline double srgb_linearize(double c) {
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

inline double lab_f(double t) {
    // CIE thresholds: epsilon = (6/29)^3, kappa = (29/3)^3
    constexpr double eps = 216.0 / 24389.0;
    constexpr double kappa = 24389.0 / 27.0;
    return t > eps ? std::cbrt(t) : (kappa * t + 16.0) / 116.0;
}

}  // namespace

std::array<double, 3> srgb_to_lab(double r, double g, double b) {
    const double rl = srgb_linearize(r);
    const double gl = srgb_linearize(g);
    const double bl = srgb_linearize(b);

    // sRGB to XYZ, D65 illuminant
    const double x = rl * 0.4124564 + gl * 0.3575761 + bl * 0.1804375;
    const double y = rl * 0.2126729 + gl * 0.7151522 + bl * 0.0721750;
    const double z = rl * 0.0193339 + gl * 0.1191920 + bl * 0.9503041;

    const double fx = lab_f(x / 0.95047);
    const double fy = lab_f(y / 1.0);
    const double fz = lab_f(z / 1.08883);

    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

LabImage rgb_to_lab(const RgbImage& img) {
    LabImage out;
    out.width = img.width;
    out.height = img.height;
    out.data.resize(img.data.size());
    const std::size_t n = img.pixels();
    for (std::size_t i = 0; i < n; ++i) {
        const auto lab =
            srgb_to_lab(img.data[3 * i], img.data[3 * i + 1], img.data[3 * i + 2]);
        out.data[3 * i + 0] = float(lab[0]);
        out.data[3 * i + 1] = float(lab[1]);
        out.data[3 * i + 2] = float(lab[2]);
    }
    return out;
}

}  // namespace salmap
