#include "salmap/types.hpp"

#include <algorithm>

namespace salmap {

IoError::IoError(IoErrorKind kind, std::string path, const std::string& detail)
    : Error(detail + ": " + path), kind_(kind), path_(std::move(path)) {}

DimensionMismatch::DimensionMismatch(int expected_w, int expected_h, int got_w, int got_h,
                                     const std::string& what_for)
    : Error(what_for + ": expected " + std::to_string(expected_w) + "x" +
            std::to_string(expected_h) + ", got " + std::to_string(got_w) + "x" +
            std::to_string(got_h)) {}

RgbImage::RgbImage(int w, int h, float r, float g, float b) : width(w), height(h) {
    data.resize(3 * pixels());
    for (std::size_t i = 0; i < pixels(); ++i) {
        data[3 * i + 0] = r;
        data[3 * i + 1] = g;
        data[3 * i + 2] = b;
    }
}

GrayImage::GrayImage(int w, int h, float fill) : width(w), height(h) {
    data.assign(pixels(), fill);
}

void min_max_normalize(GrayImage& map) {
    if (map.data.empty()) return;
    auto [lo_it, hi_it] = std::minmax_element(map.data.begin(), map.data.end());
    const float lo = *lo_it, hi = *hi_it;
    if (hi <= lo) {
        std::fill(map.data.begin(), map.data.end(), 0.f);
        return;
    }
    const float inv = 1.f / (hi - lo);
    for (float& v : map.data) v = (v - lo) * inv;
}

void min_max_normalize(std::vector<double>& values) {
    if (values.empty()) return;
    auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it, hi = *hi_it;
    if (hi <= lo) {
        std::fill(values.begin(), values.end(), 0.0);
        return;
    }
    const double inv = 1.0 / (hi - lo);
    for (double& v : values) v = (v - lo) * inv;
}

GrayImage flipped(const GrayImage& map) {
    GrayImage out = map;
    for (float& v : out.data) v = 1.f - v;
    return out;
}

void require_same_size(int wa, int ha, int wb, int hb, const char* what_for) {
    if (wa != wb || ha != hb) throw DimensionMismatch(wa, ha, wb, hb, what_for);
}

}  // namespace salmap
