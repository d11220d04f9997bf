#include "salmap/montage.hpp"

#include <algorithm>
#include <cmath>

namespace salmap {

SegmentedObject segment_object(const RgbImage& img, const SaliencyMap& sal) {
    require_same_size(img.width, img.height, sal.width, sal.height,
                      "segment_object image vs saliency");
    SegmentedObject obj;
    obj.alpha = sal;
    obj.color = img;
    for (std::size_t i = 0; i < img.pixels(); ++i) {
        const float a = sal.data[i];
        obj.color.data[3 * i] *= a;
        obj.color.data[3 * i + 1] *= a;
        obj.color.data[3 * i + 2] *= a;
    }
    return obj;
}

SegmentedObject segment_object_binarized(const RgbImage& img, const SaliencyMap& sal,
                                         double threshold) {
    SaliencyMap hard = sal;
    for (float& v : hard.data) v = v >= threshold ? 1.f : 0.f;
    return segment_object(img, hard);
}

SegmentedObject recolor(const SegmentedObject& obj, const ChannelTransform& transform) {
    for (const double g : transform.gains)
        if (g < 0.0 || g > 2.0)
            throw InvalidParam("recolor: gains must lie in [0,2]");
    std::array<bool, 3> seen{false, false, false};
    for (const int p : transform.permutation) {
        if (p < 0 || p > 2 || seen[p])
            throw InvalidParam("recolor: permutation must reorder channels {0,1,2}");
        seen[p] = true;
    }
    SegmentedObject out = obj;
    for (std::size_t i = 0; i < obj.color.pixels(); ++i) {
        if (obj.alpha.data[i] <= 0.f) continue;
        for (int c = 0; c < 3; ++c) {
            const float v = obj.color.data[3 * i + transform.permutation[c]];
            out.color.data[3 * i + c] = std::clamp(float(transform.gains[c]) * v, 0.f, 1.f);
        }
    }
    return out;
}

namespace {

struct SampleCoord {
    int lo, hi;
    float frac;
};

SampleCoord map_coord(int dst, int dst_size, int src_size) {
    if (dst_size <= 1 || src_size <= 1) return {0, 0, 0.f};
    const double s = double(dst) * double(src_size - 1) / double(dst_size - 1);
    const int lo = std::min(int(s), src_size - 1);
    const int hi = std::min(lo + 1, src_size - 1);
    return {lo, hi, float(s - lo)};
}

}  // namespace

RgbImage resize_bilinear(const RgbImage& img, int new_w, int new_h) {
    if (new_w < 1 || new_h < 1)
        throw InvalidParam("resize_bilinear: target size must be >= 1");
    RgbImage out(new_w, new_h);
    for (int y = 0; y < new_h; ++y) {
        const auto cy = map_coord(y, new_h, img.height);
        for (int x = 0; x < new_w; ++x) {
            const auto cx = map_coord(x, new_w, img.width);
            for (int c = 0; c < 3; ++c) {
                const float top = img.at(cx.lo, cy.lo, c) +
                                  (img.at(cx.hi, cy.lo, c) - img.at(cx.lo, cy.lo, c)) * cx.frac;
                const float bot = img.at(cx.lo, cy.hi, c) +
                                  (img.at(cx.hi, cy.hi, c) - img.at(cx.lo, cy.hi, c)) * cx.frac;
                out.at(x, y, c) = top + (bot - top) * cy.frac;
            }
        }
    }
    return out;
}

GrayImage resize_bilinear(const GrayImage& img, int new_w, int new_h) {
    if (new_w < 1 || new_h < 1)
        throw InvalidParam("resize_bilinear: target size must be >= 1");
    GrayImage out(new_w, new_h);
    for (int y = 0; y < new_h; ++y) {
        const auto cy = map_coord(y, new_h, img.height);
        for (int x = 0; x < new_w; ++x) {
            const auto cx = map_coord(x, new_w, img.width);
            const float top =
                img.at(cx.lo, cy.lo) + (img.at(cx.hi, cy.lo) - img.at(cx.lo, cy.lo)) * cx.frac;
            const float bot =
                img.at(cx.lo, cy.hi) + (img.at(cx.hi, cy.hi) - img.at(cx.lo, cy.hi)) * cx.frac;
            out.at(x, y) = top + (bot - top) * cy.frac;
        }
    }
    return out;
}

RgbImage composite(const RgbImage& bg, const SegmentedObject& obj, int at_x, int at_y) {
    require_same_size(obj.color.width, obj.color.height, obj.alpha.width, obj.alpha.height,
                      "composite object color vs alpha");
    const int ow = obj.color.width, oh = obj.color.height;
    if (at_x + ow <= 0 || at_y + oh <= 0 || at_x >= bg.width || at_y >= bg.height)
        throw InvalidParam("composite: placement entirely outside the background");
    RgbImage out = bg;
    const int x0 = std::max(0, at_x), y0 = std::max(0, at_y);
    const int x1 = std::min(bg.width, at_x + ow), y1 = std::min(bg.height, at_y + oh);
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            const int ox = x - at_x, oy = y - at_y;
            const float a = obj.alpha.at(ox, oy);
            for (int c = 0; c < 3; ++c) {
                const float v = obj.color.at(ox, oy, c) + (1.f - a) * bg.at(x, y, c);
                out.at(x, y, c) = std::clamp(v, 0.f, 1.f);
            }
        }
    }
    return out;
}

}  // namespace salmap
