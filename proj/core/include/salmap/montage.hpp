#pragma once

#include <array>

#include "salmap/types.hpp"

namespace salmap {

/// Premultiplied object cutout: color = original * alpha, channelwise.
struct SegmentedObject {
    RgbImage color;
    SaliencyMap alpha;
};

/// Soft matte from a saliency map (channelwise product, alpha kept).
SegmentedObject segment_object(const RgbImage& img, const SaliencyMap& sal);

/// Hard matte variant: saliency binarized at `threshold` first.
SegmentedObject segment_object_binarized(const RgbImage& img, const SaliencyMap& sal,
                                         double threshold);

/// Channel permutation plus per-channel gain in [0,2].
struct ChannelTransform {
    std::array<int, 3> permutation{0, 1, 2};  // output channel c reads input permutation[c]
    std::array<double, 3> gains{1.0, 1.0, 1.0};
};

/// Apply the transform where alpha > 0; results clamped to [0,1].
SegmentedObject recolor(const SegmentedObject& obj, const ChannelTransform& transform);

/// Bilinear resize with edge-aligned sampling: src = dst*(src_size-1)/(dst_size-1),
/// degenerating to coordinate 0 for a 1-wide target.
RgbImage resize_bilinear(const RgbImage& img, int new_w, int new_h);
GrayImage resize_bilinear(const GrayImage& img, int new_w, int new_h);

/// Premultiplied over: out = obj.color + (1-alpha)*bg inside the placement
/// window (clipped to the background); the object must intersect it.
RgbImage composite(const RgbImage& bg, const SegmentedObject& obj, int at_x, int at_y);

}  // namespace salmap
