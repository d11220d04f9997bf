#pragma once

#include "salmap/saliency.hpp"
#include "salmap/types.hpp"

namespace salmap {

struct DarkChannelMap {
    SaliencyMap map;
    int patch = 0;  // window size used
};

/// D(x) = min over the patch window centered at x (clamped at borders) of the
/// per-channel minimum. patch must be odd and >= 1.
DarkChannelMap dark_channel(const RgbImage& img, int patch);

/// Small-target mode: the min-max normalized dark channel stands in for the
/// depth map (polarity from params), then the full pipeline runs.
LayerOutputs small_target_detect(const RgbImage& img, const PipelineParams& params,
                                 int patch = 15);

}  // namespace salmap
