#include "salmap/darkchannel.hpp"

#include <algorithm>

namespace salmap {

namespace {

// 1D sliding min with border clamp, separable pass
void min_filter_rows(const GrayImage& in, GrayImage& out, int radius) {
    const int w = in.width, h = in.height;
    for (int y = 0; y < h; ++y) {
        const float* row = &in.data[std::size_t(y) * w];
        float* dst = &out.data[std::size_t(y) * w];
        for (int x = 0; x < w; ++x) {
            const int lo = std::max(0, x - radius);
            const int hi = std::min(w - 1, x + radius);
            float m = row[lo];
            for (int i = lo + 1; i <= hi; ++i) m = std::min(m, row[i]);
            dst[x] = m;
        }
    }
}

void min_filter_cols(const GrayImage& in, GrayImage& out, int radius) {
    const int w = in.width, h = in.height;
    for (int y = 0; y < h; ++y) {
        const int lo = std::max(0, y - radius);
        const int hi = std::min(h - 1, y + radius);
        float* dst = &out.data[std::size_t(y) * w];
        for (int x = 0; x < w; ++x) {
            float m = in.data[std::size_t(lo) * w + x];
            for (int i = lo + 1; i <= hi; ++i)
                m = std::min(m, in.data[std::size_t(i) * w + x]);
            dst[x] = m;
        }
    }
}

}  // namespace

DarkChannelMap dark_channel(const RgbImage& img, int patch) {
    if (patch < 1 || patch % 2 == 0)
        throw InvalidParam("dark_channel: patch size must be odd and >= 1");

    GrayImage channel_min(img.width, img.height);
    for (std::size_t i = 0; i < img.pixels(); ++i)
        channel_min.data[i] =
            std::min({img.data[3 * i], img.data[3 * i + 1], img.data[3 * i + 2]});

    DarkChannelMap out;
    out.patch = patch;
    const int radius = (patch - 1) / 2;
    if (radius == 0) {
        out.map = std::move(channel_min);
        return out;
    }
    GrayImage tmp(img.width, img.height);
    out.map = GrayImage(img.width, img.height);
    min_filter_rows(channel_min, tmp, radius);
    min_filter_cols(tmp, out.map, radius);
    return out;
}

LayerOutputs small_target_detect(const RgbImage& img, const PipelineParams& params,
                                 int patch) {
    DepthMap substitute;
    substitute.polarity = params.polarity;
    substitute.values = dark_channel(img, patch).map;
    min_max_normalize(substitute.values);
    return detect(img, substitute, params);
}

}  // namespace salmap
