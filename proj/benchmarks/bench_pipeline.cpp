#include <benchmark/benchmark.h>

#include "salmap/color.hpp"
#include "salmap/darkchannel.hpp"
#include "salmap/evaluation.hpp"
#include "salmap/saliency.hpp"
#include "salmap/segmentation.hpp"

using namespace salmap;

namespace {

RgbImage textured_image(int w, int h) {
    RgbImage img(w, h);
    std::uint32_t state = 12345;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            state = state * 1664525u + 1013904223u;
            const float noise = float(state >> 24) / 1024.f;
            img.at(x, y, 0) = 0.2f + 0.5f * float(x) / float(w) + noise;
            img.at(x, y, 1) = 0.3f + 0.4f * float(y) / float(h) + noise;
            img.at(x, y, 2) = 0.5f - 0.3f * float(x) / float(w) + noise;
        }
    return img;
}

DepthMap ramp_depth(int w, int h) {
    DepthMap d;
    d.values = GrayImage(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            d.values.at(x, y) = float(x + y) / float(w + h - 2);
    return d;
}

void BM_RgbToLab(benchmark::State& state) {
    const RgbImage img = textured_image(640, 480);
    for (auto _ : state) benchmark::DoNotOptimize(rgb_to_lab(img));
}
BENCHMARK(BM_RgbToLab)->Unit(benchmark::kMillisecond);

void BM_KmeansSegment(benchmark::State& state) {
    const RgbImage img = textured_image(640, 480);
    const LabImage lab = rgb_to_lab(img);
    KmeansOptions opts;
    opts.k = int(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(kmeans_segment_lab(lab, opts));
}
BENCHMARK(BM_KmeansSegment)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_DarkChannel(benchmark::State& state) {
    const RgbImage img = textured_image(640, 480);
    for (auto _ : state) benchmark::DoNotOptimize(dark_channel(img, 15));
}
BENCHMARK(BM_DarkChannel)->Unit(benchmark::kMillisecond);

void BM_Detect(benchmark::State& state) {
    const RgbImage img = textured_image(640, 480);
    const DepthMap depth = ramp_depth(640, 480);
    PipelineParams params;
    for (auto _ : state) benchmark::DoNotOptimize(detect(img, depth, params));
}
BENCHMARK(BM_Detect)->Unit(benchmark::kMillisecond);

void BM_Mae(benchmark::State& state) {
    SaliencyMap pred(640, 480, 0.5f);
    GroundTruthMask gt;
    gt.width = 640;
    gt.height = 480;
    gt.data.assign(pred.pixels(), 1);
    for (auto _ : state) benchmark::DoNotOptimize(mae(pred, gt));
}
BENCHMARK(BM_Mae)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
