#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "salmap/color.hpp"
#include "salmap/types.hpp"

namespace salmap {

/// Per-region aggregates consumed by the saliency equations.
struct RegionStats {
    std::size_t pixel_count = 0;            // N_k
    double area_ratio = 0.0;                // P_k = N_k / (H*W)
    double centroid_x = 0.0;                // mean of col/(W-1), in [0,1]
    double centroid_y = 0.0;                // mean of row/(H-1), in [0,1]
    std::array<double, 3> mean_lab{0, 0, 0};
    double mean_depth = 0.0;
};

/// Pixel label map plus region count; `regions` is filled by region_stats.
struct RegionDecomposition {
    LabelMap labels;
    int k = 0;
    std::vector<RegionStats> regions;
};

struct KmeansOptions {
    int k = 30;
    int max_iter = 100;
    double tol = 1e-3;       // centroid movement, Lab units
    std::uint32_t seed = 42;
    int threads = 0;         // 0 = hardware concurrency
};

/// Optional per-run diagnostics.
struct KmeansTrace {
    std::vector<double> objective;  // sum of squared distances, one entry per assignment pass
    std::vector<std::array<double, 3>> centroids;
    bool converged = false;
};

/// Deterministic K-means over Lab pixel colors: k-means++ seeding from a
/// fixed-seed generator, ties broken toward the lowest centroid index, and
/// empty clusters re-seeded from the farthest pixel so that all K regions
/// are non-empty. Identical inputs give identical labels for any thread count.
RegionDecomposition kmeans_segment(const RgbImage& img, const KmeansOptions& opts,
                                   KmeansTrace* trace = nullptr);
RegionDecomposition kmeans_segment_lab(const LabImage& lab, const KmeansOptions& opts,
                                       KmeansTrace* trace = nullptr);

/// Per-region pixel count, area ratio, centroid, mean Lab and mean depth.
std::vector<RegionStats> region_stats(const LabelMap& labels, const LabImage& lab,
                                      const DepthMap& depth);

/// Small-set 3D clustering (used to group boundary seeds by color).
struct PointClustering {
    std::vector<int> labels;
    std::vector<std::array<double, 3>> centroids;
};
PointClustering kmeans_points(std::span<const std::array<double, 3>> points, int k,
                              std::uint32_t seed);

}  // namespace salmap
