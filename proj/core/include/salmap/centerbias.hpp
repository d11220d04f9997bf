#pragma once

#include <filesystem>

#include "salmap/segmentation.hpp"
#include "salmap/types.hpp"

namespace salmap {

/// Boundary-seeded background-contrast map. Regions touching the image
/// border become background seeds, the seeds are grouped into
/// n_seed_clusters color clusters, and every region is scored by its
/// spatially-weighted Lab distance to each seed cluster. Per-cluster maps
/// are min-max normalized, averaged, rasterized and normalized to [0,1].
SaliencyMap center_bias_map(const RegionDecomposition& decomp, int n_seed_clusters = 3,
                            std::uint32_t seed = 42, double sigma_s2 = 0.4);

/// Load an externally computed center-bias map and min-max normalize it.
/// Dimensions must match the pipeline image.
SaliencyMap load_center_bias(const std::filesystem::path& path, int expect_w,
                             int expect_h);

}  // namespace salmap
