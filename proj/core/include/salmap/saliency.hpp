#pragma once

#include <span>

#include "salmap/segmentation.hpp"
#include "salmap/types.hpp"

namespace salmap {

enum class ContrastFeature { ColorLab, Depth };

/// Reading of the front-enhancement term: Intent boosts camera-near regions
/// (min-max normalized depth weight); Literal computes 1 - DW directly.
enum class NegationMode { Intent, Literal };

using RegionSaliency = std::vector<double>;

struct PipelineParams {
    int k = 30;                  // regions per layer
    double sigma2 = 0.4;         // spatial weight strength
    double beta = 0.3;           // depth filter fraction
    DepthPolarity polarity = DepthPolarity::NearIsLow;
    std::uint32_t seed = 42;
    int n_seed_clusters = 3;     // center-bias boundary seed clusters
    NegationMode negation_mode = NegationMode::Intent;
    int kmeans_max_iter = 100;
    double kmeans_tol = 1e-3;
    int threads = 0;             // 0 = hardware concurrency

    /// Throws InvalidParam naming the violated invariant.
    void validate() const;
};

/// Every map the three layers produce, all sharing the input dimensions.
struct LayerOutputs {
    SaliencyMap s1hat;            // first-layer refined map
    SaliencyMap s2hat;            // second-layer refined map
    SaliencyMap s_final;          // final map
    RgbImage extended;            // color image times depth
    SaliencyMap depth_filtered;   // background-filtered depth
    SaliencyMap depth_polarized;  // polarized filtered depth
    RgbImage reprocessed;         // color image times polarized depth
};

/// Area- and distance-weighted contrast of each region against all others.
/// Feature distance is Euclidean Lab distance or |mean depth difference|.
RegionSaliency region_contrast(std::span<const RegionStats> stats, ContrastFeature feature,
                               double sigma2);

/// DW(d_k) = (max{d} - d_k)^mu with mu = 1/(max{d} - min{d}) over region mean
/// depths; constant depth gives DW = 1. Depths are flipped to near-is-low first.
RegionSaliency depth_weight(std::span<const RegionStats> stats, DepthPolarity polarity);

/// W_cd(r_k) = G(||P_k - P_o||) / N_k * DW(d_k) with P_o the map center and G
/// a Gaussian kernel over the population of center distances.
RegionSaliency center_depth_weight(std::span<const RegionStats> stats,
                                   const RegionSaliency& dw);

/// Min-max normalized S_c*W_cd + S_d*W_cd.
RegionSaliency layer_combine(const RegionSaliency& s_c, const RegionSaliency& s_d,
                             const RegionSaliency& w_cd);

/// Front-enhancement factor from the depth weight, per the negation mode.
RegionSaliency front_enhancement(const RegionSaliency& dw, NegationMode mode);

/// First-layer refinement: S1 * F(d_k) * region-mean center bias, normalized.
RegionSaliency layer1_refine(const RegionSaliency& s1, const RegionSaliency& dw,
                             const SaliencyMap& center_bias, const LabelMap& labels,
                             NegationMode mode);

/// Channelwise product of a color image and a depth-like map.
RgbImage extend_map(const RgbImage& img, const GrayImage& depth_like);

/// Second-layer backpropagation before normalization:
/// S1h^2 + S1h * (1 - exp(-S2^2 * F)).
RegionSaliency layer2_refine_raw(const RegionSaliency& s1hat, const RegionSaliency& s2,
                                 const RegionSaliency& dw, NegationMode mode);
RegionSaliency layer2_refine(const RegionSaliency& s1hat, const RegionSaliency& s2,
                             const RegionSaliency& dw, NegationMode mode);

/// Keep pixels with depth <= beta * max depth, zero the rest.
SaliencyMap depth_filter(const GrayImage& depth, double beta);

/// v -> 1 - exp(-(1 - v)); strictly decreasing, range [0, 1 - 1/e].
SaliencyMap depth_polarize(const SaliencyMap& filtered);

/// Third-layer backpropagation before normalization:
/// S2h * (S1h + S3) * (S3 + 1 - exp(-S1h * S3^2)).
RegionSaliency layer3_combine_raw(const RegionSaliency& s1hat, const RegionSaliency& s2hat,
                                  const RegionSaliency& s3);
RegionSaliency layer3_combine(const RegionSaliency& s1hat, const RegionSaliency& s2hat,
                              const RegionSaliency& s3);

/// Paint per-region values onto a pixel map.
SaliencyMap rasterize_regions(const LabelMap& labels, const RegionSaliency& values);

/// Mean of a pixel map over each region of a label map.
RegionSaliency region_means(const SaliencyMap& map, const LabelMap& labels, int k);

/// Run the full three-layer pipeline. When center_bias is null it is computed
/// from the first layer's decomposition; otherwise the given map is used.
LayerOutputs detect(const RgbImage& img, const DepthMap& depth, const PipelineParams& params,
                    const SaliencyMap* center_bias = nullptr);

}  // namespace salmap
