#include "salmap/saliency.hpp"

#include <algorithm>
#include <cmath>

#include "salmap/centerbias.hpp"

namespace salmap {

void PipelineParams::validate() const {
    if (k < 2) throw InvalidParam("K must be >= 2");
    if (!(sigma2 > 0)) throw InvalidParam("sigma2 must be > 0");
    if (!(beta > 0) || beta > 1) throw InvalidParam("beta must satisfy 0 < beta <= 1");
    if (n_seed_clusters < 1) throw InvalidParam("n_seed_clusters must be >= 1");
    if (kmeans_max_iter < 1) throw InvalidParam("kmeans_max_iter must be >= 1");
    if (!(kmeans_tol >= 0)) throw InvalidParam("kmeans_tol must be >= 0");
}

RegionSaliency region_contrast(std::span<const RegionStats> stats, ContrastFeature feature,
                               double sigma2) {
    const std::size_t k = stats.size();
    if (k < 2) throw InvalidParam("region_contrast: need at least 2 regions");
    RegionSaliency out(k, 0.0);
    for (std::size_t a = 0; a < k; ++a) {
        double sum = 0.0;
        for (std::size_t b = 0; b < k; ++b) {
            if (b == a) continue;
            const double dx = stats[a].centroid_x - stats[b].centroid_x;
            const double dy = stats[a].centroid_y - stats[b].centroid_y;
            const double spatial = std::exp(-std::sqrt(dx * dx + dy * dy) / sigma2);
            double feat;
            if (feature == ContrastFeature::ColorLab) {
                const double dl = stats[a].mean_lab[0] - stats[b].mean_lab[0];
                const double da = stats[a].mean_lab[1] - stats[b].mean_lab[1];
                const double db = stats[a].mean_lab[2] - stats[b].mean_lab[2];
                feat = std::sqrt(dl * dl + da * da + db * db);
            } else {
                feat = std::abs(stats[a].mean_depth - stats[b].mean_depth);
            }
            sum += stats[b].area_ratio * spatial * feat;
        }
        out[a] = sum;
    }
    return out;
}

RegionSaliency depth_weight(std::span<const RegionStats> stats, DepthPolarity polarity) {
    const std::size_t k = stats.size();
    RegionSaliency depths(k);
    for (std::size_t i = 0; i < k; ++i) {
        const double d = stats[i].mean_depth;
        depths[i] = polarity == DepthPolarity::NearIsHigh ? 1.0 - d : d;
    }
    const auto [lo, hi] = std::minmax_element(depths.begin(), depths.end());
    const double dmin = *lo, dmax = *hi;
    RegionSaliency out(k, 1.0);
    if (dmax <= dmin) return out;  // constant depth carries no weight
    const double mu = 1.0 / (dmax - dmin);
    for (std::size_t i = 0; i < k; ++i) out[i] = std::pow(dmax - depths[i], mu);
    return out;
}

RegionSaliency center_depth_weight(std::span<const RegionStats> stats,
                                   const RegionSaliency& dw) {
    const std::size_t k = stats.size();
    if (dw.size() != k) throw InvalidParam("center_depth_weight: length mismatch");

    RegionSaliency dist(k);
    for (std::size_t i = 0; i < k; ++i) {
        const double dx = stats[i].centroid_x - 0.5;
        const double dy = stats[i].centroid_y - 0.5;
        dist[i] = std::sqrt(dx * dx + dy * dy);
    }
    // Gaussian kernel over the population, peaked at the center-closest region
    double dmin = dist[0], mean = 0.0;
    for (const double d : dist) {
        dmin = std::min(dmin, d);
        mean += d;
    }
    mean /= double(k);
    double var = 0.0;
    for (const double d : dist) var += (d - mean) * (d - mean);
    var /= double(k);

    // variances at rounding-noise level are degenerate populations
    constexpr double var_eps = 1e-12;
    RegionSaliency out(k);
    for (std::size_t i = 0; i < k; ++i) {
        const double g = var > var_eps
                             ? std::exp(-(dist[i] - dmin) * (dist[i] - dmin) / (2.0 * var))
                             : 1.0;
        out[i] = g / double(stats[i].pixel_count) * dw[i];
    }
    return out;
}

RegionSaliency layer_combine(const RegionSaliency& s_c, const RegionSaliency& s_d,
                             const RegionSaliency& w_cd) {
    const std::size_t k = s_c.size();
    if (s_d.size() != k || w_cd.size() != k)
        throw InvalidParam("layer_combine: length mismatch");
    RegionSaliency out(k);
    for (std::size_t i = 0; i < k; ++i) out[i] = s_c[i] * w_cd[i] + s_d[i] * w_cd[i];
    min_max_normalize(out);
    return out;
}

RegionSaliency front_enhancement(const RegionSaliency& dw, NegationMode mode) {
    RegionSaliency out = dw;
    if (mode == NegationMode::Literal) {
        for (double& v : out) v = 1.0 - v;
        return out;
    }
    // Intent: min-max normalized DW, large for camera-near regions.
    // A flat DW (no depth range) stays a neutral factor of 1.
    const auto [lo, hi] = std::minmax_element(out.begin(), out.end());
    if (*hi <= *lo) {
        std::fill(out.begin(), out.end(), 1.0);
        return out;
    }
    min_max_normalize(out);
    return out;
}

RegionSaliency layer1_refine(const RegionSaliency& s1, const RegionSaliency& dw,
                             const SaliencyMap& center_bias, const LabelMap& labels,
                             NegationMode mode) {
    const std::size_t k = s1.size();
    if (dw.size() != k) throw InvalidParam("layer1_refine: length mismatch");
    require_same_size(labels.width, labels.height, center_bias.width, center_bias.height,
                      "layer1_refine center-bias vs labels");
    const RegionSaliency f = front_enhancement(dw, mode);
    const RegionSaliency wc = region_means(center_bias, labels, int(k));
    RegionSaliency out(k);
    for (std::size_t i = 0; i < k; ++i) out[i] = s1[i] * f[i] * wc[i];
    min_max_normalize(out);
    return out;
}

RgbImage extend_map(const RgbImage& img, const GrayImage& depth_like) {
    require_same_size(img.width, img.height, depth_like.width, depth_like.height,
                      "extend_map image vs depth");
    RgbImage out = img;
    for (std::size_t i = 0; i < img.pixels(); ++i) {
        const float d = depth_like.data[i];
        out.data[3 * i] *= d;
        out.data[3 * i + 1] *= d;
        out.data[3 * i + 2] *= d;
    }
    return out;
}

RegionSaliency layer2_refine_raw(const RegionSaliency& s1hat, const RegionSaliency& s2,
                                 const RegionSaliency& dw, NegationMode mode) {
    const std::size_t k = s1hat.size();
    if (s2.size() != k || dw.size() != k)
        throw InvalidParam("layer2_refine: length mismatch");
    const RegionSaliency f = front_enhancement(dw, mode);
    RegionSaliency out(k);
    for (std::size_t i = 0; i < k; ++i)
        out[i] = s1hat[i] * s1hat[i] +
                 s1hat[i] * (1.0 - std::exp(-s2[i] * s2[i] * f[i]));
    return out;
}

RegionSaliency layer2_refine(const RegionSaliency& s1hat, const RegionSaliency& s2,
                             const RegionSaliency& dw, NegationMode mode) {
    RegionSaliency out = layer2_refine_raw(s1hat, s2, dw, mode);
    min_max_normalize(out);
    return out;
}

SaliencyMap depth_filter(const GrayImage& depth, double beta) {
    SaliencyMap out = depth;
    if (out.data.empty()) return out;
    const float dmax = *std::max_element(out.data.begin(), out.data.end());
    const float cutoff = float(beta) * dmax;
    for (float& v : out.data)
        if (v > cutoff) v = 0.f;
    return out;
}

SaliencyMap depth_polarize(const SaliencyMap& filtered) {
    SaliencyMap out = filtered;
    for (float& v : out.data) v = float(1.0 - std::exp(-(1.0 - double(v))));
    return out;
}

RegionSaliency layer3_combine_raw(const RegionSaliency& s1hat, const RegionSaliency& s2hat,
                                  const RegionSaliency& s3) {
    const std::size_t k = s1hat.size();
    if (s2hat.size() != k || s3.size() != k)
        throw InvalidParam("layer3_combine: length mismatch");
    RegionSaliency out(k);
    for (std::size_t i = 0; i < k; ++i)
        out[i] = s2hat[i] * (s1hat[i] + s3[i]) *
                 (s3[i] + 1.0 - std::exp(-s1hat[i] * s3[i] * s3[i]));
    return out;
}

RegionSaliency layer3_combine(const RegionSaliency& s1hat, const RegionSaliency& s2hat,
                              const RegionSaliency& s3) {
    RegionSaliency out = layer3_combine_raw(s1hat, s2hat, s3);
    min_max_normalize(out);
    return out;
}

SaliencyMap rasterize_regions(const LabelMap& labels, const RegionSaliency& values) {
    SaliencyMap out(labels.width, labels.height);
    for (std::size_t i = 0; i < labels.pixels(); ++i)
        out.data[i] = float(values[labels.data[i]]);
    return out;
}

RegionSaliency region_means(const SaliencyMap& map, const LabelMap& labels, int k) {
    require_same_size(map.width, map.height, labels.width, labels.height,
                      "region_means map vs labels");
    RegionSaliency sums(k, 0.0);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < labels.pixels(); ++i) {
        sums[labels.data[i]] += map.data[i];
        counts[labels.data[i]]++;
    }
    for (int r = 0; r < k; ++r)
        if (counts[r]) sums[r] /= double(counts[r]);
    return sums;
}

namespace {

struct LayerResult {
    RegionDecomposition decomp;
    RegionSaliency combined;  // Eq. 7 form on this layer's decomposition
    RegionSaliency dw;
};

LayerResult run_layer(const RgbImage& img, const DepthMap& depth_low,
                      const PipelineParams& params) {
    KmeansOptions km;
    km.k = params.k;
    km.max_iter = params.kmeans_max_iter;
    km.tol = params.kmeans_tol;
    km.seed = params.seed;
    km.threads = params.threads;

    LayerResult out;
    const LabImage lab = rgb_to_lab(img);
    out.decomp = kmeans_segment_lab(lab, km);
    out.decomp.regions = region_stats(out.decomp.labels, lab, depth_low);

    const auto s_c = region_contrast(out.decomp.regions, ContrastFeature::ColorLab,
                                     params.sigma2);
    const auto s_d = region_contrast(out.decomp.regions, ContrastFeature::Depth,
                                     params.sigma2);
    out.dw = depth_weight(out.decomp.regions, DepthPolarity::NearIsLow);
    const auto w_cd = center_depth_weight(out.decomp.regions, out.dw);
    out.combined = layer_combine(s_c, s_d, w_cd);
    return out;
}

}  // namespace

LayerOutputs detect(const RgbImage& img, const DepthMap& depth, const PipelineParams& params,
                    const SaliencyMap* center_bias) {
    params.validate();
    require_same_size(img.width, img.height, depth.width(), depth.height(),
                      "detect image vs depth");
    if (center_bias)
        require_same_size(img.width, img.height, center_bias->width, center_bias->height,
                          "detect image vs center-bias map");

    // everything downstream assumes near-is-low depth values
    DepthMap depth_low;
    depth_low.polarity = DepthPolarity::NearIsLow;
    depth_low.values = depth.polarity == DepthPolarity::NearIsHigh ? flipped(depth.values)
                                                                   : depth.values;

    LayerOutputs out;

    // first layer: original image and depth
    LayerResult l1 = run_layer(img, depth_low, params);
    SaliencyMap w_c = center_bias
                          ? *center_bias
                          : center_bias_map(l1.decomp, params.n_seed_clusters, params.seed);
    const RegionSaliency s1hat =
        layer1_refine(l1.combined, l1.dw, w_c, l1.decomp.labels, params.negation_mode);
    out.s1hat = rasterize_regions(l1.decomp.labels, s1hat);

    // second layer: extended image, same depth
    out.extended = extend_map(img, depth_low.values);
    LayerResult l2 = run_layer(out.extended, depth_low, params);
    const RegionSaliency s1hat_on2 = region_means(out.s1hat, l2.decomp.labels, params.k);
    const RegionSaliency s2hat =
        layer2_refine(s1hat_on2, l2.combined, l2.dw, params.negation_mode);
    out.s2hat = rasterize_regions(l2.decomp.labels, s2hat);

    // third layer: reprocessed image from the filtered, polarized depth
    out.depth_filtered = depth_filter(depth_low.values, params.beta);
    out.depth_polarized = depth_polarize(out.depth_filtered);
    out.reprocessed = extend_map(img, out.depth_polarized);
    LayerResult l3 = run_layer(out.reprocessed, depth_low, params);
    const RegionSaliency s1hat_on3 = region_means(out.s1hat, l3.decomp.labels, params.k);
    const RegionSaliency s2hat_on3 = region_means(out.s2hat, l3.decomp.labels, params.k);
    const RegionSaliency s_final = layer3_combine(s1hat_on3, s2hat_on3, l3.combined);
    out.s_final = rasterize_regions(l3.decomp.labels, s_final);

    return out;
}

}  // namespace salmap
