#include "salmap/centerbias.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "salmap/imageio.hpp"

namespace salmap {

SaliencyMap center_bias_map(const RegionDecomposition& decomp, int n_seed_clusters,
                            std::uint32_t seed, double sigma_s2) {
    const LabelMap& labels = decomp.labels;
    const auto& regions = decomp.regions;
    const int k = int(regions.size());
    if (k == 0) throw InvalidParam("center_bias_map: decomposition has no region stats");
    if (n_seed_clusters < 1) throw InvalidParam("center_bias_map: n_seed_clusters >= 1");

    // regions with any pixel on the image border are background seeds
    std::vector<char> is_seed(k, 0);
    const int w = labels.width, h = labels.height;
    for (int x = 0; x < w; ++x) {
        is_seed[labels.at(x, 0)] = 1;
        is_seed[labels.at(x, h - 1)] = 1;
    }
    for (int y = 0; y < h; ++y) {
        is_seed[labels.at(0, y)] = 1;
        is_seed[labels.at(w - 1, y)] = 1;
    }
    std::vector<int> seeds;
    for (int r = 0; r < k; ++r)
        if (is_seed[r]) seeds.push_back(r);
    if (seeds.empty())
        throw InvalidParam("center_bias_map: no border-touching region");

    // canonical seed order keeps the map invariant under region relabeling
    std::sort(seeds.begin(), seeds.end(), [&](int a, int b) {
        const auto& ra = regions[a];
        const auto& rb = regions[b];
        return std::tie(ra.mean_lab, ra.centroid_x, ra.centroid_y) <
               std::tie(rb.mean_lab, rb.centroid_x, rb.centroid_y);
    });

    // group seeds by mean Lab color
    const int n_clusters = std::min<int>(n_seed_clusters, int(seeds.size()));
    std::vector<int> seed_cluster(seeds.size(), 0);
    if (n_clusters > 1) {
        std::vector<std::array<double, 3>> pts(seeds.size());
        for (std::size_t i = 0; i < seeds.size(); ++i) pts[i] = regions[seeds[i]].mean_lab;
        seed_cluster = kmeans_points(pts, n_clusters, seed).labels;
    }

    // contrast of every region against each seed cluster, distance-weighted
    std::vector<double> combined(k, 0.0);
    std::vector<double> cluster_map(k);
    for (int c = 0; c < n_clusters; ++c) {
        for (int r = 0; r < k; ++r) {
            double sum = 0.0;
            std::size_t count = 0;
            for (std::size_t i = 0; i < seeds.size(); ++i) {
                if (seed_cluster[i] != c) continue;
                const auto& s = regions[seeds[i]];
                const auto& g = regions[r];
                const double dl = g.mean_lab[0] - s.mean_lab[0];
                const double da = g.mean_lab[1] - s.mean_lab[1];
                const double db = g.mean_lab[2] - s.mean_lab[2];
                const double color = std::sqrt(dl * dl + da * da + db * db);
                const double dx = g.centroid_x - s.centroid_x;
                const double dy = g.centroid_y - s.centroid_y;
                const double dist = std::sqrt(dx * dx + dy * dy);
                sum += color * std::exp(-dist / sigma_s2);
                ++count;
            }
            cluster_map[r] = count ? sum / double(count) : 0.0;
        }
        min_max_normalize(cluster_map);
        for (int r = 0; r < k; ++r) combined[r] += cluster_map[r];
    }
    for (double& v : combined) v /= double(n_clusters);

    SaliencyMap out(w, h);
    for (std::size_t i = 0; i < labels.pixels(); ++i)
        out.data[i] = float(combined[labels.data[i]]);
    min_max_normalize(out);
    return out;
}

SaliencyMap load_center_bias(const std::filesystem::path& path, int expect_w,
                             int expect_h) {
    SaliencyMap map = load_gray(path);
    require_same_size(expect_w, expect_h, map.width, map.height, "center-bias map");
    min_max_normalize(map);
    return map;
}

}  // namespace salmap
