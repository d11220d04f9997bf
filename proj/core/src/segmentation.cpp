#include "salmap/segmentation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

namespace salmap {

namespace {

constexpr std::size_t kChunk = 8192;  // fixed; reduction order must not depend on threads

inline double uniform01(std::mt19937& rng) {
    return double(rng()) * (1.0 / 4294967296.0);
}

inline std::size_t uniform_index(std::mt19937& rng, std::size_t n) {
    return std::min(std::size_t(uniform01(rng) * double(n)), n - 1);
}

struct KahanSum {
    double sum = 0.0, c = 0.0;
    void add(double v) {
        const double y = v - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

// Lloyd's algorithm over packed xyz float triplets. Deterministic: fixed
// chunking, chunk-ordered reduction, fixed-seed k-means++.
class Kmeans3 {
public:
    Kmeans3(const float* pts, std::size_t n, const KmeansOptions& opts)
        : n_(n), k_(opts.k), opts_(opts) {
        if (opts.k < 2) throw InvalidParam("kmeans: K must be >= 2");
        if (std::size_t(opts.k) > n)
            throw InvalidParam("kmeans: K exceeds the number of points");
        px_.resize(n_);
        py_.resize(n_);
        pz_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            px_[i] = pts[3 * i];
            py_[i] = pts[3 * i + 1];
            pz_[i] = pts[3 * i + 2];
        }
        labels_.assign(n_, -1);
        prev_labels_.assign(n_, -1);
        mindist2_.assign(n_, 0.f);
        pinned_.assign(n_, 0);
        cent_.resize(k_);
        threads_ = opts.threads > 0 ? opts.threads
                                    : int(std::max(1u, std::thread::hardware_concurrency()));
        n_chunks_ = (n_ + kChunk - 1) / kChunk;
        chunk_obj_.resize(n_chunks_);
        chunk_changed_.resize(n_chunks_);
        chunk_sums_.resize(n_chunks_ * k_);
        chunk_counts_.resize(n_chunks_ * k_);
    }

    void run(KmeansTrace* trace) {
        seed_plus_plus();
        assign();
        record(trace);
        bool done = false;
        for (int it = 1; it <= opts_.max_iter && !done; ++it) {
            const bool reseeded = update();
            const std::size_t changed = assign();
            record(trace);
            done = !reseeded && (changed == 0 || max_move2_ <= opts_.tol * opts_.tol);
            if (trace && done) trace->converged = true;
        }
        // a re-seed on the final iteration may have left a hole
        for (int guard = 0; guard < k_ && has_empty(); ++guard) {
            update();
            assign();
            record(trace);
        }
        if (trace) {
            trace->centroids.assign(cent_.begin(), cent_.end());
        }
    }

    std::vector<std::int32_t> take_labels() { return std::move(labels_); }
    const std::vector<std::array<double, 3>>& centroids() const { return cent_; }

private:
    void seed_plus_plus() {
        std::mt19937 rng(opts_.seed);
        std::vector<double> d2(n_, std::numeric_limits<double>::infinity());
        std::size_t first = uniform_index(rng, n_);
        cent_[0] = point(first);
        for (int j = 1; j < k_; ++j) {
            const auto& c = cent_[j - 1];
            double total = 0.0;
            for (std::size_t i = 0; i < n_; ++i) {
                const double dx = px_[i] - c[0];
                const double dy = py_[i] - c[1];
                const double dz = pz_[i] - c[2];
                d2[i] = std::min(d2[i], dx * dx + dy * dy + dz * dz);
                total += d2[i];
            }
            std::size_t pick;
            if (total <= 0.0) {
                pick = uniform_index(rng, n_);
            } else {
                const double r = uniform01(rng) * total;
                double cum = 0.0;
                pick = n_ - 1;
                for (std::size_t i = 0; i < n_; ++i) {
                    cum += d2[i];
                    if (cum >= r) {
                        pick = i;
                        break;
                    }
                }
            }
            cent_[j] = point(pick);
        }
    }

    std::array<double, 3> point(std::size_t i) const {
        return {double(px_[i]), double(py_[i]), double(pz_[i])};
    }

    void assign_chunk(std::size_t ci, const float* cx, const float* cy, const float* cz) {
        const std::size_t begin = ci * kChunk;
        const std::size_t end = std::min(begin + kChunk, n_);
        const std::size_t m = end - begin;
        std::int32_t* __restrict__ lab = labels_.data() + begin;
        float* __restrict__ bd = mindist2_.data() + begin;
        const float* __restrict__ x = px_.data() + begin;
        const float* __restrict__ y = py_.data() + begin;
        const float* __restrict__ z = pz_.data() + begin;

        std::copy(lab, lab + m, prev_labels_.data() + begin);

        // centroid-outer sweep; ascending j plus strict < keeps the
        // lowest-index tie rule and vectorizes across pixels
        for (std::size_t i = 0; i < m; ++i) {
            const float dx = x[i] - cx[0];
            const float dy = y[i] - cy[0];
            const float dz = z[i] - cz[0];
            bd[i] = dx * dx + dy * dy + dz * dz;
            lab[i] = 0;
        }
        for (int j = 1; j < k_; ++j) {
            const float cxj = cx[j], cyj = cy[j], czj = cz[j];
            for (std::size_t i = 0; i < m; ++i) {
                const float dx = x[i] - cxj;
                const float dy = y[i] - cyj;
                const float dz = z[i] - czj;
                const float d = dx * dx + dy * dy + dz * dz;
                // branch-free select keeps the loop vectorizable
                const std::int32_t mask = -std::int32_t(d < bd[i]);
                bd[i] = std::min(d, bd[i]);
                lab[i] = (j & mask) | (lab[i] & ~mask);
            }
        }

        KahanSum obj;
        std::size_t changed = 0;
        auto* sums = &chunk_sums_[ci * k_];
        auto* counts = &chunk_counts_[ci * k_];
        std::fill_n(sums, k_, std::array<double, 3>{0, 0, 0});
        std::fill_n(counts, k_, std::size_t(0));
        const std::int32_t* prev = prev_labels_.data() + begin;
        for (std::size_t i = 0; i < m; ++i) {
            const int best = lab[i];
            changed += prev[i] != best;
            obj.add(bd[i]);
            sums[best][0] += x[i];
            sums[best][1] += y[i];
            sums[best][2] += z[i];
            counts[best]++;
        }
        chunk_obj_[ci] = obj.sum;
        chunk_changed_[ci] = changed;
    }

    std::size_t assign() {
        std::vector<float> cx(k_), cy(k_), cz(k_);
        for (int j = 0; j < k_; ++j) {
            cx[j] = float(cent_[j][0]);
            cy[j] = float(cent_[j][1]);
            cz[j] = float(cent_[j][2]);
        }
        if (threads_ <= 1 || n_chunks_ == 1) {
            for (std::size_t ci = 0; ci < n_chunks_; ++ci)
                assign_chunk(ci, cx.data(), cy.data(), cz.data());
        } else {
            std::atomic<std::size_t> next{0};
            auto worker = [&] {
                for (;;) {
                    const std::size_t ci = next.fetch_add(1);
                    if (ci >= n_chunks_) return;
                    assign_chunk(ci, cx.data(), cy.data(), cz.data());
                }
            };
            std::vector<std::thread> pool;
            const int nt = int(std::min<std::size_t>(threads_, n_chunks_));
            pool.reserve(nt);
            for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
            for (auto& t : pool) t.join();
        }

        // chunk-ordered merge keeps results independent of scheduling
        sums_.assign(k_, {0, 0, 0});
        counts_.assign(k_, 0);
        KahanSum obj;
        std::size_t changed = 0;
        for (std::size_t ci = 0; ci < n_chunks_; ++ci) {
            obj.add(chunk_obj_[ci]);
            changed += chunk_changed_[ci];
            for (int j = 0; j < k_; ++j) {
                sums_[j][0] += chunk_sums_[ci * k_ + j][0];
                sums_[j][1] += chunk_sums_[ci * k_ + j][1];
                sums_[j][2] += chunk_sums_[ci * k_ + j][2];
                counts_[j] += chunk_counts_[ci * k_ + j];
            }
        }

        // re-seeded clusters keep their pixel while the distance tie persists
        for (const auto& [pix, cluster] : pins_) {
            const float dx = px_[pix] - float(cent_[cluster][0]);
            const float dy = py_[pix] - float(cent_[cluster][1]);
            const float dz = pz_[pix] - float(cent_[cluster][2]);
            const float d = dx * dx + dy * dy + dz * dz;
            if (d <= mindist2_[pix] && labels_[pix] != cluster) {
                const int old = labels_[pix];
                counts_[old]--;
                counts_[cluster]++;
                sums_[old][0] -= px_[pix];
                sums_[old][1] -= py_[pix];
                sums_[old][2] -= pz_[pix];
                sums_[cluster][0] += px_[pix];
                sums_[cluster][1] += py_[pix];
                sums_[cluster][2] += pz_[pix];
                labels_[pix] = cluster;
                mindist2_[pix] = d;
                ++changed;
            }
        }
        objective_ = obj.sum;
        return changed;
    }

    bool update() {
        bool reseeded = false;
        max_move2_ = 0.0;
        for (int j = 0; j < k_; ++j) {
            if (counts_[j] > 0) {
                std::array<double, 3> nc = {sums_[j][0] / double(counts_[j]),
                                            sums_[j][1] / double(counts_[j]),
                                            sums_[j][2] / double(counts_[j])};
                double m2 = 0.0;
                for (int c = 0; c < 3; ++c) {
                    const double d = nc[c] - cent_[j][c];
                    m2 += d * d;
                }
                max_move2_ = std::max(max_move2_, m2);
                cent_[j] = nc;
            } else {
                reseed(j);
                reseeded = true;
            }
        }
        return reseeded;
    }

    void reseed(int cluster) {
        std::size_t far = 0;
        float best = -1.f;
        for (std::size_t i = 0; i < n_; ++i) {
            if (!pinned_[i] && mindist2_[i] > best) {
                best = mindist2_[i];
                far = i;
            }
        }
        cent_[cluster] = point(far);
        pinned_[far] = 1;
        pins_.emplace_back(far, cluster);
    }

    bool has_empty() const {
        return std::any_of(counts_.begin(), counts_.end(),
                           [](std::size_t c) { return c == 0; });
    }

    void record(KmeansTrace* trace) const {
        if (trace) trace->objective.push_back(objective_);
    }

    std::size_t n_;
    int k_;
    KmeansOptions opts_;
    int threads_ = 1;
    std::size_t n_chunks_ = 1;

    std::vector<float> px_, py_, pz_;
    std::vector<std::int32_t> labels_;
    std::vector<std::int32_t> prev_labels_;
    std::vector<float> mindist2_;
    std::vector<char> pinned_;
    std::vector<std::pair<std::size_t, int>> pins_;
    std::vector<std::array<double, 3>> cent_;

    std::vector<double> chunk_obj_;
    std::vector<std::size_t> chunk_changed_;
    std::vector<std::array<double, 3>> chunk_sums_;
    std::vector<std::size_t> chunk_counts_;

    std::vector<std::array<double, 3>> sums_;
    std::vector<std::size_t> counts_;
    double objective_ = 0.0;
    double max_move2_ = 0.0;
};

}  // namespace

RegionDecomposition kmeans_segment_lab(const LabImage& lab, const KmeansOptions& opts,
                                       KmeansTrace* trace) {
    Kmeans3 km(lab.data.data(), lab.pixels(), opts);
    km.run(trace);
    RegionDecomposition out;
    out.k = opts.k;
    out.labels.width = lab.width;
    out.labels.height = lab.height;
    out.labels.data = km.take_labels();
    return out;
}

RegionDecomposition kmeans_segment(const RgbImage& img, const KmeansOptions& opts,
                                   KmeansTrace* trace) {
    return kmeans_segment_lab(rgb_to_lab(img), opts, trace);
}

std::vector<RegionStats> region_stats(const LabelMap& labels, const LabImage& lab,
                                      const DepthMap& depth) {
    require_same_size(labels.width, labels.height, lab.width, lab.height,
                      "region_stats labels vs lab");
    require_same_size(labels.width, labels.height, depth.width(), depth.height(),
                      "region_stats labels vs depth");
    const int w = labels.width, h = labels.height;
    int k = 0;
    for (const auto v : labels.data) k = std::max(k, int(v) + 1);

    std::vector<RegionStats> stats(k);
    std::vector<double> sx(k, 0), sy(k, 0), sd(k, 0);
    std::vector<std::array<double, 3>> slab(k, {0, 0, 0});
    const double inv_w = w > 1 ? 1.0 / (w - 1) : 0.0;
    const double inv_h = h > 1 ? 1.0 / (h - 1) : 0.0;
    std::size_t i = 0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x, ++i) {
            const int r = labels.data[i];
            stats[r].pixel_count++;
            sx[r] += w > 1 ? x * inv_w : 0.5;
            sy[r] += h > 1 ? y * inv_h : 0.5;
            sd[r] += depth.values.data[i];
            slab[r][0] += lab.data[3 * i];
            slab[r][1] += lab.data[3 * i + 1];
            slab[r][2] += lab.data[3 * i + 2];
        }
    }
    const double total = double(w) * h;
    for (int r = 0; r < k; ++r) {
        const double n = double(stats[r].pixel_count);
        if (n == 0) continue;
        stats[r].area_ratio = n / total;
        stats[r].centroid_x = sx[r] / n;
        stats[r].centroid_y = sy[r] / n;
        stats[r].mean_depth = sd[r] / n;
        for (int c = 0; c < 3; ++c) stats[r].mean_lab[c] = slab[r][c] / n;
    }
    return stats;
}

PointClustering kmeans_points(std::span<const std::array<double, 3>> points, int k,
                              std::uint32_t seed) {
    std::vector<float> flat(points.size() * 3);
    for (std::size_t i = 0; i < points.size(); ++i)
        for (int c = 0; c < 3; ++c) flat[3 * i + c] = float(points[i][c]);
    KmeansOptions opts;
    opts.k = k;
    opts.seed = seed;
    opts.threads = 1;
    Kmeans3 km(flat.data(), points.size(), opts);
    km.run(nullptr);
    PointClustering out;
    out.centroids = km.centroids();
    const auto labels = km.take_labels();
    out.labels.assign(labels.begin(), labels.end());
    return out;
}

}  // namespace salmap
