#pragma once

// Deterministic synthetic scenes shared by the unit and acceptance suites.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "salmap/types.hpp"

namespace salmap::testing {

struct Scene {
    RgbImage rgb;
    DepthMap depth;
    GroundTruthMask gt;
};

/// Near bright disk on a far, textured two-tone background with a depth
/// gradient. The disk is the ground-truth object.
inline Scene disk_scene(int w, int h) {
    Scene s;
    s.rgb = RgbImage(w, h);
    s.depth.polarity = DepthPolarity::NearIsLow;
    s.depth.values = GrayImage(w, h);
    s.gt.width = w;
    s.gt.height = h;
    s.gt.data.assign(std::size_t(w) * h, 0);

    const double cx = w / 2.0, cy = h / 2.0;
    const double radius = std::min(w, h) * 0.19;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = std::size_t(y) * w + x;
            const double dx = x - cx, dy = y - cy;
            const bool inside = dx * dx + dy * dy <= radius * radius;
            if (inside) {
                s.rgb.at(x, y, 0) = 0.85f;
                s.rgb.at(x, y, 1) = 0.45f;
                s.rgb.at(x, y, 2) = 0.20f;
                s.depth.values.data[i] = 0.15f;
                s.gt.data[i] = 1;
            } else {
                const bool check = ((x / 16) + (y / 16)) % 2 == 0;
                const float grad = 0.08f * float(x) / float(w);
                s.rgb.at(x, y, 0) = (check ? 0.12f : 0.20f) + grad;
                s.rgb.at(x, y, 1) = (check ? 0.18f : 0.28f) + grad;
                s.rgb.at(x, y, 2) = (check ? 0.30f : 0.42f) + grad;
                s.depth.values.data[i] = 0.65f + 0.25f * float(y) / float(h);
            }
        }
    }
    return s;
}

/// Bright gradient sky with one small dark blob (the target).
inline Scene sky_blob_frame(int w, int h, int blob_x, int blob_y, int blob_size = 7) {
    Scene s;
    s.rgb = RgbImage(w, h);
    s.depth.polarity = DepthPolarity::NearIsLow;
    s.depth.values = GrayImage(w, h);
    s.gt.width = w;
    s.gt.height = h;
    s.gt.data.assign(std::size_t(w) * h, 0);

    for (int y = 0; y < h; ++y) {
        const float t = float(y) / float(h);
        for (int x = 0; x < w; ++x) {
            s.rgb.at(x, y, 0) = 0.58f + 0.20f * t;
            s.rgb.at(x, y, 1) = 0.66f + 0.18f * t;
            s.rgb.at(x, y, 2) = 0.80f + 0.12f * t;
        }
    }
    for (int y = blob_y; y < blob_y + blob_size; ++y) {
        for (int x = blob_x; x < blob_x + blob_size; ++x) {
            if (x < 0 || y < 0 || x >= w || y >= h) continue;
            s.rgb.at(x, y, 0) = 0.08f;
            s.rgb.at(x, y, 1) = 0.08f;
            s.rgb.at(x, y, 2) = 0.10f;
            s.gt.data[std::size_t(y) * w + x] = 1;
        }
    }
    return s;
}

/// Unique scratch directory under the system temp root, removed on scope exit.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        auto base = std::filesystem::temp_directory_path();
        for (int i = 0;; ++i) {
            path_ = base / (tag + "-" + std::to_string(i));
            std::error_code ec;
            if (std::filesystem::create_directory(path_, ec)) break;
        }
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace salmap::testing
