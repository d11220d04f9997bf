#include "salmap/dataset.hpp"

#include <algorithm>
#include <array>

namespace fs = std::filesystem;

namespace salmap {

namespace {

constexpr std::array<const char*, 6> kExtensions = {".png", ".pgm", ".ppm",
                                                    ".PNG", ".PGM", ".PPM"};

bool has_raster_extension(const fs::path& p) {
    const auto ext = p.extension().string();
    return std::find(kExtensions.begin(), kExtensions.end(), ext) != kExtensions.end();
}

std::optional<fs::path> find_match(const fs::path& dir, const std::string& stem,
                                   const std::string& suffix) {
    for (const char* ext : kExtensions) {
        fs::path candidate = dir / (stem + suffix + ext);
        if (fs::exists(candidate)) return candidate;
    }
    return std::nullopt;
}

}  // namespace

DatasetIndex scan_dataset(const fs::path& root, const DatasetLayout& layout) {
    if (!fs::is_directory(root))
        throw IoError(IoErrorKind::Unreadable, root.string(), "dataset root not found");
    const fs::path rgb_dir = root / layout.rgb_dir;
    if (!fs::is_directory(rgb_dir))
        throw IoError(IoErrorKind::Unreadable, rgb_dir.string(), "rgb directory not found");
    const fs::path depth_dir = root / layout.depth_dir;
    const fs::path gt_dir = root / layout.gt_dir;

    DatasetIndex index;
    std::vector<std::string> missing_depth;
    for (const auto& entry : fs::directory_iterator(rgb_dir)) {
        if (!entry.is_regular_file() || !has_raster_extension(entry.path())) continue;
        DatasetEntry item;
        item.id = entry.path().stem().string();
        item.rgb = entry.path();
        if (auto depth = find_match(depth_dir, item.id, layout.depth_suffix)) {
            item.depth = *depth;
        } else {
            missing_depth.push_back(item.id);
            continue;
        }
        item.gt = find_match(gt_dir, item.id, layout.gt_suffix);
        index.entries.push_back(std::move(item));
    }
    if (!missing_depth.empty()) {
        std::sort(missing_depth.begin(), missing_depth.end());
        std::string ids;
        for (const auto& id : missing_depth) ids += (ids.empty() ? "" : ", ") + id;
        throw IoError(IoErrorKind::Unreadable, root.string(),
                      "missing depth map for: " + ids);
    }
    std::sort(index.entries.begin(), index.entries.end(),
              [](const DatasetEntry& a, const DatasetEntry& b) { return a.id < b.id; });
    return index;
}

std::vector<fs::path> list_rasters(const fs::path& dir) {
    if (!fs::is_directory(dir))
        throw IoError(IoErrorKind::Unreadable, dir.string(), "directory not found");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && has_raster_extension(entry.path()))
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    return files;
}

}  // namespace salmap
