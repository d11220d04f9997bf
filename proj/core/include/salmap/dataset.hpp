#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "salmap/errors.hpp"

namespace salmap {

struct DatasetEntry {
    std::string id;
    std::filesystem::path rgb;
    std::filesystem::path depth;
    std::optional<std::filesystem::path> gt;
};

/// Ordered (RGB, depth, optional ground truth) triples, sorted by id.
struct DatasetIndex {
    std::vector<DatasetEntry> entries;
};

/// Directory and stem-matching rules. Depth/gt files are matched by
/// `<stem><suffix>.<ext>` against the RGB stem, with any supported extension.
struct DatasetLayout {
    std::string rgb_dir = "rgb";
    std::string depth_dir = "depth";
    std::string gt_dir = "gt";
    std::string depth_suffix;
    std::string gt_suffix;

    static DatasetLayout generic() { return {}; }
    static DatasetLayout rgbd1() { return {"RGB", "Depth", "GT", "", ""}; }
    static DatasetLayout rgbd2() { return {"RGB", "depth", "GT", "", ""}; }
};

/// Enumerate the dataset under root. Every RGB image must have a depth
/// partner; a missing ground truth is allowed.
DatasetIndex scan_dataset(const std::filesystem::path& root,
                          const DatasetLayout& layout = DatasetLayout::generic());

/// Sorted list of raster files directly inside a directory (frame input).
std::vector<std::filesystem::path> list_rasters(const std::filesystem::path& dir);

}  // namespace salmap
