#pragma once

#include <filesystem>

#include "salmap/types.hpp"

namespace salmap {

/// Load an 8/16-bit PNG or binary PGM/PPM as an RGB raster in [0,1].
/// Grayscale inputs are promoted to three identical channels.
RgbImage load_rgb(const std::filesystem::path& path);

/// Load a single-channel raster and min-max normalize it to [0,1].
/// A constant raster maps to all zeros. Multi-channel input is an error.
DepthMap load_depth(const std::filesystem::path& path, DepthPolarity polarity);

/// Load a single-channel raster as-is, scaled by its format maximum.
SaliencyMap load_gray(const std::filesystem::path& path);

/// Load a mask, binarizing at 0.5 (channel mean for color masks).
GroundTruthMask load_mask(const std::filesystem::path& path);

/// Write an 8-bit grayscale PNG; values stored as round(v*255).
/// The write is atomic (temp file + rename).
void save_saliency(const SaliencyMap& map, const std::filesystem::path& path);

/// Write an 8-bit RGB PNG, same quantization and atomicity as save_saliency.
void save_rgb(const RgbImage& img, const std::filesystem::path& path);

/// Debug export: region index modulo 256 as 8-bit grayscale PNG.
void save_labels(const LabelMap& labels, const std::filesystem::path& path);

}  // namespace salmap
