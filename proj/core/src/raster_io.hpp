#pragma once

// Private decode/encode layer. PNG (8/16-bit gray, gray+alpha, RGB, RGBA,
// palette) via libpng; binary PGM/PPM (P5/P6) hand-rolled. Values are kept
// at their stored bit depth so callers can scale bit-exactly.

#include <cstdint>
#include <filesystem>
#include <vector>

namespace salmap::detail {

struct RawRaster {
    int width = 0;
    int height = 0;
    int channels = 0;   // 1 or 3 (alpha already stripped)
    int max_value = 0;  // 255 or 65535
    std::vector<std::uint16_t> data;  // interleaved, row-major
};

/// Decode by magic bytes. Throws salmap::IoError.
RawRaster read_raster(const std::filesystem::path& path);

/// 8-bit grayscale / RGB PNG writers. Atomic: temp file + rename.
void write_png_gray8(const std::filesystem::path& path, int width, int height,
                     const std::uint8_t* data);
void write_png_rgb8(const std::filesystem::path& path, int width, int height,
                    const std::uint8_t* data);

}  // namespace salmap::detail
