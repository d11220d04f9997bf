#include "raster_io.hpp"

#include <png.h>

#include <cctype>
#include <cstdio>
#include <cstring>
#include <memory>
#include <string>

#include "salmap/errors.hpp"

namespace fs = std::filesystem;

namespace salmap::detail {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// ---------------------------------------------------------------- PNG read

struct PngReadCtx {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngReadCtx() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    }
};

// Returns false on libpng longjmp. All C++ containers live in the caller so
// nothing with a destructor is skipped by the jump.
bool png_read_impl(std::FILE* fp, RawRaster& out, std::vector<png_bytep>& rows,
                   std::vector<std::uint8_t>& raw, PngReadCtx& ctx) {
    ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png) return false;
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) return false;
    if (setjmp(png_jmpbuf(ctx.png))) return false;

    png_init_io(ctx.png, fp);
    png_read_info(ctx.png, ctx.info);

    png_uint_32 w = 0, h = 0;
    int bit_depth = 0, color_type = 0;
    png_get_IHDR(ctx.png, ctx.info, &w, &h, &bit_depth, &color_type, nullptr, nullptr,
                 nullptr);

    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(ctx.png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
        png_set_expand_gray_1_2_4_to_8(ctx.png);
    if (png_get_valid(ctx.png, ctx.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(ctx.png);
    png_set_strip_alpha(ctx.png);

    png_read_update_info(ctx.png, ctx.info);
    png_get_IHDR(ctx.png, ctx.info, &w, &h, &bit_depth, &color_type, nullptr, nullptr,
                 nullptr);

    const int channels = png_get_channels(ctx.png, ctx.info);
    const std::size_t rowbytes = png_get_rowbytes(ctx.png, ctx.info);

    out.width = int(w);
    out.height = int(h);
    out.channels = channels;
    out.max_value = bit_depth == 16 ? 65535 : 255;

    raw.resize(rowbytes * h);
    rows.resize(h);
    for (png_uint_32 y = 0; y < h; ++y) rows[y] = raw.data() + y * rowbytes;

    png_read_image(ctx.png, rows.data());
    png_read_end(ctx.png, nullptr);

    out.data.resize(std::size_t(w) * h * channels);
    if (bit_depth == 16) {
        // PNG stores 16-bit samples big-endian
        for (std::size_t i = 0; i < out.data.size(); ++i)
            out.data[i] = std::uint16_t(raw[2 * i] << 8 | raw[2 * i + 1]);
    } else {
        for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = raw[i];
    }
    return true;
}

RawRaster read_png(const fs::path& path, std::FILE* fp) {
    RawRaster out;
    std::vector<png_bytep> rows;
    std::vector<std::uint8_t> raw;
    PngReadCtx ctx;
    if (!png_read_impl(fp, out, rows, raw, ctx))
        throw IoError(IoErrorKind::Decode, path.string(), "failed to decode PNG");
    if (out.width <= 0 || out.height <= 0)
        throw IoError(IoErrorKind::ZeroDimension, path.string(), "zero-dimension image");
    if (out.channels != 1 && out.channels != 3)
        throw IoError(IoErrorKind::UnsupportedFormat, path.string(),
                      "unsupported channel count " + std::to_string(out.channels));
    return out;
}

// ---------------------------------------------------------------- PNG write

struct PngWriteCtx {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngWriteCtx() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    }
};

bool png_write_impl(std::FILE* fp, int width, int height, int channels,
                    const std::uint8_t* data, std::vector<png_bytep>& rows,
                    PngWriteCtx& ctx) {
    ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png) return false;
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) return false;
    if (setjmp(png_jmpbuf(ctx.png))) return false;

    png_init_io(ctx.png, fp);
    png_set_IHDR(ctx.png, ctx.info, width, height, 8,
                 channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_set_compression_level(ctx.png, 6);

    rows.resize(height);
    const std::size_t rowbytes = std::size_t(width) * channels;
    for (int y = 0; y < height; ++y)
        rows[y] = const_cast<png_bytep>(data + y * rowbytes);

    png_write_info(ctx.png, ctx.info);
    png_write_image(ctx.png, rows.data());
    png_write_end(ctx.png, nullptr);
    return true;
}

void write_png(const fs::path& path, int width, int height, int channels,
               const std::uint8_t* data) {
    const fs::path tmp = path.string() + ".tmp";
    {
        FilePtr fp(std::fopen(tmp.string().c_str(), "wb"));
        if (!fp)
            throw IoError(IoErrorKind::Unwritable, path.string(), "cannot open for writing");
        std::vector<png_bytep> rows;
        PngWriteCtx ctx;
        if (!png_write_impl(fp.get(), width, height, channels, data, rows, ctx)) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError(IoErrorKind::Unwritable, path.string(), "PNG encode failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError(IoErrorKind::Unwritable, path.string(), "cannot replace output file");
    }
}

// ---------------------------------------------------------------- PNM read

int pnm_next_int(std::FILE* fp, const fs::path& path) {
    int c;
    for (;;) {
        c = std::fgetc(fp);
        if (c == '#') {  // comment to end of line
            while (c != EOF && c != '\n') c = std::fgetc(fp);
        } else if (c != EOF && !std::isspace(c)) {
            break;
        } else if (c == EOF) {
            throw IoError(IoErrorKind::Decode, path.string(), "truncated PNM header");
        }
    }
    int value = 0;
    bool any = false;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        any = true;
        c = std::fgetc(fp);
    }
    if (!any) throw IoError(IoErrorKind::Decode, path.string(), "malformed PNM header");
    if (c != EOF) std::ungetc(c, fp);  // the terminator is not ours to eat
    return value;
}

RawRaster read_pnm(const fs::path& path, std::FILE* fp, char kind) {
    RawRaster out;
    out.channels = kind == '6' ? 3 : 1;
    out.width = pnm_next_int(fp, path);
    out.height = pnm_next_int(fp, path);
    out.max_value = pnm_next_int(fp, path);
    if (out.width <= 0 || out.height <= 0)
        throw IoError(IoErrorKind::ZeroDimension, path.string(), "zero-dimension image");
    if (out.max_value <= 0 || out.max_value > 65535)
        throw IoError(IoErrorKind::UnsupportedFormat, path.string(),
                      "unsupported PNM maxval " + std::to_string(out.max_value));
    const int c = std::fgetc(fp);  // single whitespace after maxval
    if (c == EOF)
        throw IoError(IoErrorKind::Decode, path.string(), "truncated PNM header");

    const std::size_t n = std::size_t(out.width) * out.height * out.channels;
    out.data.resize(n);
    const int bytes_per = out.max_value > 255 ? 2 : 1;
    std::vector<std::uint8_t> raw(n * bytes_per);
    if (std::fread(raw.data(), 1, raw.size(), fp) != raw.size())
        throw IoError(IoErrorKind::Decode, path.string(), "truncated PNM data");
    if (bytes_per == 2) {
        for (std::size_t i = 0; i < n; ++i)
            out.data[i] = std::uint16_t(raw[2 * i] << 8 | raw[2 * i + 1]);  // big-endian
    } else {
        for (std::size_t i = 0; i < n; ++i) out.data[i] = raw[i];
    }
    return out;
}

}  // namespace

RawRaster read_raster(const fs::path& path) {
    FilePtr fp(std::fopen(path.string().c_str(), "rb"));
    if (!fp) throw IoError(IoErrorKind::Unreadable, path.string(), "cannot open file");

    unsigned char magic[2] = {0, 0};
    if (std::fread(magic, 1, 2, fp.get()) != 2)
        throw IoError(IoErrorKind::Decode, path.string(), "file too short");
    std::rewind(fp.get());

    if (magic[0] == 0x89 && magic[1] == 'P') return read_png(path, fp.get());
    if (magic[0] == 'P' && (magic[1] == '5' || magic[1] == '6')) {
        std::fgetc(fp.get());
        char kind = char(std::fgetc(fp.get()));
        return read_pnm(path, fp.get(), kind);
    }
    throw IoError(IoErrorKind::UnsupportedFormat, path.string(),
                  "not a PNG or binary PGM/PPM file");
}

void write_png_gray8(const fs::path& path, int width, int height,
                     const std::uint8_t* data) {
    write_png(path, width, height, 1, data);
}

void write_png_rgb8(const fs::path& path, int width, int height,
                    const std::uint8_t* data) {
    write_png(path, width, height, 3, data);
}

}  // namespace salmap::detail
