#include "lulc/image_io.hpp"

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>

#include <jpeglib.h>
#include <png.h>

#include "json.hpp"
#include "lulc/color_json.hpp"
#include "lulc/error.hpp"

namespace lulc {

namespace {

constexpr std::uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

struct PngReadCursor {
    std::span<const std::uint8_t> data;
    std::size_t offset = 0;
};

void png_read_from_span(png_structp png, png_bytep out, png_size_t length) {
    auto* cursor = static_cast<PngReadCursor*>(png_get_io_ptr(png));
    if (cursor->offset + length > cursor->data.size()) {
        png_error(png, "unexpected end of PNG stream");
    }
    std::memcpy(out, cursor->data.data() + cursor->offset, length);
    cursor->offset += length;
}

void png_write_to_vector(png_structp png, png_bytep data, png_size_t length) {
    auto* out = static_cast<Bytes*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + length);
}

void png_flush_noop(png_structp) {}

// libpng reports errors through longjmp; messages are captured here so the
// C++ side can throw after unwinding back to setjmp.
struct PngErrorSink {
    std::string message;
};

void png_on_error(png_structp png, png_const_charp msg) {
    auto* sink = static_cast<PngErrorSink*>(png_get_error_ptr(png));
    sink->message = msg ? msg : "libpng error";
    png_longjmp(png, 1);
}

void png_on_warning(png_structp, png_const_charp) {}

struct DecodedPng {
    std::size_t width = 0;
    std::size_t height = 0;
    int channels = 0;
    std::vector<std::uint8_t> data;
};

enum class PngTarget { rgb, gray_exact };

// Volatile-free by construction: everything modified between setjmp and a
// possible longjmp lives in heap objects referenced through pointers.
DecodedPng decode_png(std::span<const std::uint8_t> bytes, PngTarget target) {
    PngErrorSink sink;
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &sink, png_on_error, png_on_warning);
    if (!png) {
        throw FormatError("png: cannot allocate read struct");
    }
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw FormatError("png: cannot allocate info struct");
    }
    auto out = std::make_unique<DecodedPng>();
    auto rows = std::make_unique<std::vector<png_bytep>>();
    PngReadCursor cursor{bytes, 0};

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw FormatError("png: " + sink.message);
    }
    png_set_read_fn(png, &cursor, png_read_from_span);
    png_read_info(png, info);

    const png_uint_32 width = png_get_image_width(png, info);
    const png_uint_32 height = png_get_image_height(png, info);
    const int color_type = png_get_color_type(png, info);
    const int bit_depth = png_get_bit_depth(png, info);

    if (target == PngTarget::gray_exact) {
        if (color_type != PNG_COLOR_TYPE_GRAY || bit_depth != 8) {
            png_destroy_read_struct(&png, &info, nullptr);
            throw FormatError("png: expected an 8-bit single-channel raster");
        }
    } else {
        if (bit_depth == 16) {
            png_set_scale_16(png);
        }
        if (color_type == PNG_COLOR_TYPE_PALETTE) {
            png_set_palette_to_rgb(png);
        }
        if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
            png_set_expand_gray_1_2_4_to_8(png);
        }
        if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
            png_set_gray_to_rgb(png);
        }
        if (color_type & PNG_COLOR_MASK_ALPHA) {
            png_set_strip_alpha(png);
        }
    }
    png_set_interlace_handling(png);
    png_read_update_info(png, info);

    out->width = width;
    out->height = height;
    out->channels = png_get_channels(png, info);
    const std::size_t stride = png_get_rowbytes(png, info);
    out->data.resize(stride * height);
    rows->resize(height);
    for (png_uint_32 y = 0; y < height; ++y) {
        (*rows)[y] = out->data.data() + y * stride;
    }
    png_read_image(png, rows->data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    const int expected = target == PngTarget::gray_exact ? 1 : 3;
    if (out->channels != expected || stride != width * static_cast<std::size_t>(expected)) {
        throw FormatError("png: unexpected channel layout after transforms");
    }
    return std::move(*out);
}

Bytes encode_png(std::size_t width, std::size_t height, int color_type, std::span<const std::uint8_t> data) {
    if (width == 0 || height == 0) {
        throw DimensionError("png: cannot encode an empty raster");
    }
    const std::size_t channels = color_type == PNG_COLOR_TYPE_RGB ? 3 : 1;
    if (data.size() != width * height * channels) {
        throw DimensionError("png: buffer size does not match dimensions");
    }
    PngErrorSink sink;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &sink, png_on_error, png_on_warning);
    if (!png) {
        throw FormatError("png: cannot allocate write struct");
    }
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw FormatError("png: cannot allocate info struct");
    }
    auto out = std::make_unique<Bytes>();
    auto rows = std::make_unique<std::vector<png_const_bytep>>(height);
    for (std::size_t y = 0; y < height; ++y) {
        (*rows)[y] = data.data() + y * width * channels;
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw FormatError("png: " + sink.message);
    }
    png_set_write_fn(png, out.get(), png_write_to_vector, png_flush_noop);
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8, color_type,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, const_cast<png_bytepp>(rows->data()));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return std::move(*out);
}

struct JpegErrorManager {
    jpeg_error_mgr base;
    std::jmp_buf jump;
    char message[JMSG_LENGTH_MAX];
};

void jpeg_on_error(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, err->message);
    std::longjmp(err->jump, 1);
}

RgbImage decode_jpeg(std::span<const std::uint8_t> bytes) {
    jpeg_decompress_struct cinfo{};
    JpegErrorManager err{};
    cinfo.err = jpeg_std_error(&err.base);
    err.base.error_exit = jpeg_on_error;
    auto buffer = std::make_unique<std::vector<std::uint8_t>>();

    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw FormatError(std::string("jpeg: ") + err.message);
    }
    jpeg_create_decompress(&cinfo);
    jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);

    const std::size_t width = cinfo.output_width;
    const std::size_t height = cinfo.output_height;
    const std::size_t stride = width * static_cast<std::size_t>(cinfo.output_components);
    buffer->resize(stride * height);
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row = buffer->data() + cinfo.output_scanline * stride;
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);

    if (width == 0 || height == 0) {
        throw DimensionError("jpeg: zero-dimension image");
    }
    std::vector<RgbColor> pixels(width * height);
    for (std::size_t p = 0; p < pixels.size(); ++p) {
        const auto* px = buffer->data() + 3 * p;
        pixels[p] = RgbColor::from_bytes(px[0], px[1], px[2]);
    }
    return RgbImage(width, height, std::move(pixels));
}

} // namespace

ImageFormat sniff_format(std::span<const std::uint8_t> bytes) {
    if (bytes.size() >= 8 && std::memcmp(bytes.data(), kPngSignature, 8) == 0) {
        return ImageFormat::png;
    }
    if (bytes.size() >= 3 && bytes[0] == 0xFF && bytes[1] == 0xD8 && bytes[2] == 0xFF) {
        return ImageFormat::jpeg;
    }
    return ImageFormat::unknown;
}

RgbImage decode_image(std::span<const std::uint8_t> bytes) {
    switch (sniff_format(bytes)) {
    case ImageFormat::png: {
        const auto png = decode_png(bytes, PngTarget::rgb);
        if (png.width == 0 || png.height == 0) {
            throw DimensionError("png: zero-dimension image");
        }
        std::vector<RgbColor> pixels(png.width * png.height);
        for (std::size_t p = 0; p < pixels.size(); ++p) {
            const auto* px = png.data.data() + 3 * p;
            pixels[p] = RgbColor::from_bytes(px[0], px[1], px[2]);
        }
        return RgbImage(png.width, png.height, std::move(pixels));
    }
    case ImageFormat::jpeg:
        return decode_jpeg(bytes);
    case ImageFormat::unknown:
        break;
    }
    throw FormatError("image stream is neither PNG nor JPEG");
}

RgbImage load_image(const std::filesystem::path& path) {
    return decode_image(read_file(path));
}

Bytes read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw NotFoundError("cannot open " + path.string());
    }
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw Error("short write to " + path.string());
    }
}

Bytes encode_png_rgb(const RgbImage& image) {
    std::vector<std::uint8_t> data(image.size() * 3);
    const auto pixels = image.pixels();
    for (std::size_t p = 0; p < pixels.size(); ++p) {
        data[3 * p + 0] = to_byte(pixels[p].r);
        data[3 * p + 1] = to_byte(pixels[p].g);
        data[3 * p + 2] = to_byte(pixels[p].b);
    }
    return encode_png(image.width(), image.height(), PNG_COLOR_TYPE_RGB, data);
}

Bytes encode_png_gray(std::size_t width, std::size_t height, std::span<const std::uint8_t> values) {
    return encode_png(width, height, PNG_COLOR_TYPE_GRAY, values);
}

Bytes encode_mask_png(const BitMask& mask) {
    std::vector<std::uint8_t> values(mask.size());
    const auto bits = mask.bits();
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = bits[i] ? 255 : 0;
    }
    return encode_png_gray(mask.width(), mask.height(), values);
}

GrayImage decode_png_gray(std::span<const std::uint8_t> bytes) {
    if (sniff_format(bytes) != ImageFormat::png) {
        throw FormatError("expected a PNG stream");
    }
    auto png = decode_png(bytes, PngTarget::gray_exact);
    return GrayImage{png.width, png.height, std::move(png.data)};
}

void write_indexed_sidecar(const IndexedImage& image, const std::filesystem::path& dir) {
    const auto labels = image.labels();
    write_file(dir / kClusteredPng, encode_png_gray(image.width(), image.height(), labels));
    const auto text = colormap_to_json(image.colormap()).dump();
    write_file(dir / kClusteredMapJson, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

IndexedImage read_indexed_sidecar(const std::filesystem::path& dir) {
    auto gray = decode_png_gray(read_file(dir / kClusteredPng));
    const auto text = read_file(dir / kClusteredMapJson);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("clustered_map.json: ") + e.what());
    }
    return IndexedImage(gray.width, gray.height, std::move(gray.values), colormap_from_json(doc));
}

} // namespace lulc
