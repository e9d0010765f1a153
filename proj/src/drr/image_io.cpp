#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>

#include <png.h>

#include "xr2mesh/drr/drr.hpp"

namespace xrm::drr {

void save_pgm16(const DrrImage& image, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write image: " + path);

    const double vmax = image.values.empty()
                            ? 0.0
                            : *std::max_element(image.values.begin(), image.values.end());
    out << "P5\n" << image.width << ' ' << image.height << "\n65535\n";
    // Scale factor stored as a comment-free convention: readers recover
    // relative intensities only; absolute scale travels in the manifest.
    for (double v : image.values) {
        const double s = vmax > 0.0 ? v / vmax : 0.0;
        const auto q = static_cast<std::uint16_t>(std::lround(std::clamp(s, 0.0, 1.0) * 65535.0));
        const unsigned char bytes[2] = {static_cast<unsigned char>(q >> 8),
                                        static_cast<unsigned char>(q & 0xff)};
        out.write(reinterpret_cast<const char*>(bytes), 2);
    }
    if (!out) throw IoError("write failed: " + path);
}

DrrImage load_pgm16(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open image: " + path);

    std::string magic;
    in >> magic;
    if (magic != "P5") throw ParseError(path + ": not a binary PGM (P5) file");
    int w = 0, h = 0, maxval = 0;
    in >> w >> h >> maxval;
    if (!in || w <= 0 || h <= 0) throw ParseError(path + ": malformed PGM header");
    if (maxval != 65535) throw ParseError(path + ": expected 16-bit PGM");
    in.get();  // single whitespace after header

    DrrImage img;
    img.width = w;
    img.height = h;
    img.values.resize(static_cast<std::size_t>(w) * h);
    for (double& v : img.values) {
        unsigned char bytes[2];
        in.read(reinterpret_cast<char*>(bytes), 2);
        v = static_cast<double>((bytes[0] << 8) | bytes[1]) / 65535.0;
    }
    if (!in) throw ParseError(path + ": truncated PGM data");
    return img;
}

void save_png8(const DrrImage& image, const std::string& path) {
    std::unique_ptr<std::FILE, int (*)(std::FILE*)> fp(std::fopen(path.c_str(), "wb"),
                                                       &std::fclose);
    if (!fp) throw IoError("cannot write image: " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw IoError("libpng initialization failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("libpng write failed: " + path);
    }

    png_init_io(png, fp.get());
    png_set_IHDR(png, info, image.width, image.height, 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    std::vector<unsigned char> row(image.width);
    for (int j = 0; j < image.height; ++j) {
        for (int i = 0; i < image.width; ++i) {
            row[i] = static_cast<unsigned char>(
                std::lround(std::clamp(image.at(i, j), 0.0, 1.0) * 255.0));
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace xrm::drr
