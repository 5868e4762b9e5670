#include "ortho3d/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <png.h>

#include "ortho3d/parallel.hpp"

namespace ortho3d {

const char* errc_name(Errc code) {
    switch (code) {
    case Errc::ConfigError: return "ConfigError";
    case Errc::FileNotFound: return "FileNotFound";
    case Errc::UnsupportedFormat: return "UnsupportedFormat";
    case Errc::CorruptImage: return "CorruptImage";
    case Errc::InvalidSigma: return "InvalidSigma";
    case Errc::ImageTooSmall: return "ImageTooSmall";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NoCornersFound: return "NoCornersFound";
    case Errc::NoSilhouette: return "NoSilhouette";
    case Errc::SelfIntersectingContour: return "SelfIntersectingContour";
    case Errc::TooFewVertices: return "TooFewVertices";
    case Errc::DuplicateAxis: return "DuplicateAxis";
    case Errc::TooFewEnvelopes: return "TooFewEnvelopes";
    case Errc::InconsistentViews: return "InconsistentViews";
    case Errc::EmptyIntersection: return "EmptyIntersection";
    case Errc::EmptyGrid: return "EmptyGrid";
    case Errc::TooFewPoints: return "TooFewPoints";
    case Errc::AllCoplanar: return "AllCoplanar";
    case Errc::NumericalFailure: return "NumericalFailure";
    case Errc::DegenerateTetrahedron: return "DegenerateTetrahedron";
    case Errc::VertexNotInTriangulation: return "VertexNotInTriangulation";
    case Errc::EmptyCrust: return "EmptyCrust";
    case Errc::IoError: return "IoError";
    }
    return "UnknownError";
}

namespace {

// Skips PGM whitespace and '#' comment lines.
void skip_pgm_space(std::istream& in) {
    for (;;) {
        int c = in.peek();
        if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else if (c != EOF && std::isspace(c)) {
            in.get();
        } else {
            return;
        }
    }
}

long read_pgm_int(std::istream& in, const std::string& path) {
    skip_pgm_space(in);
    long v = 0;
    if (!(in >> v)) throw Error(Errc::CorruptImage, path + ": malformed PGM header");
    return v;
}

GrayImage load_pgm(const std::string& path, bool binary) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::FileNotFound, path + ": cannot open");
    char magic[2];
    in.read(magic, 2);

    long w = read_pgm_int(in, path);
    long h = read_pgm_int(in, path);
    long maxval = read_pgm_int(in, path);
    if (w <= 0 || h <= 0) throw Error(Errc::CorruptImage, path + ": non-positive PGM dimensions");
    if (maxval <= 0 || maxval > 65535) throw Error(Errc::CorruptImage, path + ": PGM maxval out of range");

    GrayImage img;
    img.width = static_cast<int>(w);
    img.height = static_cast<int>(h);
    img.data.resize(static_cast<std::size_t>(w) * h);
    const double inv = 1.0 / static_cast<double>(maxval);

    if (binary) {
        in.get(); // single whitespace after maxval
        int bytes = maxval > 255 ? 2 : 1;
        std::vector<unsigned char> raw(img.data.size() * bytes);
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
        if (static_cast<std::size_t>(in.gcount()) != raw.size())
            throw Error(Errc::CorruptImage, path + ": PGM payload shorter than width*height");
        for (std::size_t i = 0; i < img.data.size(); ++i) {
            long v = bytes == 2 ? (raw[2 * i] << 8 | raw[2 * i + 1]) : raw[i]; // P5 multi-byte is big-endian
            img.data[i] = static_cast<double>(v) * inv;
        }
    } else {
        for (std::size_t i = 0; i < img.data.size(); ++i) {
            long v = 0;
            skip_pgm_space(in);
            if (!(in >> v)) throw Error(Errc::CorruptImage, path + ": PGM payload shorter than width*height");
            if (v < 0 || v > maxval) throw Error(Errc::CorruptImage, path + ": PGM sample exceeds maxval");
            img.data[i] = static_cast<double>(v) * inv;
        }
    }
    return img;
}

struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;
    std::FILE* fp = nullptr;

    ~PngReader() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (fp) std::fclose(fp);
    }
};

GrayImage load_png(const std::string& path) {
    PngReader r;
    r.fp = std::fopen(path.c_str(), "rb");
    if (!r.fp) throw Error(Errc::FileNotFound, path + ": cannot open");

    r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!r.png) throw Error(Errc::IoError, path + ": png_create_read_struct failed");
    r.info = png_create_info_struct(r.png);
    if (!r.info) throw Error(Errc::IoError, path + ": png_create_info_struct failed");

    if (setjmp(png_jmpbuf(r.png))) throw Error(Errc::CorruptImage, path + ": libpng decode error");

    png_init_io(r.png, r.fp);
    png_read_info(r.png, r.info);

    png_uint_32 w = png_get_image_width(r.png, r.info);
    png_uint_32 h = png_get_image_height(r.png, r.info);
    int depth = png_get_bit_depth(r.png, r.info);
    int color = png_get_color_type(r.png, r.info);

    if (depth > 8) throw Error(Errc::UnsupportedFormat, path + ": only 8-bit PNG is supported");

    // Normalize every variant to 8-bit RGB so one luma path handles all of them.
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(r.png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(r.png);
    if (png_get_valid(r.png, r.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(r.png);
    if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA) png_set_gray_to_rgb(r.png);
    png_set_strip_alpha(r.png);
    png_set_interlace_handling(r.png);
    png_read_update_info(r.png, r.info);

    if (png_get_rowbytes(r.png, r.info) != w * 3)
        throw Error(Errc::UnsupportedFormat, path + ": unexpected PNG row layout");

    std::vector<unsigned char> pixels(static_cast<std::size_t>(w) * h * 3);
    std::vector<png_bytep> rows(h);
    for (png_uint_32 y = 0; y < h; ++y) rows[y] = pixels.data() + static_cast<std::size_t>(y) * w * 3;
    png_read_image(r.png, rows.data());
    png_read_end(r.png, nullptr);

    GrayImage img;
    img.width = static_cast<int>(w);
    img.height = static_cast<int>(h);
    img.data.resize(static_cast<std::size_t>(w) * h);
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        double lum = 0.299 * pixels[3 * i] + 0.587 * pixels[3 * i + 1] + 0.114 * pixels[3 * i + 2];
        img.data[i] = lum / 255.0;
    }
    return img;
}

} // namespace

GrayImage load_image(const std::string& path) {
    if (!std::filesystem::exists(path)) throw Error(Errc::FileNotFound, path + ": no such file");
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw Error(Errc::FileNotFound, path + ": cannot open");
    unsigned char head[8] = {};
    probe.read(reinterpret_cast<char*>(head), 8);
    std::streamsize got = probe.gcount();
    probe.close();

    static const unsigned char png_sig[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
    if (got >= 8 && std::equal(png_sig, png_sig + 8, head)) return load_png(path);
    if (got >= 2 && head[0] == 'P' && head[1] == '5') return load_pgm(path, true);
    if (got >= 2 && head[0] == 'P' && head[1] == '2') return load_pgm(path, false);
    throw Error(Errc::UnsupportedFormat, path + ": not a PGM (P2/P5) or PNG file");
}

double gaussian_weight(int x, int y, double sigma) {
    double s2 = sigma * sigma;
    return 1.0 / (2.0 * std::numbers::pi * s2) * std::exp(-(x * x + y * y) / (2.0 * s2));
}

Kernel gaussian_kernel(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw Error(Errc::InvalidSigma, "sigma must be finite and > 0");
    Kernel k;
    k.radius = static_cast<int>(std::ceil(3.0 * sigma));
    int side = 2 * k.radius + 1;
    k.weights.resize(static_cast<std::size_t>(side) * side);
    double sum = 0.0;
    for (int dy = -k.radius; dy <= k.radius; ++dy)
        for (int dx = -k.radius; dx <= k.radius; ++dx) {
            double w = gaussian_weight(dx, dy, sigma);
            k.weights[static_cast<std::size_t>(dy + k.radius) * side + (dx + k.radius)] = w;
            sum += w;
        }
    for (double& w : k.weights) w /= sum;
    return k;
}

void gradients(const GrayImage& img, ScalarField& ix, ScalarField& iy) {
    if (img.width < 3 || img.height < 3)
        throw Error(Errc::ImageTooSmall, "gradients need at least a 3x3 image");
    ix = ScalarField::zeros(img.width, img.height);
    iy = ScalarField::zeros(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            if (x == 0)
                ix.at(x, y) = img.at(1, y) - img.at(0, y);
            else if (x == img.width - 1)
                ix.at(x, y) = img.at(x, y) - img.at(x - 1, y);
            else
                ix.at(x, y) = (img.at(x + 1, y) - img.at(x - 1, y)) / 2.0;

            if (y == 0)
                iy.at(x, y) = img.at(x, 1) - img.at(x, 0);
            else if (y == img.height - 1)
                iy.at(x, y) = img.at(x, y) - img.at(x, y - 1);
            else
                iy.at(x, y) = (img.at(x, y + 1) - img.at(x, y - 1)) / 2.0;
        }
    }
}

ScalarField convolve(const ScalarField& field, const Kernel& k, int workers) {
    ScalarField out = ScalarField::zeros(field.width, field.height);
    const int w = field.width;
    const int h = field.height;
    const int r = k.radius;
    parallel_for(static_cast<std::size_t>(h), workers, [&](std::size_t y0, std::size_t y1) {
        for (std::size_t y = y0; y < y1; ++y) {
            for (int x = 0; x < w; ++x) {
                double sum = 0.0;
                for (int dy = -r; dy <= r; ++dy) {
                    int sy = std::clamp(static_cast<int>(y) + dy, 0, h - 1);
                    for (int dx = -r; dx <= r; ++dx) {
                        int sx = std::clamp(x + dx, 0, w - 1);
                        sum += k.at(dx, dy) * field.at(sx, sy);
                    }
                }
                out.at(x, static_cast<int>(y)) = sum;
            }
        }
    });
    return out;
}

} // namespace ortho3d
