#include "mocap/image.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <numeric>

namespace mocap {

namespace {

void check_dims(int w, int h) {
    if (w <= 0 || h <= 0)
        throw DimensionError("image: dimensions must be positive, got " +
                             std::to_string(w) + "x" + std::to_string(h));
}

}  // namespace

GrayFrame::GrayFrame(int w, int h, std::uint8_t fill) : width(w), height(h) {
    check_dims(w, h);
    pixels.assign(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill);
}

SilhouetteImage::SilhouetteImage(int w, int h) : width(w), height(h) {
    check_dims(w, h);
    mask.assign(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0);
}

std::size_t SilhouetteImage::count_foreground() const {
    return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 1));
}

void SilhouetteImage::clear() { std::fill(mask.begin(), mask.end(), 0); }

SilhouetteImage extract_silhouette(const GrayFrame& frame, const GrayFrame& background,
                                   int threshold) {
    SilhouetteImage out;
    extract_silhouette_into(frame, background, threshold, out);
    return out;
}

void extract_silhouette_into(const GrayFrame& frame, const GrayFrame& background,
                             int threshold, SilhouetteImage& out) {
    if (frame.width != background.width || frame.height != background.height)
        throw DimensionError("extract: frame is " + std::to_string(frame.width) + "x" +
                             std::to_string(frame.height) + " but background is " +
                             std::to_string(background.width) + "x" +
                             std::to_string(background.height));
    check_dims(frame.width, frame.height);

    out.width = frame.width;
    out.height = frame.height;
    out.mask.resize(frame.pixels.size());
    for (std::size_t i = 0; i < frame.pixels.size(); ++i) {
        int diff = std::abs(static_cast<int>(frame.pixels[i]) -
                            static_cast<int>(background.pixels[i]));
        out.mask[i] = diff > threshold ? 1 : 0;
    }
}

namespace {

int read_pnm_token(std::istream& in, const std::string& path) {
    // Skips whitespace and '#' comment lines between header tokens.
    for (;;) {
        int c = in.peek();
        if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else if (std::isspace(c)) {
            in.get();
        } else {
            break;
        }
    }
    int value = -1;
    if (!(in >> value))
        throw IoError("pgm: malformed header in '" + path + "'");
    return value;
}

GrayFrame read_pgm_impl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("pgm: cannot open '" + path + "'");
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (magic[0] != 'P' || magic[1] != '5')
        throw IoError("pgm: '" + path + "' is not a binary (P5) PGM file");
    int width = read_pnm_token(in, path);
    int height = read_pnm_token(in, path);
    int maxval = read_pnm_token(in, path);
    if (width <= 0 || height <= 0)
        throw IoError("pgm: bad dimensions in '" + path + "'");
    if (maxval != 255)
        throw IoError("pgm: '" + path + "' maxval " + std::to_string(maxval) +
                      " unsupported (need 255)");
    in.get();  // single whitespace byte after maxval
    GrayFrame frame(width, height);
    in.read(reinterpret_cast<char*>(frame.pixels.data()),
            static_cast<std::streamsize>(frame.pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(frame.pixels.size()))
        throw IoError("pgm: truncated pixel data in '" + path + "'");
    return frame;
}

}  // namespace

GrayFrame read_pgm(const std::string& path) { return read_pgm_impl(path); }

void write_pgm(const GrayFrame& frame, const std::string& path) {
    check_dims(frame.width, frame.height);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("pgm: cannot write '" + path + "'");
    out << "P5\n" << frame.width << " " << frame.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(frame.pixels.data()),
              static_cast<std::streamsize>(frame.pixels.size()));
    if (!out) throw IoError("pgm: write failed for '" + path + "'");
}

SilhouetteImage read_silhouette_pgm(const std::string& path) {
    GrayFrame frame = read_pgm_impl(path);
    SilhouetteImage s(frame.width, frame.height);
    for (std::size_t i = 0; i < frame.pixels.size(); ++i)
        s.mask[i] = frame.pixels[i] >= 128 ? 1 : 0;
    return s;
}

void write_silhouette_pgm(const SilhouetteImage& silhouette, const std::string& path) {
    GrayFrame frame(silhouette.width, silhouette.height);
    for (std::size_t i = 0; i < silhouette.mask.size(); ++i)
        frame.pixels[i] = silhouette.mask[i] ? 255 : 0;
    write_pgm(frame, path);
}

}  // namespace mocap
