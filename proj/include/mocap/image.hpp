#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mocap/errors.hpp"

namespace mocap {

/// 8-bit grayscale image, row-major, origin at the top-left pixel.
struct GrayFrame {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    GrayFrame() = default;
    GrayFrame(int w, int h, std::uint8_t fill = 0);

    std::uint8_t at(int x, int y) const {
        return pixels[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                      static_cast<std::size_t>(x)];
    }
    std::uint8_t& at(int x, int y) {
        return pixels[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                      static_cast<std::size_t>(x)];
    }
};

/// Binary foreground mask with the same layout as GrayFrame; values are 0 or 1.
struct SilhouetteImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> mask;

    SilhouetteImage() = default;
    SilhouetteImage(int w, int h);

    std::uint8_t at(int x, int y) const {
        return mask[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                    static_cast<std::size_t>(x)];
    }
    std::uint8_t& at(int x, int y) {
        return mask[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                    static_cast<std::size_t>(x)];
    }
    std::size_t count_foreground() const;
    void clear();

    bool operator==(const SilhouetteImage& other) const = default;
};

/// Marks pixels whose absolute difference from the background exceeds
/// `threshold`. Frame and background must have identical dimensions.
SilhouetteImage extract_silhouette(const GrayFrame& frame, const GrayFrame& background,
                                   int threshold);

/// In-place variant reusing `out` storage; resizes it if dimensions differ.
void extract_silhouette_into(const GrayFrame& frame, const GrayFrame& background,
                             int threshold, SilhouetteImage& out);

/// Binary PGM (P5, maxval 255) readers and writers.
GrayFrame read_pgm(const std::string& path);
void write_pgm(const GrayFrame& frame, const std::string& path);

/// Silhouettes serialize with foreground 255, background 0; on read any
/// value >= 128 counts as foreground.
SilhouetteImage read_silhouette_pgm(const std::string& path);
void write_silhouette_pgm(const SilhouetteImage& silhouette, const std::string& path);

}  // namespace mocap
