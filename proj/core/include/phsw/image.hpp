#pragma once

#include <cstdint>
#include <vector>

#include "phsw/error.hpp"

namespace phsw {

// Real-valued raster. Axis convention: t runs horizontally (index i, width W),
// y runs vertically (index j, height H). Row-major storage by y.
struct ImageBuffer {
    int width = 0;
    int height = 0;
    int bit_depth = 8;  // 8 or 16
    std::vector<double> samples;  // size width*height

    ImageBuffer() = default;
    ImageBuffer(int w, int h, int depth)
        : width(w), height(h), bit_depth(depth), samples(static_cast<std::size_t>(w) * h, 0.0) {
        if (w <= 0 || h <= 0) throw GeometryError("image dimensions must be positive");
        if (depth != 8 && depth != 16) throw GeometryError("bit depth must be 8 or 16");
    }

    double& at(int i, int j) { return samples[static_cast<std::size_t>(j) * width + i]; }
    double at(int i, int j) const { return samples[static_cast<std::size_t>(j) * width + i]; }

    double max_value() const { return bit_depth == 8 ? 255.0 : 65535.0; }

    bool same_geometry(const ImageBuffer& o) const {
        return width == o.width && height == o.height && bit_depth == o.bit_depth;
    }
};

}  // namespace phsw
