#pragma once

#include <vector>

#include "phsw/image.hpp"
#include "phsw/transform1d.hpp"

namespace phsw {

// One level of the separable pyramid. HL carries detail along t (horizontal
// filtering by the highpass), LH detail along y, HH detail along both. Band
// width/height at level ell (1-based) are width / 2^ell, height / 2^ell,
// stored row-major.
struct TensorBand {
    int width = 0;
    int height = 0;
    std::vector<double> hl, lh, hh;
};

struct TensorPyramid {
    int width = 0;
    int height = 0;
    int order_n = 0;
    int levels = 0;
    int ll_width = 0;
    int ll_height = 0;
    std::vector<double> ll;              // coarsest approximation
    std::vector<TensorBand> bands;       // bands[0] = finest level
};

// Classical separable DWT with the theta = 0 (Daubechies) pair of the given
// order; circular extension on both axes. Geometry rules match phsd_forward
// with width and height each divisible by 2^levels and the coarsest side at
// least 2 * order_n.
TensorPyramid tensor_forward(const ImageBuffer& image, int order_n, int levels,
                             const FilterCache& cache = default_filter_cache());
ImageBuffer tensor_inverse(const TensorPyramid& pyramid, int bit_depth,
                           const FilterCache& cache = default_filter_cache());

}  // namespace phsw
