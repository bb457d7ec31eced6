#pragma once

#include <complex>
#include <vector>

#include "phsw/image.hpp"
#include "phsw/transform1d.hpp"

namespace phsw {

inline constexpr double kDefaultCScale = 6.283185307179586476925286766559;  // 2*pi

// Parameters shared by the forward and inverse 2-D transform. c_scale maps a
// stored row's signed frequency eta to its level-1 theta:
//   theta_base(eta) = c_scale * |eta| / height.
struct Phsd2dParams {
    int order_n = 9;
    int levels = 4;
    double c_scale = kDefaultCScale;
    int threads = 0;  // worker cap for the per-row loops; 0 = hardware count
};

// Forward result: one pyramid per stored DFT row. With hermitian_reduced set
// (the default for real input) only k = 0..height/2 are stored; the row for
// frequency bin k carries eta = k for k < height/2 and eta = -height/2 for
// k = height/2. Rows eta = 0 and eta = -height/2 are self-conjugate and kept
// real to machine precision.
struct PhsdPyramid {
    int width = 0;
    int height = 0;
    int order_n = 0;
    int levels = 0;
    double c_scale = 0.0;
    bool hermitian_reduced = true;
    std::vector<FrequencyRowPyramid> rows;

    // Hermitian weight of a stored row: 2 when the dropped conjugate row
    // mirrors it, 1 for the self-conjugate rows eta = 0 and eta = -height/2.
    int row_multiplicity(std::size_t row_index) const;
};

// DFT along y (length = height, scale 1/height on the forward side) for each
// image column, returning bins in natural order k = 0..height-1.
std::vector<std::vector<std::complex<double>>> dft_y(const ImageBuffer& image);

// Forward: DFT along y, then a theta-matched pyramid along t per kept row.
// Throws GeometryError unless width and height are powers of two, width is
// divisible by 2^levels, and width / 2^levels >= 2 * order_n.
PhsdPyramid phsd_forward(const ImageBuffer& image, const Phsd2dParams& params,
                         const FilterCache& cache = default_filter_cache());

// Inverse: synthesize each stored row, extend by conjugate symmetry, inverse
// DFT per column. Throws SymmetryError when the self-conjugate rows come back
// with a non-negligible imaginary part (corrupt coefficients).
ImageBuffer phsd_inverse(const PhsdPyramid& pyramid, int bit_depth,
                         const FilterCache& cache = default_filter_cache());

}  // namespace phsw
