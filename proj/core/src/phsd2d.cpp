#include "phsw/phsd2d.hpp"

#include <algorithm>
#include <cmath>

#include "fft.hpp"
#include "phsw/parallel.hpp"

namespace phsw {

int PhsdPyramid::row_multiplicity(std::size_t row_index) const {
    if (row_index >= rows.size()) throw GeometryError("row index out of range");
    if (!hermitian_reduced) return 1;
    const int eta = rows[row_index].eta_index;
    return (eta == 0 || 2 * eta == -height) ? 1 : 2;
}

std::vector<std::vector<std::complex<double>>> dft_y(const ImageBuffer& image) {
    const int w = image.width;
    const int h = image.height;
    if (!detail::is_power_of_two(h)) throw GeometryError("height must be a power of two");
    std::vector<std::vector<std::complex<double>>> rows(
        h, std::vector<std::complex<double>>(w));
    std::vector<std::complex<double>> column(h);
    const double scale = 1.0 / h;
    for (int i = 0; i < w; ++i) {
        for (int j = 0; j < h; ++j) column[j] = image.at(i, j);
        detail::fft_pow2(column, -1);
        for (int k = 0; k < h; ++k) rows[k][i] = column[k] * scale;
    }
    return rows;
}

PhsdPyramid phsd_forward(const ImageBuffer& image, const Phsd2dParams& params,
                         const FilterCache& cache) {
    const int w = image.width;
    const int h = image.height;
    if (!detail::is_power_of_two(w) || !detail::is_power_of_two(h))
        throw GeometryError("phsd transform needs power-of-two dimensions, got " +
                            std::to_string(w) + "x" + std::to_string(h));
    if (params.levels < 0) throw GeometryError("levels must be nonnegative");
    if (effective_levels(w, params.order_n, params.levels) < params.levels)
        throw GeometryError("width " + std::to_string(w) + " cannot support " +
                            std::to_string(params.levels) + " levels at order " +
                            std::to_string(params.order_n));

    const auto spectrum = dft_y(image);
    PhsdPyramid pyr;
    pyr.width = w;
    pyr.height = h;
    pyr.order_n = params.order_n;
    pyr.levels = params.levels;
    pyr.c_scale = params.c_scale;
    pyr.hermitian_reduced = true;
    const int stored = h / 2 + 1;
    pyr.rows.resize(stored);
    parallel_for(stored, params.threads, [&](int k) {
        const int eta = (k < h / 2) ? k : -h / 2;
        const double theta_base = params.c_scale * std::abs(eta) / h;
        pyr.rows[k] = analyze_row(spectrum[k], eta, theta_base, params.order_n, params.levels, cache);
    });
    return pyr;
}

ImageBuffer phsd_inverse(const PhsdPyramid& pyramid, int bit_depth, const FilterCache& cache) {
    const int w = pyramid.width;
    const int h = pyramid.height;
    if (!pyramid.hermitian_reduced)
        throw Error("only Hermitian-reduced pyramids are supported");
    const int stored = h / 2 + 1;
    if (static_cast<int>(pyramid.rows.size()) != stored)
        throw GeometryError("pyramid stores " + std::to_string(pyramid.rows.size()) +
                            " rows, expected " + std::to_string(stored));

    std::vector<std::vector<std::complex<double>>> spectrum(
        h, std::vector<std::complex<double>>(w));
    parallel_for(stored, 0, [&](int k) {
        auto row = synthesize_row(pyramid.rows[k], pyramid.order_n, cache);
        const int eta = pyramid.rows[k].eta_index;
        if (eta == 0 || 2 * eta == -h) {
            // Self-conjugate bins of a real image are real; a material
            // imaginary part means the coefficients were tampered with.
            double max_abs = 1.0;
            double max_im = 0.0;
            for (const auto& v : row) {
                max_abs = std::max(max_abs, std::abs(v));
                max_im = std::max(max_im, std::abs(v.imag()));
            }
            if (max_im > 1e-6 * max_abs)
                throw SymmetryError("self-conjugate row eta=" + std::to_string(eta) +
                                    " has imaginary residue " + std::to_string(max_im));
            for (auto& v : row) v = std::complex<double>(v.real(), 0.0);
        }
        spectrum[k] = std::move(row);
    });
    for (int k = h / 2 + 1; k < h; ++k) {
        const auto& src = spectrum[h - k];
        auto& dst = spectrum[k];
        for (int i = 0; i < w; ++i) dst[i] = std::conj(src[i]);
    }

    ImageBuffer image(w, h, bit_depth);
    std::vector<std::complex<double>> column(h);
    for (int i = 0; i < w; ++i) {
        for (int k = 0; k < h; ++k) column[k] = spectrum[k][i];
        detail::fft_pow2(column, +1);
        for (int j = 0; j < h; ++j) image.at(i, j) = column[j].real();
    }
    return image;
}

}  // namespace phsw
