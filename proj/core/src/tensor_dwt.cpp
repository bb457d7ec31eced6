#include "phsw/tensor_dwt.hpp"

namespace phsw {
namespace {

struct Grid {
    int w = 0;
    int h = 0;
    std::vector<double> v;
    Grid() = default;
    Grid(int width, int height) : w(width), h(height), v(static_cast<std::size_t>(width) * height) {}
    double& at(int i, int j) { return v[static_cast<std::size_t>(j) * w + i]; }
    double at(int i, int j) const { return v[static_cast<std::size_t>(j) * w + i]; }
};

}  // namespace

TensorPyramid tensor_forward(const ImageBuffer& image, int order_n, int levels,
                             const FilterCache& cache) {
    if (levels < 0) throw GeometryError("levels must be nonnegative");
    if (effective_levels(image.width, order_n, levels) < levels ||
        effective_levels(image.height, order_n, levels) < levels)
        throw GeometryError("geometry " + std::to_string(image.width) + "x" +
                            std::to_string(image.height) + " cannot support " +
                            std::to_string(levels) + " levels at order " + std::to_string(order_n));
    const auto filters = cache.get(0.0, order_n);

    TensorPyramid pyr;
    pyr.width = image.width;
    pyr.height = image.height;
    pyr.order_n = order_n;
    pyr.levels = levels;

    Grid cur(image.width, image.height);
    cur.v = image.samples;
    std::vector<double> line, la, ld;
    for (int ell = 1; ell <= levels; ++ell) {
        const int w = cur.w, h = cur.h, w2 = w / 2, h2 = h / 2;
        Grid rowlow(w2, h), rowhigh(w2, h);
        line.resize(w);
        for (int j = 0; j < h; ++j) {
            for (int i = 0; i < w; ++i) line[i] = cur.at(i, j);
            analyze_step(line, *filters, la, ld);
            for (int i = 0; i < w2; ++i) {
                rowlow.at(i, j) = la[i];
                rowhigh.at(i, j) = ld[i];
            }
        }
        TensorBand band;
        band.width = w2;
        band.height = h2;
        band.hl.resize(static_cast<std::size_t>(w2) * h2);
        band.lh.resize(static_cast<std::size_t>(w2) * h2);
        band.hh.resize(static_cast<std::size_t>(w2) * h2);
        Grid ll(w2, h2);
        line.resize(h);
        for (int i = 0; i < w2; ++i) {
            for (int j = 0; j < h; ++j) line[j] = rowlow.at(i, j);
            analyze_step(line, *filters, la, ld);
            for (int j = 0; j < h2; ++j) {
                ll.at(i, j) = la[j];
                band.lh[static_cast<std::size_t>(j) * w2 + i] = ld[j];
            }
            for (int j = 0; j < h; ++j) line[j] = rowhigh.at(i, j);
            analyze_step(line, *filters, la, ld);
            for (int j = 0; j < h2; ++j) {
                band.hl[static_cast<std::size_t>(j) * w2 + i] = la[j];
                band.hh[static_cast<std::size_t>(j) * w2 + i] = ld[j];
            }
        }
        pyr.bands.push_back(std::move(band));
        cur = std::move(ll);
    }
    pyr.ll_width = cur.w;
    pyr.ll_height = cur.h;
    pyr.ll = std::move(cur.v);
    return pyr;
}

ImageBuffer tensor_inverse(const TensorPyramid& pyr, int bit_depth, const FilterCache& cache) {
    if (static_cast<int>(pyr.bands.size()) != pyr.levels)
        throw GeometryError("pyramid level count does not match its bands");
    const auto filters = cache.get(0.0, pyr.order_n);

    Grid cur(pyr.ll_width, pyr.ll_height);
    cur.v = pyr.ll;
    std::vector<double> a, d, merged;
    for (int ell = pyr.levels; ell >= 1; --ell) {
        const TensorBand& band = pyr.bands[ell - 1];
        const int w2 = band.width, h2 = band.height;
        if (cur.w != w2 || cur.h != h2)
            throw GeometryError("band geometry mismatch at level " + std::to_string(ell));
        Grid rowlow(w2, 2 * h2), rowhigh(w2, 2 * h2);
        a.resize(h2);
        d.resize(h2);
        for (int i = 0; i < w2; ++i) {
            for (int j = 0; j < h2; ++j) {
                a[j] = cur.at(i, j);
                d[j] = band.lh[static_cast<std::size_t>(j) * w2 + i];
            }
            synthesize_step(a, d, *filters, merged);
            for (int j = 0; j < 2 * h2; ++j) rowlow.at(i, j) = merged[j];
            for (int j = 0; j < h2; ++j) {
                a[j] = band.hl[static_cast<std::size_t>(j) * w2 + i];
                d[j] = band.hh[static_cast<std::size_t>(j) * w2 + i];
            }
            synthesize_step(a, d, *filters, merged);
            for (int j = 0; j < 2 * h2; ++j) rowhigh.at(i, j) = merged[j];
        }
        Grid next(2 * w2, 2 * h2);
        a.resize(w2);
        d.resize(w2);
        for (int j = 0; j < 2 * h2; ++j) {
            for (int i = 0; i < w2; ++i) {
                a[i] = rowlow.at(i, j);
                d[i] = rowhigh.at(i, j);
            }
            synthesize_step(a, d, *filters, merged);
            for (int i = 0; i < 2 * w2; ++i) next.at(i, j) = merged[i];
        }
        cur = std::move(next);
    }
    if (cur.w != pyr.width || cur.h != pyr.height)
        throw GeometryError("reconstruction geometry does not match the pyramid header");
    ImageBuffer image(cur.w, cur.h, bit_depth);
    image.samples = std::move(cur.v);
    return image;
}

}  // namespace phsw
