#include <cmath>

#include "doctest.h"
#include "phsw/tensor_dwt.hpp"
#include "support/oracles.hpp"

namespace {

phsw::ImageBuffer transpose(const phsw::ImageBuffer& img) {
    phsw::ImageBuffer out(img.height, img.width, img.bit_depth);
    for (int j = 0; j < img.height; ++j)
        for (int i = 0; i < img.width; ++i) out.at(j, i) = img.at(i, j);
    return out;
}

double total_energy(const phsw::TensorPyramid& pyr) {
    double acc = 0.0;
    for (double v : pyr.ll) acc += v * v;
    for (const auto& band : pyr.bands) {
        for (double v : band.hl) acc += v * v;
        for (double v : band.lh) acc += v * v;
        for (double v : band.hh) acc += v * v;
    }
    return acc;
}

}  // namespace

TEST_CASE("order-1 single level is the Haar transform") {
    phsw::ImageBuffer img(4, 4, 8);
    std::mt19937 rng(2);
    for (double& s : img.samples) s = static_cast<double>(rng() % 256);
    const auto pyr = phsw::tensor_forward(img, 1, 1);

    REQUIRE(pyr.ll_width == 2);
    REQUIRE(pyr.ll_height == 2);
    REQUIRE(pyr.bands.size() == 1);
    const auto& band = pyr.bands[0];

    for (int j = 0; j < 2; ++j) {
        for (int i = 0; i < 2; ++i) {
            const double a = img.at(2 * i, 2 * j), b = img.at(2 * i + 1, 2 * j);
            const double c = img.at(2 * i, 2 * j + 1), d = img.at(2 * i + 1, 2 * j + 1);
            CAPTURE(i);
            CAPTURE(j);
            CHECK(pyr.ll[j * 2 + i] == doctest::Approx((a + b + c + d) / 2).epsilon(1e-14));
            // hl: highpass along t, lowpass along y
            CHECK(band.hl[j * 2 + i] == doctest::Approx((a - b + c - d) / 2).epsilon(1e-14));
            CHECK(band.lh[j * 2 + i] == doctest::Approx((a + b - c - d) / 2).epsilon(1e-14));
            CHECK(band.hh[j * 2 + i] == doctest::Approx((a - b - c + d) / 2).epsilon(1e-14));
        }
    }
}

TEST_CASE("constant images concentrate in ll") {
    phsw::ImageBuffer img(64, 64, 8);
    for (double& s : img.samples) s = 100.0;
    const auto pyr = phsw::tensor_forward(img, 9, 1);
    for (const auto& band : pyr.bands) {
        for (double v : band.hl) CHECK(std::abs(v) < 1e-10);
        for (double v : band.lh) CHECK(std::abs(v) < 1e-10);
        for (double v : band.hh) CHECK(std::abs(v) < 1e-10);
    }
    for (double v : pyr.ll) CHECK(v == doctest::Approx(200.0).epsilon(1e-12));
}

TEST_CASE("band geometry follows the halving schedule") {
    const auto img = oracles::random_image(128, 64, 50);
    const auto pyr = phsw::tensor_forward(img, 2, 3);
    CHECK(pyr.ll_width == 16);
    CHECK(pyr.ll_height == 8);
    REQUIRE(pyr.bands.size() == 3);
    CHECK(pyr.bands[0].width == 64);   // finest first
    CHECK(pyr.bands[0].height == 32);
    CHECK(pyr.bands[2].width == 16);
    CHECK(pyr.bands[2].height == 8);
}

TEST_CASE("transform is orthonormal") {
    const auto img = oracles::random_image(64, 64, 51);
    const auto pyr = phsw::tensor_forward(img, 9, 1);
    double image_energy = 0.0;
    for (double s : img.samples) image_energy += s * s;
    CHECK(total_energy(pyr) == doctest::Approx(image_energy).epsilon(1e-12));
}

TEST_CASE("forward then inverse reproduces the image") {
    for (int order : {1, 9}) {
        CAPTURE(order);
        const auto img = oracles::random_image(64, 64, 52 + order);
        const int levels = phsw::effective_levels(64, order, 4);
        const auto pyr = phsw::tensor_forward(img, order, levels);
        const auto back = phsw::tensor_inverse(pyr, img.bit_depth);
        double worst = 0.0;
        for (std::size_t i = 0; i < img.samples.size(); ++i)
            worst = std::max(worst, std::abs(img.samples[i] - back.samples[i]));
        CHECK(worst <= 1e-10 * 255.0);
    }
}

TEST_CASE("transposing the image transposes the pyramid and swaps hl with lh") {
    const auto img = oracles::random_image(32, 16, 54);
    const auto pyr = phsw::tensor_forward(img, 2, 2);
    const auto pyr_t = phsw::tensor_forward(transpose(img), 2, 2);

    REQUIRE(pyr_t.ll_width == pyr.ll_height);
    REQUIRE(pyr_t.ll_height == pyr.ll_width);
    for (int j = 0; j < pyr.ll_height; ++j)
        for (int i = 0; i < pyr.ll_width; ++i)
            CHECK(pyr_t.ll[i * pyr_t.ll_width + j] ==
                  doctest::Approx(pyr.ll[j * pyr.ll_width + i]).epsilon(1e-12));

    REQUIRE(pyr_t.bands.size() == pyr.bands.size());
    for (std::size_t l = 0; l < pyr.bands.size(); ++l) {
        const auto& b = pyr.bands[l];
        const auto& bt = pyr_t.bands[l];
        REQUIRE(bt.width == b.height);
        REQUIRE(bt.height == b.width);
        for (int j = 0; j < b.height; ++j) {
            for (int i = 0; i < b.width; ++i) {
                CAPTURE(l);
                CAPTURE(i);
                CAPTURE(j);
                CHECK(bt.lh[i * bt.width + j] == doctest::Approx(b.hl[j * b.width + i]).epsilon(1e-12));
                CHECK(bt.hl[i * bt.width + j] == doctest::Approx(b.lh[j * b.width + i]).epsilon(1e-12));
                CHECK(bt.hh[i * bt.width + j] == doctest::Approx(b.hh[j * b.width + i]).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("geometry violations throw") {
    const auto img = oracles::random_image(64, 64, 55);
    CHECK_THROWS_AS(phsw::tensor_forward(img, 9, 2), phsw::GeometryError);  // 16 < 18
    const auto odd = oracles::random_image(63, 64, 56);
    CHECK_THROWS_AS(phsw::tensor_forward(odd, 9, 1), phsw::GeometryError);
    const auto half_odd = oracles::random_image(60, 64, 57);
    CHECK_NOTHROW(phsw::tensor_forward(half_odd, 9, 1));  // 30 >= 18, one level fits
    CHECK_THROWS_AS(phsw::tensor_forward(half_odd, 9, 2), phsw::GeometryError);
}
