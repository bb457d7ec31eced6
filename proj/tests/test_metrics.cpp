#include <cmath>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "phsw/metrics.hpp"
#include "support/oracles.hpp"

TEST_CASE("psnr of identical images is infinite") {
    const auto img = oracles::random_image(16, 16, 80);
    CHECK(std::isinf(phsw::psnr(img, img)));
}

TEST_CASE("psnr of a uniform off-by-one error is 20 log10(peak)") {
    auto a = oracles::random_image(16, 16, 81);
    auto b = a;
    for (double& s : b.samples) s += 1.0;
    CHECK(phsw::psnr(a, b) == doctest::Approx(20.0 * std::log10(255.0)).epsilon(1e-12));

    auto a16 = oracles::random_image(8, 8, 82, 16);
    auto b16 = a16;
    for (double& s : b16.samples) s += 1.0;
    CHECK(phsw::psnr(a16, b16) == doctest::Approx(20.0 * std::log10(65535.0)).epsilon(1e-12));
}

TEST_CASE("psnr rejects mismatched shapes") {
    const auto a = oracles::random_image(16, 16, 83);
    const auto b = oracles::random_image(16, 8, 84);
    CHECK_THROWS_AS(phsw::psnr(a, b), phsw::GeometryError);
}

TEST_CASE("entropy of equal retained values is zero") {
    phsw::QuantizedStream s;
    s.bands.push_back({phsw::BandKind::approx, 0, 0, 0, std::vector<std::int32_t>(48, 7)});
    CHECK(phsw::total_entropy_bits(s) == 0.0);
}

TEST_CASE("entropy of a two-value split is one bit per value") {
    phsw::QuantizedStream s;
    std::vector<std::int32_t> values(1000, 3);
    for (int i = 0; i < 500; ++i) values[static_cast<std::size_t>(i)] = -2;
    s.bands.push_back({phsw::BandKind::detail, 1, 0, 0, values});
    CHECK(phsw::total_entropy_bits(s) == doctest::Approx(1000.0).epsilon(1e-12));
}

TEST_CASE("zeros do not contribute to the entropy") {
    phsw::QuantizedStream s;
    std::vector<std::int32_t> values(100, 0);
    values[3] = 9;
    values[60] = 9;
    s.bands.push_back({phsw::BandKind::hl, 1, 0, 0, values});
    CHECK(phsw::total_entropy_bits(s) == 0.0);

    phsw::QuantizedStream empty;
    CHECK(phsw::total_entropy_bits(empty) == 0.0);
}

TEST_CASE("csv report has the fixed header and one row per report") {
    phsw::CompareReport a;
    a.method = "phsd";
    a.num_coeffs = 48;
    a.psnr_db = 30.25;
    a.entropy_bits = 0.0;
    a.compression_ratio = 117.0;
    a.bits_encoded = 280;
    a.threshold = 12.5;
    a.runtime_ms = 3.25;
    phsw::CompareReport b = a;
    b.method = "db";
    b.num_coeffs = 960;

    std::ostringstream out;
    phsw::write_reports_csv(out, {a, b});
    std::istringstream in(out.str());
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line ==
          "method,num_coeffs,psnr_db,entropy_bits,compression_ratio,bits_encoded,threshold,"
          "runtime_ms");
    REQUIRE(std::getline(in, line));
    CHECK(line.substr(0, 8) == "phsd,48,");
    REQUIRE(std::getline(in, line));
    CHECK(line.substr(0, 7) == "db,960,");
    CHECK_FALSE(std::getline(in, line));
}

TEST_CASE("json report quotes non-finite numbers") {
    phsw::CompareReport r;
    r.method = "phsd";
    r.num_coeffs = 5;
    r.psnr_db = std::numeric_limits<double>::infinity();
    r.threshold = 0.5;

    std::ostringstream out;
    phsw::write_report_json(out, r);
    const std::string json = out.str();
    CHECK(json.front() == '{');
    CHECK(json.back() == '}');
    CHECK(json.find("\"method\":\"phsd\"") != std::string::npos);
    CHECK(json.find("\"num_coeffs\":5") != std::string::npos);
    CHECK(json.find("\"psnr_db\":\"inf\"") != std::string::npos);
    CHECK(json.find("\"threshold\":0.5") != std::string::npos);
}
