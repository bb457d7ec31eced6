#include <cmath>
#include <set>
#include <thread>
#include <sstream>

#include "doctest.h"
#include "phsw/filter_bank.hpp"
#include "fixtures/db9_reference_taps.hpp"
#include "support/oracles.hpp"

namespace {

// QMF defect max_k |sum_j a_j a_{j+2k} - [k==0]| evaluated in long double.
double qmf_residual(const std::vector<double>& a) {
    const int len = static_cast<int>(a.size());
    double worst = 0.0;
    for (int k = 0; k < len / 2; ++k) {
        long double acc = 0.0L;
        for (int j = 0; j + 2 * k < len; ++j)
            acc += static_cast<long double>(a[j]) * static_cast<long double>(a[j + 2 * k]);
        if (k == 0) acc -= 1.0L;
        worst = std::max(worst, static_cast<double>(std::abs(acc)));
    }
    return worst;
}

// Relative residual of the highpass against t^m e^{+theta t} sampled on an
// integer window: |sum_j g_j f(j)| / sum_j |g_j f(j)|.
double annihilation_residual(const phsw::FilterPair& fp, int moment) {
    long double num = 0.0L, den = 0.0L;
    const int len = static_cast<int>(fp.highpass.size());
    for (int j = 0; j < len; ++j) {
        const long double f =
            std::pow(static_cast<long double>(j), static_cast<long double>(moment)) *
            std::exp(fp.theta * static_cast<long double>(j));
        num += fp.highpass[j] * f;
        den += std::abs(fp.highpass[j] * f);
    }
    return static_cast<double>(std::abs(num) / den);
}

}  // namespace

TEST_CASE("theta=0 order-9 taps match the frozen reference") {
    const auto fp = phsw::build_filter_pair(0.0, 9);
    REQUIRE(fp.lowpass.size() == fixtures::kDb9Lowpass.size());
    for (std::size_t j = 0; j < fixtures::kDb9Lowpass.size(); ++j)
        CHECK(fp.lowpass[j] == doctest::Approx(fixtures::kDb9Lowpass[j]).epsilon(1e-8));
}

TEST_CASE("theta=0 factorization agrees with an in-test Bauer factorization") {
    for (int n : {2, 9}) {
        CAPTURE(n);
        const auto fp = phsw::build_filter_pair(0.0, n);
        const auto ref = oracles::bauer_db_lowpass(n);
        REQUIRE(fp.lowpass.size() == ref.size());
        CHECK(oracles::max_rel_error(fp.lowpass, ref) < 1e-12);
    }
}

TEST_CASE("order-2 theta=0 taps hit the closed-form values") {
    const auto fp = phsw::build_filter_pair(0.0, 2);
    const double s3 = std::sqrt(3.0), s2 = std::sqrt(2.0);
    const double expect[4] = {(1 - s3) / (4 * s2), (3 - s3) / (4 * s2), (3 + s3) / (4 * s2),
                              (1 + s3) / (4 * s2)};
    for (int j = 0; j < 4; ++j) CHECK(fp.lowpass[j] == doctest::Approx(expect[j]).epsilon(1e-14));
}

TEST_CASE("QMF identity holds across the theta sweep") {
    for (int n : {2, 5, 9}) {
        for (double theta : {0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0}) {
            CAPTURE(n);
            CAPTURE(theta);
            const auto fp = phsw::build_filter_pair(theta, n);
            CHECK(qmf_residual(fp.lowpass) <= 1e-10);
            CHECK(qmf_residual(fp.highpass) <= 1e-10);
            CHECK(fp.condition_estimate <= 1e-10);
        }
    }
}

TEST_CASE("highpass annihilates the growing exponential family") {
    for (int n : {1, 2, 5, 9}) {
        for (double theta : {0.05, 0.3, 1.0, 2.5, 5.0}) {
            CAPTURE(n);
            CAPTURE(theta);
            const auto fp = phsw::build_filter_pair(theta, n);
            for (int m = 0; m < n; ++m) {
                CAPTURE(m);
                CHECK(annihilation_residual(fp, m) <= 1e-7);
            }
        }
    }
}

TEST_CASE("filter structure invariants") {
    for (double theta : {0.0, 0.7, 3.0, 12.0}) {
        for (int n : {1, 4, 9, 12}) {
            CAPTURE(theta);
            CAPTURE(n);
            const auto fp = phsw::build_filter_pair(theta, n);
            REQUIRE(fp.lowpass.size() == static_cast<std::size_t>(2 * n));
            REQUIRE(fp.highpass.size() == static_cast<std::size_t>(2 * n));

            long double energy = 0.0L;
            for (double v : fp.lowpass) energy += static_cast<long double>(v) * v;
            CHECK(std::abs(static_cast<double>(energy) - 1.0) < 1e-14);

            // alternating-flip identity must be exact on the stored doubles
            for (int j = 0; j < 2 * n; ++j) {
                const double want = (j % 2 == 0 ? 1.0 : -1.0) * fp.lowpass[2 * n - 1 - j];
                CHECK(fp.highpass[j] == want);
            }

            double largest = 0.0;
            for (double v : fp.lowpass)
                if (std::abs(v) > std::abs(largest)) largest = v;
            CHECK(largest > 0.0);
        }
    }
}

TEST_CASE("order-1 pair is the normalized exponential Haar") {
    // lowpass proportional to (e^{-theta} + z): two taps, ratio e^{-theta}.
    const double theta = 1.3;
    const auto fp = phsw::build_filter_pair(theta, 1);
    REQUIRE(fp.lowpass.size() == 2);
    CHECK(fp.lowpass[0] / fp.lowpass[1] == doctest::Approx(std::exp(-theta)).epsilon(1e-14));
    // highpass kills e^{+theta t}: g0 + g1 e^{theta} = 0
    CHECK(std::abs(fp.highpass[0] + fp.highpass[1] * std::exp(theta)) < 1e-14);
}

TEST_CASE("theta above the clamp reuses the clamped pair") {
    const auto a = phsw::build_filter_pair(25.0, 5);
    const auto b = phsw::build_filter_pair(phsw::kThetaMax, 5);
    CHECK(a.theta == b.theta);
    CHECK(a.lowpass == b.lowpass);
}

TEST_CASE("construction is continuous at theta -> 0") {
    const auto base = phsw::build_filter_pair(0.0, 9);
    const auto near = phsw::build_filter_pair(1e-8, 9);
    for (std::size_t j = 0; j < base.lowpass.size(); ++j)
        CHECK(std::abs(base.lowpass[j] - near.lowpass[j]) < 1e-6);
}

TEST_CASE("construction is deterministic") {
    const auto a = phsw::build_filter_pair(2.251, 7);
    const auto b = phsw::build_filter_pair(2.251, 7);
    CHECK(a.lowpass == b.lowpass);
    CHECK(a.highpass == b.highpass);
}

TEST_CASE("invalid orders and negative theta throw") {
    CHECK_THROWS_AS(phsw::build_filter_pair(0.0, 0), phsw::InvalidOrder);
    CHECK_THROWS_AS(phsw::build_filter_pair(0.0, 13), phsw::InvalidOrder);
    CHECK_THROWS_AS(phsw::build_filter_pair(-0.5, 4), phsw::Error);
    CHECK_THROWS_AS(phsw::build_filter_pair(std::nan(""), 4), phsw::Error);
}

TEST_CASE("cache snaps nearby thetas to one entry") {
    phsw::FilterCache cache;
    const auto a = cache.get(0.3, 9);
    const auto b = cache.get(0.30000000049, 9);  // inside the snap quantum
    CHECK(a.get() == b.get());
    const auto c = cache.get(0.31, 9);
    CHECK(a.get() != c.get());
    CHECK(cache.size() == 2);
}

TEST_CASE("cache is usable from concurrent threads") {
    phsw::FilterCache cache;
    std::vector<std::thread> pool;
    std::atomic<int> failures{0};
    for (int t = 0; t < 8; ++t) {
        pool.emplace_back([&cache, &failures] {
            for (int i = 0; i < 40; ++i) {
                const auto fp = cache.get(0.1 * (i % 7), 2 + (i % 3));
                if (!fp || fp->lowpass.empty()) failures.fetch_add(1);
            }
        });
    }
    for (auto& th : pool) th.join();
    CHECK(failures.load() == 0);
    CHECK(cache.size() == 21);  // 7 thetas x 3 orders
}

TEST_CASE("filter table CSV has the documented shape") {
    phsw::FilterCache cache;
    cache.get(0.0, 2);
    cache.get(1.5, 2);
    std::ostringstream out;
    phsw::write_filter_table_csv(out, cache.snapshot());
    std::istringstream in(out.str());
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "theta,order_n,tap_index,lowpass,highpass");
    int rows = 0;
    while (std::getline(in, line)) {
        CHECK(std::count(line.begin(), line.end(), ',') == 4);
        ++rows;
    }
    CHECK(rows == 2 * 4);  // two pairs, four taps each
}
