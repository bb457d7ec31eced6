#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "phsw/image_io.hpp"
#include "phsw/pipeline.hpp"

#ifndef PHSW_CLI_PATH
#error "PHSW_CLI_PATH must point at the phsw binary"
#endif

namespace {

namespace fs = std::filesystem;

const fs::path& work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "phsw_cli_tests";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

int run(const std::string& args, const std::string& stdout_file = "") {
    std::string cmd = std::string(PHSW_CLI_PATH) + " " + args;
    if (!stdout_file.empty())
        cmd += " > " + stdout_file;
    else
        cmd += " > /dev/null";
    cmd += " 2> /dev/null";
    const int rc = std::system(cmd.c_str());
    return (rc >= 0 && WIFEXITED(rc)) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("gen writes the requested edge image") {
    const auto out = work_dir() / "gen_vertical.pgm";
    REQUIRE(run("gen --kind vertical --size 64 --out " + out.string()) == 0);
    const auto img = phsw::load_image(out.string());
    const auto want = phsw::gen_edge(phsw::EdgeKind::vertical, 64);
    CHECK(img.samples == want.samples);
}

TEST_CASE("encode then decode round trips through the container format") {
    const auto container = work_dir() / "roundtrip.phsw";
    const auto json_path = work_dir() / "encode.json";
    const auto decoded_path = work_dir() / "roundtrip.pgm";

    REQUIRE(run("encode --synthetic vertical --size 64 --keep 48 --out " + container.string(),
                json_path.string()) == 0);

    const std::string json = slurp(json_path);
    CHECK(json.find("\"method\":\"phsd\"") != std::string::npos);
    CHECK(json.find("\"num_coeffs\":48") != std::string::npos);

    const std::string bytes = slurp(container);
    REQUIRE(bytes.size() > 42);
    CHECK(bytes.compare(0, 4, "PHSW") == 0);

    REQUIRE(run("decode --in " + container.string() + " --out " + decoded_path.string()) == 0);
    const auto decoded = phsw::load_image(decoded_path.string());
    const auto direct = phsw::decode_image(
        std::vector<std::uint8_t>(bytes.begin(), bytes.end()));
    CHECK(decoded.samples == direct.samples);
}

TEST_CASE("encode accepts files produced by gen") {
    const auto pgm = work_dir() / "input.pgm";
    const auto container = work_dir() / "from_file.phsw";
    REQUIRE(run("gen --kind skewed --size 64 --out " + pgm.string()) == 0);
    CHECK(run("encode --in " + pgm.string() + " --method db --threshold 20 --out " +
              container.string()) == 0);
    CHECK(slurp(container).compare(0, 4, "PHSW") == 0);
}

TEST_CASE("compare emits the csv and the image panels") {
    const auto prefix = (work_dir() / "cmp").string();
    const auto csv_path = work_dir() / "cmp_stdout.csv";
    REQUIRE(run("compare --synthetic vertical --size 64 --keep 48 --out-prefix " + prefix,
                csv_path.string()) == 0);

    const std::string csv = slurp(fs::path(prefix + "_report.csv"));
    CHECK(csv.find("method,num_coeffs,psnr_db,") == 0);
    CHECK(csv.find("\nphsd,48,") != std::string::npos);
    CHECK(csv.find("\ndb,") != std::string::npos);
    CHECK(slurp(csv_path) == csv);  // stdout mirrors the file

    for (const char* suffix :
         {"_original.pgm", "_phsd.pgm", "_db.pgm", "_phsd_diff8x.pgm", "_db_diff8x.pgm"}) {
        CAPTURE(suffix);
        const auto img = phsw::load_image(prefix + suffix);
        CHECK(img.width == 64);
        CHECK(img.height == 64);
    }
}

TEST_CASE("usage errors exit with status 2") {
    CHECK(run("") == 2);                 // missing subcommand
    CHECK(run("gen --kind diagonal --size 64 --out /tmp/x.pgm") == 2);
    CHECK(run("gen --kind vertical --size 4 --out /tmp/x.pgm") == 2);
    CHECK(run("encode --synthetic vertical --out /tmp/x.phsw --threshold 1 --keep 5") == 2);
    CHECK(run("encode --out /tmp/x.phsw") == 2);  // neither --in nor --synthetic
    const auto pgm = work_dir() / "usage.pgm";
    REQUIRE(run("gen --kind vertical --size 16 --out " + pgm.string()) == 0);
    CHECK(run("encode --in " + pgm.string() + " --synthetic vertical --out /tmp/x.phsw") == 2);
}

TEST_CASE("unusable geometry exits with status 3") {
    CHECK(run("encode --synthetic vertical --size 48 --out /tmp/x.phsw") == 3);
}

TEST_CASE("corrupt containers exit with status 4") {
    const auto bad = work_dir() / "bad.phsw";
    {
        std::ofstream out(bad, std::ios::binary);
        out << "PHSWgarbage that is long enough to clear the header size check.....";
    }
    CHECK(run("decode --in " + bad.string() + " --out /tmp/x.pgm") == 4);

    const auto missing = work_dir() / "missing.phsw";
    fs::remove(missing);
    CHECK(run("decode --in " + missing.string() + " --out /tmp/x.pgm") == 2);
}

TEST_CASE("unreadable image inputs exit with status 2") {
    const auto junk = work_dir() / "junk.pgm";
    {
        std::ofstream out(junk, std::ios::binary);
        out << "not an image at all";
    }
    CHECK(run("encode --in " + junk.string() + " --out /tmp/x.phsw") == 2);
}

TEST_CASE("the filter cache dump lands in PHSW_CACHE_DIR") {
    const auto cache_dir = work_dir() / "cache";
    fs::create_directories(cache_dir);
    const auto container = work_dir() / "cached.phsw";
    const std::string cmd = "PHSW_CACHE_DIR=" + cache_dir.string() + " " +
                            std::string(PHSW_CLI_PATH) +
                            " encode --synthetic vertical --size 64 --out " + container.string() +
                            " > /dev/null 2> /dev/null";
    REQUIRE(std::system(cmd.c_str()) == 0);
    const std::string csv = slurp(cache_dir / "filters.csv");
    CHECK(csv.find("theta,order_n,tap_index,lowpass,highpass") == 0);
    CHECK(csv.find("\n0,9,0,") != std::string::npos);  // theta=0 order-9 row
}
