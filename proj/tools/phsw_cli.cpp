#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "phsw/image_io.hpp"
#include "phsw/metrics.hpp"
#include "phsw/pipeline.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitGeometry = 3;
constexpr int kExitCorrupt = 4;

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw phsw::ParseError("cannot open \"" + path + "\"", 0);
    return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw phsw::Error("cannot open \"" + path + "\" for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw phsw::Error("short write to \"" + path + "\"");
}

// Optional filter-table dump, enabled by the PHSW_CACHE_DIR environment
// variable: every filter built during the command is written to
// $PHSW_CACHE_DIR/filters.csv.
void dump_filter_cache() {
    const char* dir = std::getenv("PHSW_CACHE_DIR");
    if (!dir || !*dir) return;
    const std::string path = std::string(dir) + "/filters.csv";
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        std::cerr << "warning: cannot write filter table to " << path << "\n";
        return;
    }
    phsw::write_filter_table_csv(out, phsw::default_filter_cache().snapshot());
}

struct InputSelection {
    std::string in_path;
    std::string synthetic;
    int size = 64;

    phsw::ImageBuffer load() const {
        if (!synthetic.empty()) return phsw::gen_edge(phsw::parse_edge_kind(synthetic), size);
        return phsw::load_image(in_path);
    }
};

void add_input_flags(CLI::App* cmd, InputSelection& sel) {
    auto* in = cmd->add_option("--in", sel.in_path, "input image (PGM P5 or FITS)");
    auto* syn = cmd->add_option("--synthetic", sel.synthetic, "synthetic edge image")
                    ->check(CLI::IsMember({"vertical", "horizontal", "skewed"}));
    cmd->add_option("--size", sel.size, "synthetic image side length")
        ->check(CLI::Range(8, 16384));
    in->excludes(syn);
    syn->excludes(in);
    cmd->callback([in, syn]() {
        if (in->count() == 0 && syn->count() == 0)
            throw CLI::RequiredError("--in or --synthetic");
    });
}

phsw::Method parse_method(const std::string& name) {
    return name == "db" ? phsw::Method::db : phsw::Method::phsd;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"phsw: polyharmonic subdivision wavelet image codec"};
    app.require_subcommand(1);

    // --- gen ---------------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "generate a synthetic edge image");
    std::string gen_kind, gen_out;
    int gen_size = 64;
    gen->add_option("--kind", gen_kind, "edge kind")
        ->required()
        ->check(CLI::IsMember({"vertical", "horizontal", "skewed"}));
    gen->add_option("--size", gen_size, "side length")->check(CLI::Range(8, 16384));
    gen->add_option("--out", gen_out, "output PGM path")->required();

    // --- encode ------------------------------------------------------------
    auto* encode = app.add_subcommand("encode", "encode an image to a .phsw container");
    InputSelection enc_in;
    add_input_flags(encode, enc_in);
    std::string enc_out, enc_method = "phsd";
    phsw::EncodeOptions enc_opts;
    std::optional<double> enc_threshold;
    std::optional<std::int64_t> enc_keep;
    std::optional<double> enc_step;
    encode->add_option("--out", enc_out, "output container path")->required();
    encode->add_option("--method", enc_method, "transform (phsd|db)")
        ->check(CLI::IsMember({"phsd", "db"}));
    encode->add_option("--order", enc_opts.order_n, "filter order N")->check(CLI::Range(1, 12));
    encode->add_option("--levels", enc_opts.levels, "decomposition levels (auto-reduced)")
        ->check(CLI::Range(0, 16));
    auto* thr = encode->add_option("--threshold", enc_threshold, "zero coefficients below tau");
    auto* keep = encode->add_option("--keep", enc_keep, "retain the K largest coefficients");
    thr->excludes(keep);
    keep->excludes(thr);
    encode->add_option("--cscale", enc_opts.c_scale, "frequency-to-theta scale c");
    encode->add_option("--step", enc_step, "quantization step delta");
    encode->add_option("--threads", enc_opts.threads, "worker thread cap (0 = hardware)");

    // --- decode ------------------------------------------------------------
    auto* decode = app.add_subcommand("decode", "decode a .phsw container to PGM");
    std::string dec_in, dec_out;
    decode->add_option("--in", dec_in, "input container path")->required();
    decode->add_option("--out", dec_out, "output PGM path")->required();

    // --- compare -----------------------------------------------------------
    auto* compare = app.add_subcommand("compare", "fixed-retention vs matched-PSNR experiment");
    InputSelection cmp_in;
    add_input_flags(compare, cmp_in);
    phsw::CompareOptions cmp_opts;
    std::string cmp_fixed = "phsd", cmp_prefix = "compare";
    compare->add_option("--keep", cmp_opts.keep, "retention for the fixed method");
    compare->add_option("--fixed", cmp_fixed, "method that runs at --keep (phsd|db)")
        ->check(CLI::IsMember({"phsd", "db"}));
    compare->add_option("--tolerance", cmp_opts.tolerance_db, "PSNR match tolerance in dB");
    compare->add_option("--order", cmp_opts.order_n, "filter order N")->check(CLI::Range(1, 12));
    compare->add_option("--levels", cmp_opts.levels, "decomposition levels (auto-reduced)")
        ->check(CLI::Range(0, 16));
    compare->add_option("--cscale", cmp_opts.c_scale, "frequency-to-theta scale c");
    compare->add_option("--threads", cmp_opts.threads, "worker thread cap (0 = hardware)");
    compare->add_option("--out-prefix", cmp_prefix, "prefix for the CSV and PGM outputs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // collapse CLI11's per-error exit codes onto the usage status, keeping
        // 0 for --help and --version
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    if (gen->parsed()) {
        phsw::save_pgm(phsw::gen_edge(phsw::parse_edge_kind(gen_kind), gen_size), gen_out);
        std::cout << "wrote " << gen_out << "\n";
        dump_filter_cache();
        return 0;
    }

    if (encode->parsed()) {
        enc_opts.method = parse_method(enc_method);
        enc_opts.threshold = enc_threshold;
        enc_opts.keep = enc_keep;
        enc_opts.step = enc_step;
        const phsw::ImageBuffer image = enc_in.load();
        const phsw::EncodeResult result = phsw::encode_image(image, enc_opts);
        write_file(enc_out, result.container);
        phsw::write_report_json(std::cout, result.report);
        std::cout << "\n";
        dump_filter_cache();
        return 0;
    }

    if (decode->parsed()) {
        const auto bytes = read_file(dec_in);
        phsw::save_pgm(phsw::decode_image(bytes), dec_out);
        std::cout << "wrote " << dec_out << "\n";
        dump_filter_cache();
        return 0;
    }

    // compare
    cmp_opts.fixed = parse_method(cmp_fixed);
    const phsw::ImageBuffer image = cmp_in.load();
    const phsw::CompareOutcome outcome = phsw::run_compare(image, cmp_opts);
    {
        std::ofstream csv(cmp_prefix + "_report.csv", std::ios::trunc);
        if (!csv) throw phsw::Error("cannot write " + cmp_prefix + "_report.csv");
        phsw::write_reports_csv(csv, {outcome.phsd, outcome.db});
    }
    phsw::save_pgm(outcome.original, cmp_prefix + "_original.pgm");
    phsw::save_pgm(outcome.phsd_reconstruction, cmp_prefix + "_phsd.pgm");
    phsw::save_pgm(outcome.db_reconstruction, cmp_prefix + "_db.pgm");
    phsw::save_pgm(phsw::difference_image(outcome.original, outcome.phsd_reconstruction, 8.0),
                   cmp_prefix + "_phsd_diff8x.pgm");
    phsw::save_pgm(phsw::difference_image(outcome.original, outcome.db_reconstruction, 8.0),
                   cmp_prefix + "_db_diff8x.pgm");
    phsw::write_reports_csv(std::cout, {outcome.phsd, outcome.db});
    dump_filter_cache();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const phsw::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const phsw::GeometryError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitGeometry;
    } catch (const phsw::CorruptStream& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCorrupt;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
