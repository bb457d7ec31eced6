#include "phsw/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>

namespace phsw {
namespace {

void format_double(std::ostream& out, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf;
}

// JSON has no literal for non-finite numbers; quote them instead.
void format_json_number(std::ostream& out, double v) {
    if (std::isfinite(v)) {
        format_double(out, v);
    } else {
        out << '"';
        format_double(out, v);
        out << '"';
    }
}

}  // namespace

double psnr(const ImageBuffer& reference, const ImageBuffer& test) {
    if (reference.width != test.width || reference.height != test.height)
        throw GeometryError("psnr needs images of identical dimensions");
    double acc = 0.0;
    for (std::size_t i = 0; i < reference.samples.size(); ++i) {
        const double d = reference.samples[i] - test.samples[i];
        acc += d * d;
    }
    const double mse = acc / static_cast<double>(reference.samples.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    const double peak = reference.max_value();
    return 10.0 * std::log10(peak * peak / mse);
}

double total_entropy_bits(const QuantizedStream& stream) {
    std::map<std::int32_t, std::int64_t> counts;
    std::int64_t n = 0;
    for (const auto& band : stream.bands) {
        for (std::int32_t v : band.values) {
            if (v != 0) {
                ++counts[v];
                ++n;
            }
        }
    }
    if (n == 0) return 0.0;
    double bits = 0.0;
    for (const auto& [value, count] : counts)
        bits -= static_cast<double>(count) *
                std::log2(static_cast<double>(count) / static_cast<double>(n));
    return bits;
}

void write_reports_csv(std::ostream& out, const std::vector<CompareReport>& reports) {
    out << "method,num_coeffs,psnr_db,entropy_bits,compression_ratio,bits_encoded,threshold,"
           "runtime_ms\n";
    for (const auto& r : reports) {
        out << r.method << ',' << r.num_coeffs << ',';
        format_double(out, r.psnr_db);
        out << ',';
        format_double(out, r.entropy_bits);
        out << ',';
        format_double(out, r.compression_ratio);
        out << ',' << r.bits_encoded << ',';
        format_double(out, r.threshold);
        out << ',';
        format_double(out, r.runtime_ms);
        out << '\n';
    }
}

void write_report_json(std::ostream& out, const CompareReport& r) {
    out << "{\"method\":\"" << r.method << "\",\"num_coeffs\":" << r.num_coeffs << ",\"psnr_db\":";
    format_json_number(out, r.psnr_db);
    out << ",\"entropy_bits\":";
    format_json_number(out, r.entropy_bits);
    out << ",\"compression_ratio\":";
    format_json_number(out, r.compression_ratio);
    out << ",\"bits_encoded\":" << r.bits_encoded << ",\"threshold\":";
    format_json_number(out, r.threshold);
    out << ",\"runtime_ms\":";
    format_json_number(out, r.runtime_ms);
    out << "}";
}

}  // namespace phsw
