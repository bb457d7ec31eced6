#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "phsw/codec.hpp"
#include "phsw/image.hpp"

namespace phsw {

// Peak signal-to-noise ratio in dB with MAX = 2^bit_depth - 1 from the
// reference; +infinity when the images agree exactly. GeometryError on
// mismatched dimensions.
double psnr(const ImageBuffer& reference, const ImageBuffer& test);

// Total information content of the nonzero quantized indices: -sum_s n_s *
// log2(n_s / n) bits over the empirical symbol distribution. A stream whose
// nonzero indices are all equal scores 0.
double total_entropy_bits(const QuantizedStream& stream);

struct CompareReport {
    std::string method;            // "phsd" or "db"
    std::int64_t num_coeffs = 0;   // weighted retained coefficients
    double psnr_db = 0.0;
    double entropy_bits = 0.0;
    double compression_ratio = 0.0;  // raw bits / bits_encoded
    std::int64_t bits_encoded = 0;   // 8 * container size
    double threshold = 0.0;
    double runtime_ms = 0.0;
};

// CSV with a fixed header row; fields in declaration order.
void write_reports_csv(std::ostream& out, const std::vector<CompareReport>& reports);
// Single-line JSON object, keys matching the CSV header.
void write_report_json(std::ostream& out, const CompareReport& report);

}  // namespace phsw
