#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "phsw/codec.hpp"
#include "phsw/metrics.hpp"

namespace phsw {

struct EncodeOptions {
    Method method = Method::phsd;
    int order_n = 9;
    int levels = 4;  // reduced automatically when the geometry cannot support it
    double c_scale = kDefaultCScale;
    std::optional<double> threshold;    // exclusive with keep
    std::optional<std::int64_t> keep;   // retain the K largest (weighted)
    std::optional<double> step;         // force the quantization delta
    int threads = 0;                    // 0 = hardware concurrency
};

struct EncodeResult {
    std::vector<std::uint8_t> container;
    CompareReport report;
    ImageBuffer reconstruction;  // real-valued (unrounded) decoder output
    int levels_used = 0;
};

// Full encode: transform, threshold/keep, quantize, entropy-code, and report
// (PSNR against the input on the unrounded reconstruction, entropy of the
// quantized stream, compression ratio from the container size).
EncodeResult encode_image(const ImageBuffer& image, const EncodeOptions& options,
                          const FilterCache& cache = default_filter_cache());

// Full decode to integer samples (round half away from zero, clamped to the
// container's bit depth).
ImageBuffer decode_image(const std::uint8_t* data, std::size_t size,
                         const FilterCache& cache = default_filter_cache());
ImageBuffer decode_image(const std::vector<std::uint8_t>& bytes,
                         const FilterCache& cache = default_filter_cache());

// Clamp + round a real-valued reconstruction onto its integer grid.
ImageBuffer round_to_depth(const ImageBuffer& image);

struct MatchOptions {
    double target_psnr_db = 0.0;
    double tolerance_db = 0.25;
    EncodeOptions encode;  // threshold/keep ignored; the search drives tau
};

// Finds a threshold whose PSNR lands within tolerance_db of the target and
// returns the full encode at that threshold. The transform runs once; only
// thresholding, quantization, and the inverse repeat per candidate. Throws
// SearchFailure (carrying the closest achieved PSNR) when the target is
// unreachable.
EncodeResult match_psnr_search(const ImageBuffer& image, const MatchOptions& options,
                               const FilterCache& cache = default_filter_cache());

struct CompareOptions {
    std::int64_t keep = 48;
    Method fixed = Method::phsd;  // runs at `keep`; the other method is matched
    double tolerance_db = 0.25;
    int order_n = 9;
    int levels = 4;
    double c_scale = kDefaultCScale;
    int threads = 0;
};

struct CompareOutcome {
    CompareReport phsd;  // CSV row order is fixed: phsd first, then db
    CompareReport db;
    ImageBuffer original;
    ImageBuffer phsd_reconstruction;  // integer-rounded
    ImageBuffer db_reconstruction;
};

// The head-to-head experiment: one method runs at a fixed retention, the
// other is threshold-searched to the same PSNR, and both sides are reported.
CompareOutcome run_compare(const ImageBuffer& image, const CompareOptions& options,
                           const FilterCache& cache = default_filter_cache());

// Difference image amplified by `gain` around mid-gray and clamped, for the
// visual panels that accompany a compare run.
ImageBuffer difference_image(const ImageBuffer& reference, const ImageBuffer& test, double gain);

}  // namespace phsw
