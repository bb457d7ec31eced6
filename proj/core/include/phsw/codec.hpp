#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "phsw/phsd2d.hpp"
#include "phsw/tensor_dwt.hpp"

namespace phsw {

enum class Method : std::uint8_t { phsd = 0, db = 1 };

enum class BandKind : std::uint8_t { approx = 0, detail = 1, ll = 2, hl = 3, lh = 4, hh = 5 };

// One contiguous span of quantized indices in canonical stream order. The
// adaptive coder keys its context on (kind, level, component) only, so spans
// from different rows of the same band share statistics.
struct BandSpan {
    BandKind kind = BandKind::approx;
    int level = 0;      // analysis level, 1-based from the finest; 0 for approx/ll
    int component = 0;  // 0 = real, 1 = imaginary
    int row_index = 0;  // phsd: stored DFT row; db: always 0
    std::vector<std::int32_t> values;
};

// Quantized transform in canonical order, ready for entropy coding. The
// canonical walk is:
//   phsd: per stored row (ascending bin): approx, details from coarsest
//         (level = levels) down to finest (level = 1); each band emits its
//         real span then its imaginary span.
//   db:   ll, then per level from coarsest to finest: hl, lh, hh (real only).
struct QuantizedStream {
    Method method = Method::phsd;
    int width = 0;
    int height = 0;
    int levels = 0;
    int order_n = 0;
    std::uint32_t c_scale_micro = 0;  // llround(c_scale * 1e6); 0 for db
    double delta = 1.0;               // quantization step, exactly representable
    int bit_depth = 8;
    bool hermitian = true;  // phsd: reduced row set stored
    std::vector<BandSpan> bands;

    std::int64_t retained_count() const;  // nonzero indices across all spans
};

// Round a c-scale to its stored micro-unit grid. Encoders quantize the user
// value once at ingestion and use the snapped value everywhere, so a decoder
// reading c_scale_micro reproduces the transform bit-exactly.
std::uint32_t c_scale_to_micro(double c_scale);
double c_scale_from_micro(std::uint32_t micro);

// --- Thresholding ---------------------------------------------------------
// Approximation coefficients (every stored row's approx band for phsd, the
// ll band for db) are exempt: thresholding never zeroes them and keep
// budgets count their nonzero entries first. Retained counts weight each
// phsd coefficient by its Hermitian row multiplicity so they estimate the
// full (unreduced) coefficient field.

struct ThresholdOutcome {
    double threshold = 0.0;        // as applied (keep mode: smallest kept modulus)
    std::int64_t retained = 0;     // weighted nonzero count after zeroing
};

ThresholdOutcome apply_threshold(PhsdPyramid& pyramid, double tau);
ThresholdOutcome apply_threshold(TensorPyramid& pyramid, double tau);

// Zero everything except the `keep` largest-modulus coefficients (weighted
// count, exempt bands retained first; ties broken by modulus then stream
// position, so results are deterministic).
ThresholdOutcome keep_largest(PhsdPyramid& pyramid, std::int64_t keep);
ThresholdOutcome keep_largest(TensorPyramid& pyramid, std::int64_t keep);

// Step used by the encoders when the caller does not force one: half the
// applied threshold, or 1.0 when no thresholding happened (tau = 0 or an
// all-exempt keep). A floor of peak_modulus * 2^-20 keeps the index range
// bounded when the threshold lands in the numerical-dust regime.
double default_delta(double threshold, double peak_modulus);

// Largest energy-normalized coefficient modulus (the scale the delta floor
// and overflow checks refer to).
double peak_modulus(const PhsdPyramid& pyramid);
double peak_modulus(const TensorPyramid& pyramid);

// --- Quantization ---------------------------------------------------------
// index = round(value / delta), half away from zero. |index| >= 2^31 throws
// OverflowError. Dequantization is index * delta per real component.

QuantizedStream quantize(const PhsdPyramid& pyramid, double delta, int bit_depth,
                         std::uint32_t c_scale_micro);
QuantizedStream quantize(const TensorPyramid& pyramid, double delta, int bit_depth);
PhsdPyramid dequantize_phsd(const QuantizedStream& stream);
TensorPyramid dequantize_tensor(const QuantizedStream& stream);

// --- Container ------------------------------------------------------------
// Fixed 42-byte little-endian header ("PHSW", version, method, geometry,
// delta as mantissa/exponent, payload size) followed by the range-coded
// payload. serialize is deterministic; deserialize validates every field and
// throws CorruptStream on any inconsistency.

std::vector<std::uint8_t> serialize(const QuantizedStream& stream);
QuantizedStream deserialize(const std::uint8_t* data, std::size_t size);
QuantizedStream deserialize(const std::vector<std::uint8_t>& bytes);

}  // namespace phsw
