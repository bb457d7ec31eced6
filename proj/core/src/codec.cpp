#include "phsw/codec.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <tuple>

#include "phsw/range_coder.hpp"

namespace phsw {
namespace {

// Energy normalization: with the 1/H forward DFT, image energy equals H times
// the (multiplicity-weighted) coefficient energy, so coefficients enter the
// codec scaled by sqrt(H). Thresholds and deltas then carry image-energy
// units for both methods.
double energy_weight(int height) { return std::sqrt(static_cast<double>(height)); }

bool nonzero(const std::complex<double>& c) { return c.real() != 0.0 || c.imag() != 0.0; }

struct SpanGeom {
    BandKind kind;
    int level;
    int component;
    int row_index;
    std::int64_t length;
};

std::vector<SpanGeom> stream_layout(Method method, int width, int height, int levels,
                                    bool hermitian) {
    std::vector<SpanGeom> out;
    if (method == Method::phsd) {
        const int rows = hermitian ? height / 2 + 1 : height;
        for (int k = 0; k < rows; ++k) {
            for (int comp = 0; comp < 2; ++comp)
                out.push_back({BandKind::approx, 0, comp, k, width >> levels});
            for (int ell = levels; ell >= 1; --ell)
                for (int comp = 0; comp < 2; ++comp)
                    out.push_back({BandKind::detail, ell, comp, k, width >> ell});
        }
    } else {
        const std::int64_t ll = static_cast<std::int64_t>(width >> levels) * (height >> levels);
        out.push_back({BandKind::ll, 0, 0, 0, ll});
        for (int ell = levels; ell >= 1; --ell) {
            const std::int64_t n = static_cast<std::int64_t>(width >> ell) * (height >> ell);
            out.push_back({BandKind::hl, ell, 0, 0, n});
            out.push_back({BandKind::lh, ell, 0, 0, n});
            out.push_back({BandKind::hh, ell, 0, 0, n});
        }
    }
    return out;
}

std::int32_t quantize_value(double value, double delta) {
    const double r = std::round(value / delta);
    if (!(std::abs(r) < 2147483648.0))
        throw OverflowError("quantization index " + std::to_string(r) +
                            " exceeds the 32-bit index range (delta too small)");
    return static_cast<std::int32_t>(r);
}

void append_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void append_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t read_u32(const std::uint8_t* p) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

std::uint64_t read_u64(const std::uint8_t* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

constexpr char kMagic[4] = {'P', 'H', 'S', 'W'};
constexpr std::uint8_t kVersion = 1;
constexpr std::size_t kHeaderSize = 42;
constexpr int kMaxDimension = 1 << 16;
constexpr std::int64_t kMaxPixels = std::int64_t{1} << 26;

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

void validate_geometry(Method method, int width, int height, int levels, int order_n,
                       int bit_depth, bool hermitian) {
    if (width <= 0 || height <= 0 || width > kMaxDimension || height > kMaxDimension)
        throw CorruptStream("container geometry out of range");
    if (static_cast<std::int64_t>(width) * height > kMaxPixels)
        throw CorruptStream("container image too large");
    if (order_n < 1 || order_n > kMaxOrder) throw CorruptStream("container order out of range");
    if (levels < 0 || levels > 16) throw CorruptStream("container level count out of range");
    if (bit_depth != 8 && bit_depth != 16) throw CorruptStream("container bit depth invalid");
    if (method == Method::phsd) {
        if (!hermitian) throw CorruptStream("phsd containers must be Hermitian-reduced");
        if (!is_pow2(width) || !is_pow2(height))
            throw CorruptStream("phsd container needs power-of-two dimensions");
        if (effective_levels(width, order_n, levels) < levels)
            throw CorruptStream("phsd container levels do not fit its width");
    } else {
        if (hermitian) throw CorruptStream("db containers carry no Hermitian flag");
        if (effective_levels(width, order_n, levels) < levels ||
            effective_levels(height, order_n, levels) < levels)
            throw CorruptStream("db container levels do not fit its geometry");
    }
}

// Candidate coefficient for keep selection.
struct Candidate {
    double modulus;
    std::int64_t position;
    std::complex<double>* phsd_value;
    double* db_value;
    int mult;
};

void sort_candidates(std::vector<Candidate>& c) {
    std::sort(c.begin(), c.end(), [](const Candidate& a, const Candidate& b) {
        if (a.modulus != b.modulus) return a.modulus > b.modulus;
        return a.position < b.position;
    });
}

}  // namespace

std::int64_t QuantizedStream::retained_count() const {
    std::int64_t n = 0;
    for (const auto& band : bands)
        for (std::int32_t v : band.values)
            if (v != 0) ++n;
    return n;
}

std::uint32_t c_scale_to_micro(double c_scale) {
    if (!(c_scale >= 0.0) || !(c_scale * 1e6 <= 4294967295.0))
        throw Error("c_scale must lie in [0, ~4294.97]");
    return static_cast<std::uint32_t>(std::llround(c_scale * 1e6));
}

double c_scale_from_micro(std::uint32_t micro) { return micro / 1e6; }

double default_delta(double threshold, double peak) {
    double delta = (std::isfinite(threshold) && threshold > 0.0) ? threshold / 2.0 : 1.0;
    if (peak > 0.0) delta = std::max(delta, peak * 0x1p-20);
    return delta;
}

double peak_modulus(const PhsdPyramid& pyramid) {
    const double w = energy_weight(pyramid.height);
    double peak = 0.0;
    for (const auto& row : pyramid.rows) {
        for (const auto& c : row.approx) peak = std::max(peak, std::abs(c));
        for (const auto& band : row.details)
            for (const auto& c : band) peak = std::max(peak, std::abs(c));
    }
    return peak * w;
}

double peak_modulus(const TensorPyramid& pyramid) {
    double peak = 0.0;
    for (double v : pyramid.ll) peak = std::max(peak, std::abs(v));
    for (const auto& band : pyramid.bands) {
        for (double v : band.hl) peak = std::max(peak, std::abs(v));
        for (double v : band.lh) peak = std::max(peak, std::abs(v));
        for (double v : band.hh) peak = std::max(peak, std::abs(v));
    }
    return peak;
}

ThresholdOutcome apply_threshold(PhsdPyramid& pyramid, double tau) {
    if (tau < 0.0 || std::isnan(tau)) throw Error("threshold must be nonnegative");
    const double w = energy_weight(pyramid.height);
    ThresholdOutcome out;
    out.threshold = tau;
    for (std::size_t k = 0; k < pyramid.rows.size(); ++k) {
        const int mult = pyramid.row_multiplicity(k);
        auto& row = pyramid.rows[k];
        for (const auto& c : row.approx)
            if (nonzero(c)) out.retained += mult;
        for (auto& band : row.details) {
            for (auto& c : band) {
                if (w * std::abs(c) < tau) c = 0.0;
                if (nonzero(c)) out.retained += mult;
            }
        }
    }
    return out;
}

ThresholdOutcome apply_threshold(TensorPyramid& pyramid, double tau) {
    if (tau < 0.0 || std::isnan(tau)) throw Error("threshold must be nonnegative");
    ThresholdOutcome out;
    out.threshold = tau;
    for (double v : pyramid.ll)
        if (v != 0.0) ++out.retained;
    for (auto& band : pyramid.bands) {
        for (auto* values : {&band.hl, &band.lh, &band.hh}) {
            for (double& v : *values) {
                if (std::abs(v) < tau) v = 0.0;
                if (v != 0.0) ++out.retained;
            }
        }
    }
    return out;
}

ThresholdOutcome keep_largest(PhsdPyramid& pyramid, std::int64_t keep) {
    if (keep < 0) throw Error("keep must be nonnegative");
    const double w = energy_weight(pyramid.height);
    std::int64_t exempt = 0;
    std::vector<Candidate> candidates;
    std::int64_t position = 0;
    for (std::size_t k = 0; k < pyramid.rows.size(); ++k) {
        const int mult = pyramid.row_multiplicity(k);
        auto& row = pyramid.rows[k];
        for (const auto& c : row.approx) {
            if (nonzero(c)) exempt += mult;
            ++position;
        }
        for (auto& band : row.details) {
            for (auto& c : band) {
                if (nonzero(c))
                    candidates.push_back({w * std::abs(c), position, &c, nullptr, mult});
                ++position;
            }
        }
    }
    sort_candidates(candidates);
    ThresholdOutcome out;
    out.retained = exempt;
    out.threshold = std::numeric_limits<double>::infinity();
    std::int64_t budget = keep - exempt;
    for (auto& cand : candidates) {
        if (cand.mult <= budget) {
            budget -= cand.mult;
            out.retained += cand.mult;
            out.threshold = cand.modulus;
        } else {
            *cand.phsd_value = 0.0;
        }
    }
    return out;
}

ThresholdOutcome keep_largest(TensorPyramid& pyramid, std::int64_t keep) {
    if (keep < 0) throw Error("keep must be nonnegative");
    std::int64_t exempt = 0;
    for (double v : pyramid.ll)
        if (v != 0.0) ++exempt;
    std::vector<Candidate> candidates;
    std::int64_t position = static_cast<std::int64_t>(pyramid.ll.size());
    for (auto& band : pyramid.bands) {
        for (auto* values : {&band.hl, &band.lh, &band.hh}) {
            for (double& v : *values) {
                if (v != 0.0) candidates.push_back({std::abs(v), position, nullptr, &v, 1});
                ++position;
            }
        }
    }
    sort_candidates(candidates);
    ThresholdOutcome out;
    out.retained = exempt;
    out.threshold = std::numeric_limits<double>::infinity();
    std::int64_t budget = keep - exempt;
    for (auto& cand : candidates) {
        if (cand.mult <= budget) {
            budget -= cand.mult;
            out.retained += cand.mult;
            out.threshold = cand.modulus;
        } else {
            *cand.db_value = 0.0;
        }
    }
    return out;
}

QuantizedStream quantize(const PhsdPyramid& pyramid, double delta, int bit_depth,
                         std::uint32_t c_scale_micro) {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw Error("delta must be positive and finite");
    const double w = energy_weight(pyramid.height);
    QuantizedStream s;
    s.method = Method::phsd;
    s.width = pyramid.width;
    s.height = pyramid.height;
    s.levels = pyramid.levels;
    s.order_n = pyramid.order_n;
    s.c_scale_micro = c_scale_micro;
    s.delta = delta;
    s.bit_depth = bit_depth;
    s.hermitian = pyramid.hermitian_reduced;
    for (int k = 0; k < static_cast<int>(pyramid.rows.size()); ++k) {
        const auto& row = pyramid.rows[k];
        auto emit = [&](BandKind kind, int level, const std::vector<std::complex<double>>& band) {
            for (int comp = 0; comp < 2; ++comp) {
                BandSpan span;
                span.kind = kind;
                span.level = level;
                span.component = comp;
                span.row_index = k;
                span.values.reserve(band.size());
                for (const auto& c : band)
                    span.values.push_back(
                        quantize_value(w * (comp == 0 ? c.real() : c.imag()), delta));
                s.bands.push_back(std::move(span));
            }
        };
        emit(BandKind::approx, 0, row.approx);
        for (int ell = pyramid.levels; ell >= 1; --ell)
            emit(BandKind::detail, ell, row.details[ell - 1]);
    }
    return s;
}

QuantizedStream quantize(const TensorPyramid& pyramid, double delta, int bit_depth) {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw Error("delta must be positive and finite");
    QuantizedStream s;
    s.method = Method::db;
    s.width = pyramid.width;
    s.height = pyramid.height;
    s.levels = pyramid.levels;
    s.order_n = pyramid.order_n;
    s.c_scale_micro = 0;
    s.delta = delta;
    s.bit_depth = bit_depth;
    s.hermitian = false;
    auto emit = [&](BandKind kind, int level, const std::vector<double>& values) {
        BandSpan span;
        span.kind = kind;
        span.level = level;
        span.component = 0;
        span.row_index = 0;
        span.values.reserve(values.size());
        for (double v : values) span.values.push_back(quantize_value(v, delta));
        s.bands.push_back(std::move(span));
    };
    emit(BandKind::ll, 0, pyramid.ll);
    for (int ell = pyramid.levels; ell >= 1; --ell) {
        const auto& band = pyramid.bands[ell - 1];
        emit(BandKind::hl, ell, band.hl);
        emit(BandKind::lh, ell, band.lh);
        emit(BandKind::hh, ell, band.hh);
    }
    return s;
}

PhsdPyramid dequantize_phsd(const QuantizedStream& s) {
    if (s.method != Method::phsd) throw Error("stream method is not phsd");
    const auto layout = stream_layout(s.method, s.width, s.height, s.levels, s.hermitian);
    if (layout.size() != s.bands.size()) throw CorruptStream("band structure mismatch");
    const double w = energy_weight(s.height);
    const double c_eff = c_scale_from_micro(s.c_scale_micro);

    PhsdPyramid pyr;
    pyr.width = s.width;
    pyr.height = s.height;
    pyr.order_n = s.order_n;
    pyr.levels = s.levels;
    pyr.c_scale = c_eff;
    pyr.hermitian_reduced = s.hermitian;
    const int rows = s.height / 2 + 1;
    pyr.rows.resize(rows);
    for (int k = 0; k < rows; ++k) {
        auto& row = pyr.rows[k];
        row.eta_index = (k < s.height / 2) ? k : -s.height / 2;
        row.theta_base = c_eff * std::abs(row.eta_index) / s.height;
        row.levels = s.levels;
        row.original_length = s.width;
        row.approx.assign(s.width >> s.levels, 0.0);
        row.details.resize(s.levels);
        for (int ell = 1; ell <= s.levels; ++ell)
            row.details[ell - 1].assign(s.width >> ell, 0.0);
    }
    for (std::size_t b = 0; b < layout.size(); ++b) {
        const SpanGeom& g = layout[b];
        const BandSpan& span = s.bands[b];
        if (span.kind != g.kind || span.level != g.level || span.component != g.component ||
            span.row_index != g.row_index ||
            static_cast<std::int64_t>(span.values.size()) != g.length)
            throw CorruptStream("band span does not match the canonical layout");
        auto& row = pyr.rows[g.row_index];
        auto& target = (g.kind == BandKind::approx) ? row.approx : row.details[g.level - 1];
        for (std::size_t i = 0; i < span.values.size(); ++i) {
            const double v = span.values[i] * s.delta / w;
            if (g.component == 0)
                target[i] = std::complex<double>(v, target[i].imag());
            else
                target[i] = std::complex<double>(target[i].real(), v);
        }
    }
    return pyr;
}

TensorPyramid dequantize_tensor(const QuantizedStream& s) {
    if (s.method != Method::db) throw Error("stream method is not db");
    const auto layout = stream_layout(s.method, s.width, s.height, s.levels, s.hermitian);
    if (layout.size() != s.bands.size()) throw CorruptStream("band structure mismatch");

    TensorPyramid pyr;
    pyr.width = s.width;
    pyr.height = s.height;
    pyr.order_n = s.order_n;
    pyr.levels = s.levels;
    pyr.ll_width = s.width >> s.levels;
    pyr.ll_height = s.height >> s.levels;
    pyr.ll.assign(static_cast<std::size_t>(pyr.ll_width) * pyr.ll_height, 0.0);
    pyr.bands.resize(s.levels);
    for (int ell = 1; ell <= s.levels; ++ell) {
        auto& band = pyr.bands[ell - 1];
        band.width = s.width >> ell;
        band.height = s.height >> ell;
        const std::size_t n = static_cast<std::size_t>(band.width) * band.height;
        band.hl.assign(n, 0.0);
        band.lh.assign(n, 0.0);
        band.hh.assign(n, 0.0);
    }
    for (std::size_t b = 0; b < layout.size(); ++b) {
        const SpanGeom& g = layout[b];
        const BandSpan& span = s.bands[b];
        if (span.kind != g.kind || span.level != g.level || span.component != g.component ||
            span.row_index != g.row_index ||
            static_cast<std::int64_t>(span.values.size()) != g.length)
            throw CorruptStream("band span does not match the canonical layout");
        std::vector<double>* target = nullptr;
        if (g.kind == BandKind::ll)
            target = &pyr.ll;
        else if (g.kind == BandKind::hl)
            target = &pyr.bands[g.level - 1].hl;
        else if (g.kind == BandKind::lh)
            target = &pyr.bands[g.level - 1].lh;
        else if (g.kind == BandKind::hh)
            target = &pyr.bands[g.level - 1].hh;
        else
            throw CorruptStream("unexpected band kind in a db stream");
        for (std::size_t i = 0; i < span.values.size(); ++i)
            (*target)[i] = span.values[i] * s.delta;
    }
    return pyr;
}

std::vector<std::uint8_t> serialize(const QuantizedStream& s) {
    validate_geometry(s.method, s.width, s.height, s.levels, s.order_n, s.bit_depth, s.hermitian);
    if (!(s.delta > 0.0) || !std::isfinite(s.delta)) throw Error("delta must be positive");
    const auto layout = stream_layout(s.method, s.width, s.height, s.levels, s.hermitian);
    if (layout.size() != s.bands.size()) throw Error("band structure does not match the layout");
    for (std::size_t b = 0; b < layout.size(); ++b)
        if (s.bands[b].kind != layout[b].kind || s.bands[b].level != layout[b].level ||
            s.bands[b].component != layout[b].component ||
            s.bands[b].row_index != layout[b].row_index ||
            static_cast<std::int64_t>(s.bands[b].values.size()) != layout[b].length)
            throw Error("band span does not match the canonical layout");

    std::vector<std::uint8_t> payload;
    {
        RangeEncoder enc(payload);
        std::map<std::tuple<int, int, int>, AdaptiveByteModel> contexts;
        for (const auto& band : s.bands) {
            auto& model = contexts[{static_cast<int>(band.kind), band.level, band.component}];
            for (std::int32_t v : band.values) {
                const std::uint32_t z = zigzag_encode(v);
                if (z < 256) {
                    model.encode(enc, static_cast<int>(z));
                } else {
                    model.encode(enc, AdaptiveByteModel::kEscapeSymbol);
                    enc.encode_bits(z, 32);
                }
            }
        }
        enc.flush();
    }

    std::vector<std::uint8_t> out;
    out.reserve(kHeaderSize + payload.size());
    out.insert(out.end(), kMagic, kMagic + 4);
    out.push_back(kVersion);
    out.push_back(static_cast<std::uint8_t>(s.method));
    append_u32(out, static_cast<std::uint32_t>(s.width));
    append_u32(out, static_cast<std::uint32_t>(s.height));
    out.push_back(static_cast<std::uint8_t>(s.levels));
    out.push_back(static_cast<std::uint8_t>(s.order_n));
    append_u32(out, s.c_scale_micro);
    int exponent = 0;
    const double fraction = std::frexp(s.delta, &exponent);
    const std::int64_t mantissa = std::llround(fraction * 9007199254740992.0);  // 2^53
    append_u64(out, static_cast<std::uint64_t>(mantissa));
    append_u32(out, static_cast<std::uint32_t>(exponent - 53));
    out.push_back(static_cast<std::uint8_t>(s.bit_depth));
    out.push_back(s.hermitian ? 1 : 0);
    append_u64(out, payload.size());
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

QuantizedStream deserialize(const std::uint8_t* data, std::size_t size) {
    if (size < kHeaderSize) throw CorruptStream("container shorter than its header");
    if (std::memcmp(data, kMagic, 4) != 0) throw CorruptStream("bad container magic");
    if (data[4] != kVersion) throw CorruptStream("unsupported container version");
    if (data[5] > 1) throw CorruptStream("unknown method");

    QuantizedStream s;
    s.method = static_cast<Method>(data[5]);
    s.width = static_cast<int>(read_u32(data + 6));
    s.height = static_cast<int>(read_u32(data + 10));
    s.levels = data[14];
    s.order_n = data[15];
    s.c_scale_micro = read_u32(data + 16);
    const std::int64_t mantissa = static_cast<std::int64_t>(read_u64(data + 20));
    const std::int32_t exponent = static_cast<std::int32_t>(read_u32(data + 28));
    s.bit_depth = data[32];
    s.hermitian = data[33] != 0;
    if (data[33] > 1) throw CorruptStream("invalid Hermitian flag");
    const std::uint64_t payload_size = read_u64(data + 34);

    validate_geometry(s.method, s.width, s.height, s.levels, s.order_n, s.bit_depth, s.hermitian);
    if (mantissa <= 0 || mantissa > 9007199254740992ll)
        throw CorruptStream("container delta mantissa out of range");
    if (exponent < -2000 || exponent > 2000)
        throw CorruptStream("container delta exponent out of range");
    s.delta = std::ldexp(static_cast<double>(mantissa), exponent);
    if (!(s.delta > 0.0) || !std::isfinite(s.delta))
        throw CorruptStream("container delta is not a positive finite number");
    if (payload_size != size - kHeaderSize)
        throw CorruptStream("payload size field disagrees with the container size");

    const auto layout = stream_layout(s.method, s.width, s.height, s.levels, s.hermitian);
    RangeDecoder dec(data + kHeaderSize, size - kHeaderSize);
    std::map<std::tuple<int, int, int>, AdaptiveByteModel> contexts;
    for (const SpanGeom& g : layout) {
        BandSpan span;
        span.kind = g.kind;
        span.level = g.level;
        span.component = g.component;
        span.row_index = g.row_index;
        span.values.reserve(static_cast<std::size_t>(g.length));
        auto& model = contexts[{static_cast<int>(g.kind), g.level, g.component}];
        for (std::int64_t i = 0; i < g.length; ++i) {
            const int symbol = model.decode(dec);
            std::uint32_t z;
            if (symbol == AdaptiveByteModel::kEscapeSymbol) {
                z = dec.decode_bits(32);
                if (z < 256) throw CorruptStream("escaped symbol encodes a non-escape value");
            } else {
                z = static_cast<std::uint32_t>(symbol);
            }
            const std::int64_t v = zigzag_decode(z);
            span.values.push_back(static_cast<std::int32_t>(v));
        }
        s.bands.push_back(std::move(span));
    }
    return s;
}

QuantizedStream deserialize(const std::vector<std::uint8_t>& bytes) {
    return deserialize(bytes.data(), bytes.size());
}

}  // namespace phsw
