#pragma once

#include <cstdint>
#include <vector>

#include "phsw/error.hpp"

namespace phsw {

// Byte-oriented range coder with carry propagation via a cache byte and a
// pending-0xFF run, as in the LZMA family. The first emitted byte is a dummy
// zero; the decoder consumes it while priming its 40-bit window.
class RangeEncoder {
  public:
    explicit RangeEncoder(std::vector<std::uint8_t>& out);
    void encode(std::uint32_t cum_freq, std::uint32_t freq, std::uint32_t total);
    void encode_bits(std::uint32_t value, int bit_count);  // MSB first, uniform halves
    void flush();

  private:
    void shift_low();

    std::vector<std::uint8_t>& out_;
    std::uint64_t low_ = 0;
    std::uint32_t range_ = 0xFFFFFFFFu;
    std::uint8_t cache_ = 0;
    std::uint64_t pending_ = 0;
    bool flushed_ = false;
};

class RangeDecoder {
  public:
    // Decodes from [data, data + size); throws CorruptStream when the stream
    // is shorter than its 5-byte preamble or a read runs past the end.
    RangeDecoder(const std::uint8_t* data, std::size_t size);
    // Returns a value in [0, total); caller maps it to a symbol and commits
    // with the symbol's (cum_freq, freq).
    std::uint32_t decode_target(std::uint32_t total);
    void commit(std::uint32_t cum_freq, std::uint32_t freq, std::uint32_t total);
    std::uint32_t decode_bits(int bit_count);
    std::size_t consumed() const { return pos_; }

  private:
    std::uint8_t next_byte();

    const std::uint8_t* data_;
    std::size_t size_;
    std::size_t pos_ = 0;
    std::uint32_t range_ = 0xFFFFFFFFu;
    std::uint32_t code_ = 0;
};

// Adaptive order-0 model over 257 symbols: byte values 0..255 plus an escape
// at index 256. Counts start at 1, an observed symbol gains 32, and when the
// total reaches 2^16 every count is halved (floor, never below 1). Cumulative
// sums are maintained in a Fenwick tree so updates and lookups are O(log n).
class AdaptiveByteModel {
  public:
    static constexpr int kSymbolCount = 257;
    static constexpr int kEscapeSymbol = 256;

    AdaptiveByteModel();
    void encode(RangeEncoder& enc, int symbol);
    int decode(RangeDecoder& dec);

  private:
    std::uint32_t cumulative(int symbol) const;  // sum of counts below `symbol`
    int find(std::uint32_t target) const;
    void add(int symbol, std::int32_t delta);
    void rescale();

    std::vector<std::uint32_t> tree_;
    std::uint32_t total_ = 0;
};

// Zigzag order 0, -1, 1, -2, 2, ... so small-magnitude indices share the low
// symbol range.
inline std::uint32_t zigzag_encode(std::int64_t v) {
    return v >= 0 ? static_cast<std::uint32_t>(2 * v)
                  : static_cast<std::uint32_t>(2 * (-v) - 1);
}
inline std::int64_t zigzag_decode(std::uint32_t z) {
    return (z & 1u) ? -static_cast<std::int64_t>((z + 1) / 2)
                    : static_cast<std::int64_t>(z / 2);
}

}  // namespace phsw
