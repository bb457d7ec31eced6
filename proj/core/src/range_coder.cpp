#include "phsw/range_coder.hpp"

namespace phsw {

namespace {
constexpr std::uint32_t kTopValue = 1u << 24;
constexpr std::uint32_t kRescaleLimit = 1u << 16;
constexpr std::uint32_t kIncrement = 32;
}  // namespace

RangeEncoder::RangeEncoder(std::vector<std::uint8_t>& out) : out_(out) {}

void RangeEncoder::shift_low() {
    const std::uint32_t carry = static_cast<std::uint32_t>(low_ >> 32);
    if (low_ < 0xFF000000ull || carry) {
        // The very first emitted byte is the zero-initialized cache: a dummy
        // leading zero the decoder swallows while priming its window.
        out_.push_back(static_cast<std::uint8_t>(cache_ + carry));
        while (pending_ > 0) {
            out_.push_back(static_cast<std::uint8_t>(0xFF + carry));
            --pending_;
        }
        cache_ = static_cast<std::uint8_t>(low_ >> 24);
    } else {
        ++pending_;
    }
    low_ = (low_ << 8) & 0xFFFFFFFFull;
}

void RangeEncoder::encode(std::uint32_t cum_freq, std::uint32_t freq, std::uint32_t total) {
    const std::uint32_t r = range_ / total;
    low_ += static_cast<std::uint64_t>(r) * cum_freq;
    range_ = r * freq;
    while (range_ < kTopValue) {
        shift_low();
        range_ <<= 8;
    }
}

void RangeEncoder::encode_bits(std::uint32_t value, int bit_count) {
    for (int i = bit_count - 1; i >= 0; --i) {
        range_ >>= 1;
        if ((value >> i) & 1u) low_ += range_;
        while (range_ < kTopValue) {
            shift_low();
            range_ <<= 8;
        }
    }
}

void RangeEncoder::flush() {
    if (flushed_) return;
    flushed_ = true;
    for (int i = 0; i < 5; ++i) shift_low();
}

RangeDecoder::RangeDecoder(const std::uint8_t* data, std::size_t size)
    : data_(data), size_(size) {
    if (size_ < 5) throw CorruptStream("range-coded payload shorter than its preamble");
    for (int i = 0; i < 5; ++i) code_ = (code_ << 8) | next_byte();
}

std::uint8_t RangeDecoder::next_byte() {
    if (pos_ >= size_) throw CorruptStream("range-coded payload truncated");
    return data_[pos_++];
}

std::uint32_t RangeDecoder::decode_target(std::uint32_t total) {
    const std::uint32_t r = range_ / total;
    const std::uint32_t dv = code_ / r;
    return dv < total ? dv : total - 1;
}

void RangeDecoder::commit(std::uint32_t cum_freq, std::uint32_t freq, std::uint32_t total) {
    const std::uint32_t r = range_ / total;
    code_ -= r * cum_freq;
    range_ = r * freq;
    while (range_ < kTopValue) {
        code_ = (code_ << 8) | next_byte();
        range_ <<= 8;
    }
}

std::uint32_t RangeDecoder::decode_bits(int bit_count) {
    std::uint32_t value = 0;
    for (int i = 0; i < bit_count; ++i) {
        range_ >>= 1;
        std::uint32_t bit = 0;
        if (code_ >= range_) {
            code_ -= range_;
            bit = 1;
        }
        value = (value << 1) | bit;
        while (range_ < kTopValue) {
            code_ = (code_ << 8) | next_byte();
            range_ <<= 8;
        }
    }
    return value;
}

AdaptiveByteModel::AdaptiveByteModel() : tree_(kSymbolCount + 1, 0) {
    for (int s = 0; s < kSymbolCount; ++s) add(s, 1);
    total_ = kSymbolCount;
}

void AdaptiveByteModel::add(int symbol, std::int32_t delta) {
    for (int i = symbol + 1; i <= kSymbolCount; i += i & (-i))
        tree_[i] = static_cast<std::uint32_t>(static_cast<std::int64_t>(tree_[i]) + delta);
}

std::uint32_t AdaptiveByteModel::cumulative(int symbol) const {
    std::uint32_t sum = 0;
    for (int i = symbol; i > 0; i -= i & (-i)) sum += tree_[i];
    return sum;
}

int AdaptiveByteModel::find(std::uint32_t target) const {
    int pos = 0;
    std::uint32_t rem = target;
    int step = 1;
    while ((step << 1) <= kSymbolCount) step <<= 1;
    for (; step > 0; step >>= 1) {
        const int next = pos + step;
        if (next <= kSymbolCount && tree_[next] <= rem) {
            pos = next;
            rem -= tree_[next];
        }
    }
    return pos;
}

void AdaptiveByteModel::rescale() {
    std::vector<std::uint32_t> counts(kSymbolCount);
    for (int s = 0; s < kSymbolCount; ++s)
        counts[s] = cumulative(s + 1) - cumulative(s);
    std::fill(tree_.begin(), tree_.end(), 0u);
    total_ = 0;
    for (int s = 0; s < kSymbolCount; ++s) {
        const std::uint32_t halved = counts[s] / 2 > 0 ? counts[s] / 2 : 1;
        add(s, static_cast<std::int32_t>(halved));
        total_ += halved;
    }
}

void AdaptiveByteModel::encode(RangeEncoder& enc, int symbol) {
    const std::uint32_t cum = cumulative(symbol);
    const std::uint32_t freq = cumulative(symbol + 1) - cum;
    enc.encode(cum, freq, total_);
    add(symbol, kIncrement);
    total_ += kIncrement;
    if (total_ >= kRescaleLimit) rescale();
}

int AdaptiveByteModel::decode(RangeDecoder& dec) {
    const std::uint32_t target = dec.decode_target(total_);
    const int symbol = find(target);
    const std::uint32_t cum = cumulative(symbol);
    const std::uint32_t freq = cumulative(symbol + 1) - cum;
    dec.commit(cum, freq, total_);
    add(symbol, kIncrement);
    total_ += kIncrement;
    if (total_ >= kRescaleLimit) rescale();
    return symbol;
}

}  // namespace phsw
