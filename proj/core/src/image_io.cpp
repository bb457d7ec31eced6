#include "phsw/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <string>

namespace phsw {
namespace {

constexpr int kMaxSide = 32768;
constexpr std::int64_t kMaxPixels = std::int64_t{1} << 24;

bool is_pnm_space(std::uint8_t c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

struct Cursor {
    const std::uint8_t* data;
    std::size_t size;
    std::size_t pos = 0;

    bool eof() const { return pos >= size; }
    std::uint8_t peek() const { return data[pos]; }
};

// Whitespace and '#' comments between PGM header tokens.
void skip_pnm_separators(Cursor& c) {
    while (!c.eof()) {
        if (is_pnm_space(c.peek())) {
            ++c.pos;
        } else if (c.peek() == '#') {
            while (!c.eof() && c.peek() != '\n') ++c.pos;
        } else {
            break;
        }
    }
}

std::int64_t read_pnm_int(Cursor& c, const char* what) {
    skip_pnm_separators(c);
    const std::size_t start = c.pos;
    if (c.eof() || c.peek() < '0' || c.peek() > '9')
        throw ParseError(std::string("expected ") + what, c.pos);
    std::int64_t value = 0;
    while (!c.eof() && c.peek() >= '0' && c.peek() <= '9') {
        value = value * 10 + (c.peek() - '0');
        if (value > 1000000000) throw ParseError(std::string(what) + " is too large", start);
        ++c.pos;
    }
    return value;
}

void check_dimensions(std::int64_t w, std::int64_t h, std::size_t offset) {
    if (w < 1 || h < 1 || w > kMaxSide || h > kMaxSide || w * h > kMaxPixels)
        throw ParseError("image dimensions out of supported range", offset);
}

}  // namespace

ImageBuffer read_pgm(const std::uint8_t* data, std::size_t size) {
    Cursor c{data, size};
    if (size < 2 || data[0] != 'P' || data[1] != '5')
        throw ParseError("not a binary PGM (P5) file", 0);
    c.pos = 2;
    const std::size_t dim_offset = c.pos;
    const std::int64_t width = read_pnm_int(c, "width");
    const std::int64_t height = read_pnm_int(c, "height");
    check_dimensions(width, height, dim_offset);
    const std::size_t maxval_offset = c.pos;
    const std::int64_t maxval = read_pnm_int(c, "maxval");
    if (maxval != 255 && maxval != 65535)
        throw ParseError("maxval must be 255 or 65535", maxval_offset);
    if (c.eof() || !is_pnm_space(c.peek()))
        throw ParseError("expected single whitespace before the raster", c.pos);
    ++c.pos;

    const int bytes_per = maxval == 255 ? 1 : 2;
    const std::size_t expected = static_cast<std::size_t>(width) * height * bytes_per;
    if (size - c.pos < expected) throw ParseError("raster data truncated", size);

    ImageBuffer image(static_cast<int>(width), static_cast<int>(height), maxval == 255 ? 8 : 16);
    const std::uint8_t* p = data + c.pos;
    for (std::size_t i = 0; i < static_cast<std::size_t>(width) * height; ++i) {
        if (bytes_per == 1) {
            image.samples[i] = p[i];
        } else {
            image.samples[i] = (static_cast<unsigned>(p[2 * i]) << 8) | p[2 * i + 1];
        }
    }
    return image;
}

std::vector<std::uint8_t> write_pgm(const ImageBuffer& image) {
    const int maxval = image.bit_depth == 8 ? 255 : 65535;
    std::string header = "P5\n" + std::to_string(image.width) + " " +
                         std::to_string(image.height) + "\n" + std::to_string(maxval) + "\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(out.size() + image.samples.size() * (image.bit_depth == 8 ? 1 : 2));
    for (double s : image.samples) {
        const double clamped = std::min(std::max(std::round(s), 0.0), static_cast<double>(maxval));
        const unsigned v = static_cast<unsigned>(clamped);
        if (image.bit_depth == 8) {
            out.push_back(static_cast<std::uint8_t>(v));
        } else {
            out.push_back(static_cast<std::uint8_t>(v >> 8));
            out.push_back(static_cast<std::uint8_t>(v & 0xFF));
        }
    }
    return out;
}

namespace {

struct FitsHeader {
    int bitpix = 0;
    std::int64_t naxis1 = 0;
    std::int64_t naxis2 = 0;
    double bzero = 0.0;
    double bscale = 1.0;
    std::size_t data_start = 0;
};

std::string card_keyword(const std::uint8_t* card) {
    std::string k(reinterpret_cast<const char*>(card), 8);
    while (!k.empty() && k.back() == ' ') k.pop_back();
    return k;
}

// Value field of a standard card: bytes 10..79 up to an optional '/' comment.
std::string card_value(const std::uint8_t* card) {
    std::string v(reinterpret_cast<const char*>(card) + 10, 70);
    const std::size_t slash = v.find('/');
    if (slash != std::string::npos) v.resize(slash);
    std::size_t b = v.find_first_not_of(' ');
    if (b == std::string::npos) return "";
    std::size_t e = v.find_last_not_of(' ');
    return v.substr(b, e - b + 1);
}

std::int64_t card_int(const std::uint8_t* card, std::size_t offset, const char* what) {
    const std::string v = card_value(card);
    if (v.empty()) throw ParseError(std::string(what) + " card has no value", offset);
    char* end = nullptr;
    const long long parsed = std::strtoll(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw ParseError(std::string(what) + " card value is not an integer", offset);
    return parsed;
}

double card_double(const std::uint8_t* card, std::size_t offset, const char* what) {
    const std::string v = card_value(card);
    if (v.empty()) throw ParseError(std::string(what) + " card has no value", offset);
    char* end = nullptr;
    const double parsed = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0' || !std::isfinite(parsed))
        throw ParseError(std::string(what) + " card value is not a number", offset);
    return parsed;
}

}  // namespace

ImageBuffer read_fits(const std::uint8_t* data, std::size_t size) {
    constexpr std::size_t kCard = 80;
    constexpr std::size_t kBlock = 2880;
    if (size < kCard || std::memcmp(data, "SIMPLE  ", 8) != 0)
        throw ParseError("not a FITS file (missing SIMPLE card)", 0);
    {
        const std::string v = card_value(data);
        if (v != "T") throw ParseError("SIMPLE must be T", 10);
    }

    FitsHeader hdr;
    bool saw_bitpix = false, saw_naxis = false, saw_n1 = false, saw_n2 = false, saw_end = false;
    std::int64_t naxis = 0;
    std::size_t pos = kCard;
    while (!saw_end) {
        if (pos + kCard > size) throw ParseError("header ended without an END card", size);
        const std::uint8_t* card = data + pos;
        const std::string key = card_keyword(card);
        if (key == "END") {
            saw_end = true;
        } else if (key == "BITPIX") {
            hdr.bitpix = static_cast<int>(card_int(card, pos, "BITPIX"));
            saw_bitpix = true;
        } else if (key == "NAXIS") {
            naxis = card_int(card, pos, "NAXIS");
            saw_naxis = true;
        } else if (key == "NAXIS1") {
            hdr.naxis1 = card_int(card, pos, "NAXIS1");
            saw_n1 = true;
        } else if (key == "NAXIS2") {
            hdr.naxis2 = card_int(card, pos, "NAXIS2");
            saw_n2 = true;
        } else if (key == "BZERO") {
            hdr.bzero = card_double(card, pos, "BZERO");
        } else if (key == "BSCALE") {
            hdr.bscale = card_double(card, pos, "BSCALE");
        }
        pos += kCard;
    }
    if (!saw_bitpix) throw ParseError("missing BITPIX card", pos);
    if (!saw_naxis || naxis != 2) throw ParseError("NAXIS must be 2", pos);
    if (!saw_n1 || !saw_n2) throw ParseError("missing NAXIS1/NAXIS2 card", pos);
    if (hdr.bitpix != 8 && hdr.bitpix != 16)
        throw ParseError("unsupported BITPIX (need 8 or 16)", pos);
    check_dimensions(hdr.naxis1, hdr.naxis2, pos);

    hdr.data_start = ((pos + kBlock - 1) / kBlock) * kBlock;
    const int bytes_per = hdr.bitpix / 8;
    const std::size_t count = static_cast<std::size_t>(hdr.naxis1) * hdr.naxis2;
    if (hdr.data_start > size || size - hdr.data_start < count * bytes_per)
        throw ParseError("FITS data unit truncated", size);

    const int depth = hdr.bitpix == 8 ? 8 : 16;
    ImageBuffer image(static_cast<int>(hdr.naxis1), static_cast<int>(hdr.naxis2), depth);
    const double lo = 0.0;
    const double hi = image.max_value();
    const std::uint8_t* p = data + hdr.data_start;
    for (std::size_t i = 0; i < count; ++i) {
        double raw;
        if (bytes_per == 1) {
            raw = p[i];
        } else {
            const std::uint16_t be = (static_cast<std::uint16_t>(p[2 * i]) << 8) | p[2 * i + 1];
            raw = static_cast<std::int16_t>(be);  // FITS 16-bit data is signed
        }
        const double value = hdr.bzero + hdr.bscale * raw;
        image.samples[i] = std::min(std::max(value, lo), hi);
    }
    return image;
}

ImageBuffer load_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open \"" + path + "\"", 0);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5')
        return read_pgm(bytes.data(), bytes.size());
    if (bytes.size() >= 6 && std::memcmp(bytes.data(), "SIMPLE", 6) == 0)
        return read_fits(bytes.data(), bytes.size());
    throw ParseError("unrecognized image format (need PGM P5 or FITS)", 0);
}

void save_pgm(const ImageBuffer& image, const std::string& path) {
    const auto bytes = write_pgm(image);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open \"" + path + "\" for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("short write to \"" + path + "\"");
}

ImageBuffer gen_edge(EdgeKind kind, int size) {
    if (size < 8) throw GeometryError("edge images need size >= 8");
    ImageBuffer image(size, size, 8);
    for (int j = 0; j < size; ++j) {
        const double y = (j + 0.5) / size;
        for (int i = 0; i < size; ++i) {
            const double t = (i + 0.5) / size;
            bool bright = false;
            switch (kind) {
                case EdgeKind::vertical: bright = t > 0.5; break;
                case EdgeKind::horizontal: bright = y > 0.5; break;
                case EdgeKind::skewed: bright = t > (y + 2.5) / 6.0; break;
            }
            image.at(i, j) = bright ? 255.0 : 0.0;
        }
    }
    return image;
}

EdgeKind parse_edge_kind(const std::string& name) {
    if (name == "vertical") return EdgeKind::vertical;
    if (name == "horizontal") return EdgeKind::horizontal;
    if (name == "skewed") return EdgeKind::skewed;
    throw Error("unknown synthetic kind \"" + name + "\" (vertical|horizontal|skewed)");
}

}  // namespace phsw
