#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "phsw/image.hpp"

namespace phsw {

// Binary PGM (P5), maxval 255 or 65535; 16-bit samples are big-endian.
// Parse failures throw ParseError carrying the byte offset of the defect.
ImageBuffer read_pgm(const std::uint8_t* data, std::size_t size);
std::vector<std::uint8_t> write_pgm(const ImageBuffer& image);

// Minimal FITS subset: SIMPLE=T, BITPIX in {8, 16}, NAXIS=2, 2880-byte
// blocks, big-endian data, BZERO/BSCALE honored (the signed-16-bit +
// BZERO=32768 convention maps onto unsigned samples). Values are clamped
// into [0, 2^bit_depth - 1] after scaling.
ImageBuffer read_fits(const std::uint8_t* data, std::size_t size);

// Dispatch on magic bytes ("P5" / "SIMPLE"), then parse.
ImageBuffer load_image(const std::string& path);
void save_pgm(const ImageBuffer& image, const std::string& path);

enum class EdgeKind { vertical, horizontal, skewed };

// Sharp test edges sampled at pixel centers (t, y) = ((i+0.5)/size,
// (j+0.5)/size), values in {0, 255}:
//   vertical:    255 iff t > 1/2
//   horizontal:  transpose of vertical (255 iff y > 1/2)
//   skewed:      255 iff t > (y + 2.5) / 6
ImageBuffer gen_edge(EdgeKind kind, int size);

EdgeKind parse_edge_kind(const std::string& name);  // throws Error on unknown names

}  // namespace phsw
