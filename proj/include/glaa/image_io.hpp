#pragma once

#include <string>

#include "glaa/field.hpp"

namespace glaa {

/// Read an 8-bit grayscale image. Binary PGM (P5) is the canonical format;
/// PNG is accepted on input (gray, palette and RGB are collapsed to gray).
/// Dispatches on the file's magic bytes.
ImageGrid read_image(const std::string& path);

/// Write binary 8-bit PGM; values are rounded and clamped to [0,255].
void write_pgm(const std::string& path, const ImageGrid& img);

/// Mask as PGM with 0/255 levels.
void write_pgm(const std::string& path, const BinaryMask& mask);

/// Read a mask image: pixels > 127 are foreground.
BinaryMask read_mask(const std::string& path);

}  // namespace glaa
