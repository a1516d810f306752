#pragma once

#include <evjscc/image.hpp>

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace evjscc {

/// Reads an 8- or 16-bit grayscale or RGB PNG. Samples are linearised by a plain
/// division by 255 or 65535; no gamma curve is applied. Alpha is dropped and
/// palette images are expanded to RGB.
Image read_png(const std::filesystem::path& path);

/// Writes a grayscale (1 channel) or RGB (3 channel) PNG at 8 or 16 bits per
/// sample. Values are clamped to [0, 1] and rounded to the nearest code.
void write_png(const std::filesystem::path& path, const Image& img, int bit_depth = 16);

/// Rounds every sample to the nearest representable code of the given bit
/// depth, so write_png followed by read_png returns the same values.
Image quantize(const Image& img, int bit_depth);

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);
void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

} // namespace evjscc
