#pragma once

#include <cstddef>
#include <vector>

namespace evjscc {

/// Planar-free, row-major image with interleaved channels. Values are linear
/// intensities, nominally in [0, 1].
struct Image
{
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t channels = 1;
  std::vector<double> data;

  Image() = default;
  Image(std::size_t w, std::size_t h, std::size_t c = 1, double fill = 0.0)
    : width(w), height(h), channels(c), data(w * h * c, fill)
  {}

  std::size_t pixel_count() const { return width * height; }
  std::size_t size() const { return data.size(); }

  double& at(std::size_t y, std::size_t x, std::size_t c = 0)
  {
    return data[(y * width + x) * channels + c];
  }
  double at(std::size_t y, std::size_t x, std::size_t c = 0) const
  {
    return data[(y * width + x) * channels + c];
  }

  bool same_shape(const Image& other) const
  {
    return width == other.width && height == other.height && channels == other.channels;
  }

  bool operator==(const Image&) const = default;
};

/// Rec. 709 luma weights used wherever a colour image must be reduced to one channel.
inline constexpr double kLumaR = 0.2126;
inline constexpr double kLumaG = 0.7152;
inline constexpr double kLumaB = 0.0722;

/// Single-channel luminance. One-channel input is returned unchanged; three-
/// channel input is weighted with the Rec. 709 coefficients.
Image to_luma(const Image& img);

/// Clamps every sample into [lo, hi].
void clamp_inplace(Image& img, double lo = 0.0, double hi = 1.0);

bool all_finite(const Image& img);

} // namespace evjscc
