#pragma once

#include <evjscc/image.hpp>

#include <span>

namespace evjscc {

/// Exposure window [mid - duration/2, mid + duration/2].
struct Exposure
{
  double mid = 0.0;
  double duration = 0.0;

  double begin() const { return mid - 0.5 * duration; }
  double end() const { return mid + 0.5 * duration; }
};

struct BlurryImage
{
  Image pixels;
  Exposure exposure;
};

/// Uniform temporal average of the frames, per pixel and channel. The exposure
/// spans the first to last timestamp. Frame order does not matter.
BlurryImage synthesize_blur(std::span<const Image> frames, std::span<const double> timestamps);

} // namespace evjscc
