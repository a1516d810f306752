#include <evjscc/image.hpp>

#include <evjscc/error.hpp>

#include <algorithm>
#include <cmath>

namespace evjscc {

Image to_luma(const Image& img)
{
  if (img.channels == 1)
    return img;
  if (img.channels != 3)
    throw InvalidArgument("to_luma: expected 1 or 3 channels, got " + std::to_string(img.channels));

  Image out(img.width, img.height, 1);
  for (std::size_t i = 0; i < img.pixel_count(); ++i)
  {
    const double* px = &img.data[i * 3];
    out.data[i] = kLumaR * px[0] + kLumaG * px[1] + kLumaB * px[2];
  }
  return out;
}

void clamp_inplace(Image& img, double lo, double hi)
{
  for (double& v : img.data)
    v = std::clamp(v, lo, hi);
}

bool all_finite(const Image& img)
{
  return std::all_of(img.data.begin(), img.data.end(), [](double v) { return std::isfinite(v); });
}

} // namespace evjscc
