#include <evjscc/blur.hpp>

#include <evjscc/error.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace evjscc {

BlurryImage synthesize_blur(std::span<const Image> frames, std::span<const double> timestamps)
{
  if (frames.empty())
    throw InvalidArgument("synthesize_blur: empty frame sequence");
  if (timestamps.size() != frames.size())
    throw InvalidArgument("synthesize_blur: one timestamp per frame required");

  const Image& first = frames.front();
  Image sum(first.width, first.height, first.channels);
  for (std::size_t k = 0; k < frames.size(); ++k)
  {
    if (!frames[k].same_shape(first))
      throw InvalidArgument("synthesize_blur: frame " + std::to_string(k) +
                            " shape differs from frame 0");
    if (!all_finite(frames[k]))
      throw InvalidArgument("synthesize_blur: frame " + std::to_string(k) + " is not finite");
    for (std::size_t i = 0; i < sum.size(); ++i)
      sum.data[i] += frames[k].data[i];
  }
  const double n = static_cast<double>(frames.size());
  for (double& v : sum.data)
    v /= n;

  const auto [lo, hi] = std::minmax_element(timestamps.begin(), timestamps.end());
  if (!std::isfinite(*lo) || !std::isfinite(*hi))
    throw InvalidArgument("synthesize_blur: non-finite timestamp");
  return BlurryImage{std::move(sum), Exposure{0.5 * (*lo + *hi), *hi - *lo}};
}

} // namespace evjscc
