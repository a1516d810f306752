#pragma once

#include <evjscc/blur.hpp>
#include <evjscc/events.hpp>

#include <cstddef>
#include <vector>

namespace evjscc {

/// 2K x H x W signed event integrals from the exposure midpoint to the interval
/// boundaries b_j = mid + (j - K) * T / (2K), j = 0..2K. The identically zero
/// j = K boundary is omitted, so channel order is j = 0..K-1, K+1..2K.
struct EventTensor
{
  int half_intervals = 0; ///< K
  std::size_t width = 0;
  std::size_t height = 0;
  Exposure exposure;
  std::vector<float> data;

  std::size_t channels() const { return 2 * static_cast<std::size_t>(half_intervals); }

  float at(std::size_t channel, std::size_t y, std::size_t x) const
  {
    return data[(channel * height + y) * width + x];
  }

  /// Boundary index j held by a channel.
  int boundary_of(std::size_t channel) const
  {
    const int c = static_cast<int>(channel);
    return c < half_intervals ? c : c + 1;
  }

  /// Boundary time b_j.
  double boundary_time(int j) const;
};

EventTensor voxelize(const EventStream& events, const Exposure& exposure, int half_intervals);

} // namespace evjscc
