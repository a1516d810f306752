#include <evjscc/event_tensor.hpp>

#include <evjscc/error.hpp>

#include <algorithm>
#include <string>

namespace evjscc {

double EventTensor::boundary_time(int j) const
{
  return exposure.mid + (j - half_intervals) * (exposure.duration / (2.0 * half_intervals));
}

EventTensor voxelize(const EventStream& events, const Exposure& exposure, int half_intervals)
{
  if (half_intervals < 1)
    throw InvalidArgument("voxelize: K must be >= 1, got " + std::to_string(half_intervals));
  if (!(exposure.duration > 0.0))
    throw InvalidArgument("voxelize: exposure duration must be positive");
  const double tol = 1e-9 * std::max(1.0, exposure.duration);
  if (exposure.begin() < events.t_start() - tol || exposure.end() > events.t_end() + tol)
    throw InvalidArgument("voxelize: exposure window outside the event stream span");

  EventTensor out;
  out.half_intervals = half_intervals;
  out.width = events.width();
  out.height = events.height();
  out.exposure = exposure;
  out.data.assign(out.channels() * out.width * out.height, 0.0f);

  const int k = half_intervals;
  std::vector<double> bounds(static_cast<std::size_t>(2 * k + 1));
  for (int j = 0; j <= 2 * k; ++j)
    bounds[static_cast<std::size_t>(j)] = out.boundary_time(j);
  const double mid = exposure.mid;
  const std::size_t plane = out.width * out.height;

  // Forward channels (j > K) sum events in (mid, b_j]; backward channels
  // (j < K) hold minus the sum over (b_j, mid].
  for (const Event& e : events.events())
  {
    const std::size_t px = std::size_t{e.y} * out.width + e.x;
    const auto p = static_cast<float>(sign(e.p));
    if (e.t > mid)
    {
      for (int j = k + 1; j <= 2 * k; ++j)
        if (e.t <= bounds[static_cast<std::size_t>(j)])
          out.data[static_cast<std::size_t>(j - 1) * plane + px] += p;
    }
    else
    {
      for (int j = 0; j < k; ++j)
        if (e.t > bounds[static_cast<std::size_t>(j)])
          out.data[static_cast<std::size_t>(j) * plane + px] -= p;
    }
  }
  return out;
}

} // namespace evjscc
