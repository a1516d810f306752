#include <evjscc/events.hpp>

#include <evjscc/error.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

namespace evjscc {

bool canonical_less(const Event& a, const Event& b)
{
  return std::tie(a.t, a.y, a.x, a.p) < std::tie(b.t, b.y, b.x, b.p);
}

EventStream::EventStream(std::uint32_t width, std::uint32_t height, double t_start, double t_end,
                         std::vector<Event> events)
  : width_(width), height_(height), t_start_(t_start), t_end_(t_end), events_(std::move(events))
{
  if (!std::isfinite(t_start) || !std::isfinite(t_end) || t_start < 0.0 || t_start > t_end)
    throw InvalidArgument("EventStream: invalid time span");

  double prev = t_start;
  for (const Event& e : events_)
  {
    if (e.x >= width_ || e.y >= height_)
      throw InvalidArgument("EventStream: event at (" + std::to_string(e.x) + ", " +
                            std::to_string(e.y) + ") outside " + std::to_string(width_) + "x" +
                            std::to_string(height_) + " sensor");
    if (e.p != Polarity::Positive && e.p != Polarity::Negative)
      throw InvalidArgument("EventStream: polarity must be +1 or -1");
    if (!(e.t >= prev))
      throw InvalidArgument("EventStream: timestamps must be non-decreasing");
    if (e.t > t_end_)
      throw InvalidArgument("EventStream: event after t_end");
    prev = e.t;
  }
}

EventStream EventStream::from_unsorted(std::uint32_t width, std::uint32_t height, double t_start,
                                       double t_end, std::vector<Event> events)
{
  std::sort(events.begin(), events.end(), canonical_less);
  return EventStream(width, height, t_start, t_end, std::move(events));
}

namespace {

void validate_frames(const FrameSequence& seq)
{
  if (seq.frames.size() < 2)
    throw InvalidArgument("simulate_events: need at least 2 frames, got " +
                          std::to_string(seq.frames.size()));
  if (seq.timestamps.size() != seq.frames.size())
    throw InvalidArgument("simulate_events: one timestamp per frame required");

  const Image& first = seq.frames.front();
  if (first.channels != 1)
    throw InvalidArgument("simulate_events: frames must be single-channel luminance");
  if (first.width == 0 || first.height == 0)
    throw InvalidArgument("simulate_events: empty frame");

  for (std::size_t k = 0; k < seq.frames.size(); ++k)
  {
    if (!seq.frames[k].same_shape(first))
      throw InvalidArgument("simulate_events: frame " + std::to_string(k) +
                            " shape differs from frame 0");
    if (!all_finite(seq.frames[k]))
      throw InvalidArgument("simulate_events: frame " + std::to_string(k) +
                            " has non-finite intensities");
    const double t = seq.timestamps[k];
    if (!std::isfinite(t) || t < 0.0 || (k > 0 && !(t > seq.timestamps[k - 1])))
      throw InvalidArgument("simulate_events: timestamps must be finite, >= 0, strictly increasing");
  }
}

} // namespace

EventStream simulate_events(const FrameSequence& seq, const SimulatorConfig& cfg)
{
  if (!(cfg.threshold > 0.0) || !std::isfinite(cfg.threshold))
    throw InvalidArgument("simulate_events: threshold must be positive");
  if (!(cfg.eps > 0.0 && cfg.eps < 1.0))
    throw InvalidArgument("simulate_events: eps must lie in (0, 1)");
  validate_frames(seq);

  const Image& first = seq.frames.front();
  const std::size_t n_frames = seq.frames.size();
  const double c = cfg.threshold;
  // Absorbs log/exp roundoff so a change of exactly n*c yields n events.
  const double tol = 1e-9 * c;

  std::vector<Event> events;
  std::vector<double> logs(n_frames);
  for (std::uint32_t y = 0; y < first.height; ++y)
  {
    for (std::uint32_t x = 0; x < first.width; ++x)
    {
      for (std::size_t k = 0; k < n_frames; ++k)
        logs[k] = std::log(std::max(seq.frames[k].at(y, x), cfg.eps));

      // Reference level is base + level * c; it moves to each crossed level.
      const double base = logs[0];
      long long level = 0;
      for (std::size_t k = 0; k + 1 < n_frames; ++k)
      {
        const double l0 = logs[k];
        const double l1 = logs[k + 1];
        if (l1 == l0)
          continue;
        const double t0 = seq.timestamps[k];
        const double dt = seq.timestamps[k + 1] - t0;
        const int dir = l1 > l0 ? 1 : -1;
        for (;;)
        {
          const double next = base + static_cast<double>(level + dir) * c;
          if (dir > 0 ? next > l1 + tol : next < l1 - tol)
            break;
          level += dir;
          const double frac = std::clamp((next - l0) / (l1 - l0), 0.0, 1.0);
          events.push_back(Event{x, y, t0 + frac * dt,
                                 dir > 0 ? Polarity::Positive : Polarity::Negative});
        }
      }
    }
  }

  return EventStream::from_unsorted(static_cast<std::uint32_t>(first.width),
                                    static_cast<std::uint32_t>(first.height),
                                    seq.timestamps.front(), seq.timestamps.back(),
                                    std::move(events));
}

int accumulate(const EventStream& stream, std::uint32_t x, std::uint32_t y, double t_a, double t_b)
{
  if (x >= stream.width() || y >= stream.height())
    throw InvalidArgument("accumulate: pixel outside sensor geometry");
  if (t_a == t_b)
    return 0;

  const double lo = std::min(t_a, t_b);
  const double hi = std::max(t_a, t_b);
  const auto evs = stream.events();
  auto it = std::partition_point(evs.begin(), evs.end(), [lo](const Event& e) { return e.t <= lo; });
  int sum = 0;
  for (; it != evs.end() && it->t <= hi; ++it)
    if (it->x == x && it->y == y)
      sum += sign(it->p);
  return t_a < t_b ? sum : -sum;
}

EventIndex::EventIndex(const EventStream& stream)
  : width_(stream.width()), height_(stream.height())
{
  const std::size_t n_pixels = std::size_t{width_} * height_;
  offsets_.assign(n_pixels + 1, 0);
  for (const Event& e : stream.events())
    ++offsets_[std::size_t{e.y} * width_ + e.x + 1];
  for (std::size_t p = 0; p < n_pixels; ++p)
    offsets_[p + 1] += offsets_[p];

  times_.resize(stream.size());
  prefix_.resize(stream.size());
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const Event& e : stream.events())
  {
    const std::size_t pixel = std::size_t{e.y} * width_ + e.x;
    const std::size_t slot = cursor[pixel]++;
    times_[slot] = e.t;
    prefix_[slot] = sign(e.p) + (slot > offsets_[pixel] ? prefix_[slot - 1] : 0);
  }
}

int EventIndex::prefix_through(std::size_t pixel, double t) const
{
  const auto begin = times_.begin() + static_cast<std::ptrdiff_t>(offsets_[pixel]);
  const auto end = times_.begin() + static_cast<std::ptrdiff_t>(offsets_[pixel + 1]);
  const auto it = std::upper_bound(begin, end, t);
  if (it == begin)
    return 0;
  return prefix_[static_cast<std::size_t>(it - times_.begin()) - 1];
}

int EventIndex::accumulate(std::uint32_t x, std::uint32_t y, double t_a, double t_b) const
{
  if (x >= width_ || y >= height_)
    throw InvalidArgument("accumulate: pixel outside sensor geometry");
  if (t_a == t_b)
    return 0;
  const std::size_t pixel = std::size_t{y} * width_ + x;
  const int sum = prefix_through(pixel, std::max(t_a, t_b)) - prefix_through(pixel, std::min(t_a, t_b));
  return t_a < t_b ? sum : -sum;
}

} // namespace evjscc
