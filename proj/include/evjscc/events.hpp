#pragma once

#include <evjscc/image.hpp>

#include <cstdint>
#include <span>
#include <vector>

namespace evjscc {

enum class Polarity : std::int8_t
{
  Negative = -1,
  Positive = +1,
};

constexpr int sign(Polarity p) { return static_cast<int>(p); }

/// One brightness-change spike at pixel (x, y), time t in seconds.
struct Event
{
  std::uint32_t x = 0;
  std::uint32_t y = 0;
  double t = 0.0;
  Polarity p = Polarity::Positive;

  bool operator==(const Event&) const = default;
};

/// Canonical stream order: time, then row, column and polarity.
bool canonical_less(const Event& a, const Event& b);

/// Time-ordered events from a width x height sensor observed over [t_start, t_end].
///
/// Construction validates the invariants (non-decreasing time, coordinates in
/// range, every timestamp inside the span) and throws InvalidArgument otherwise,
/// so a live EventStream is always well formed.
class EventStream
{
public:
  EventStream() = default;
  EventStream(std::uint32_t width, std::uint32_t height, double t_start, double t_end,
              std::vector<Event> events = {});

  /// Sorts into canonical order before validating.
  static EventStream from_unsorted(std::uint32_t width, std::uint32_t height, double t_start,
                                   double t_end, std::vector<Event> events);

  std::uint32_t width() const { return width_; }
  std::uint32_t height() const { return height_; }
  double t_start() const { return t_start_; }
  double t_end() const { return t_end_; }
  std::span<const Event> events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }

  bool operator==(const EventStream&) const = default;

private:
  std::uint32_t width_ = 0;
  std::uint32_t height_ = 0;
  double t_start_ = 0.0;
  double t_end_ = 0.0;
  std::vector<Event> events_;
};

/// Timestamped single-channel frames, the input of the event simulator.
struct FrameSequence
{
  std::vector<Image> frames;
  std::vector<double> timestamps;
};

struct SimulatorConfig
{
  double threshold = 0.05; ///< contrast threshold c in log-intensity units
  double eps = 1e-3;       ///< intensity floor applied before the logarithm
};

/// Ideal event camera: per pixel, log(max(I, eps)) is linearly interpolated
/// between frames and one event is emitted each time the signal moves a full
/// threshold away from the level of the last event (initially the first frame).
/// Event times are the interpolated crossing instants.
EventStream simulate_events(const FrameSequence& frames, const SimulatorConfig& cfg);

/// Signed event count at (x, y) over (t_a, t_b]; negated when t_a > t_b.
/// Linear in the number of events inside the interval.
int accumulate(const EventStream& stream, std::uint32_t x, std::uint32_t y, double t_a,
               double t_b);

/// Per-pixel prefix sums for O(log n) interval accumulation. Same closed-right,
/// orientation-aware semantics as accumulate().
class EventIndex
{
public:
  explicit EventIndex(const EventStream& stream);

  int accumulate(std::uint32_t x, std::uint32_t y, double t_a, double t_b) const;

  std::uint32_t width() const { return width_; }
  std::uint32_t height() const { return height_; }

private:
  int prefix_through(std::size_t pixel, double t) const;

  std::uint32_t width_;
  std::uint32_t height_;
  std::vector<std::size_t> offsets_; // pixel -> [offsets_[p], offsets_[p + 1])
  std::vector<double> times_;
  std::vector<int> prefix_;          // polarity sum through each entry
};

} // namespace evjscc
