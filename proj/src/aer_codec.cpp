#include <evjscc/aer_codec.hpp>

#include <cmath>
#include <cstring>
#include <limits>
#include <string>

namespace evjscc::aer {

namespace {

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value)
{
  for (std::size_t i = 0; i < sizeof(T); ++i)
    out.push_back(static_cast<std::uint8_t>(static_cast<std::uint64_t>(value) >> (8 * i)));
}

template <typename T>
T get_le(std::span<const std::uint8_t> in, std::size_t offset)
{
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i)
    v |= static_cast<std::uint64_t>(in[offset + i]) << (8 * i);
  return static_cast<T>(v);
}

constexpr std::uint16_t kPolarityBit = 0x8000;
constexpr std::uint16_t kRowMask = 0x7fff;

} // namespace

const char* to_string(Errc code)
{
  switch (code)
  {
  case Errc::GeometryOverflow: return "geometry overflow";
  case Errc::TimeSpanOverflow: return "time span overflow";
  case Errc::BadMagic: return "bad magic";
  case Errc::UnsupportedVersion: return "unsupported version";
  case Errc::Truncated: return "truncated payload";
  case Errc::BadHeader: return "bad header";
  case Errc::CoordinateOutOfRange: return "coordinate out of range";
  case Errc::DecreasingTimestamp: return "decreasing timestamp";
  }
  return "unknown";
}

CodecError::CodecError(Errc code, const std::string& detail)
  : Error(std::string("EVT8: ") + to_string(code) + (detail.empty() ? "" : ": " + detail)),
    code_(code)
{}

std::uint64_t to_microseconds(double seconds)
{
  return static_cast<std::uint64_t>(std::floor(seconds * 1e6 + 1e-6));
}

double from_microseconds(std::uint64_t us)
{
  return static_cast<double>(us) / 1e6;
}

std::vector<std::uint8_t> encode_stream(const EventStream& stream)
{
  if (stream.width() > std::numeric_limits<std::uint16_t>::max() ||
      stream.height() > std::size_t{kRowMask} + 1)
    throw CodecError(Errc::GeometryOverflow, std::to_string(stream.width()) + "x" +
                                                 std::to_string(stream.height()));

  const std::uint64_t t_start_us = to_microseconds(stream.t_start());
  const std::uint64_t t_end_us = to_microseconds(stream.t_end());
  if (t_end_us - t_start_us > std::numeric_limits<std::uint32_t>::max())
    throw CodecError(Errc::TimeSpanOverflow, std::to_string(t_end_us - t_start_us) + " us");

  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + kRecordSize * stream.size());
  out.insert(out.end(), kMagic.begin(), kMagic.end());
  put_le<std::uint16_t>(out, kVersion);
  put_le<std::uint16_t>(out, static_cast<std::uint16_t>(stream.width()));
  put_le<std::uint16_t>(out, static_cast<std::uint16_t>(stream.height()));
  put_le<std::uint16_t>(out, 0);
  put_le<std::uint64_t>(out, t_start_us);
  put_le<std::uint64_t>(out, t_end_us);
  put_le<std::uint64_t>(out, stream.size());

  for (const Event& e : stream.events())
  {
    // An event in [t_start, t_end] always floors into [t_start_us, t_end_us].
    const std::uint64_t off = to_microseconds(e.t) - t_start_us;
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(off));
    put_le<std::uint16_t>(out, static_cast<std::uint16_t>(e.x));
    const auto packed = static_cast<std::uint16_t>(
        (e.y & kRowMask) | (e.p == Polarity::Positive ? kPolarityBit : 0));
    put_le<std::uint16_t>(out, packed);
  }
  return out;
}

EventFileHeader decode_header(std::span<const std::uint8_t> bytes)
{
  if (bytes.size() < kHeaderSize)
    throw CodecError(Errc::Truncated, "header needs 36 bytes, got " + std::to_string(bytes.size()));
  if (std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0)
    throw CodecError(Errc::BadMagic, {});

  EventFileHeader h;
  h.version = get_le<std::uint16_t>(bytes, 4);
  if (h.version != kVersion)
    throw CodecError(Errc::UnsupportedVersion, "version " + std::to_string(h.version));
  h.width = get_le<std::uint16_t>(bytes, 6);
  h.height = get_le<std::uint16_t>(bytes, 8);
  if (get_le<std::uint16_t>(bytes, 10) != 0)
    throw CodecError(Errc::BadHeader, "non-zero padding");
  h.t_start_us = get_le<std::uint64_t>(bytes, 12);
  h.t_end_us = get_le<std::uint64_t>(bytes, 20);
  h.count = get_le<std::uint64_t>(bytes, 28);
  if (h.t_start_us > h.t_end_us)
    throw CodecError(Errc::BadHeader, "t_start after t_end");
  if (h.height > std::size_t{kRowMask} + 1)
    throw CodecError(Errc::BadHeader, "height exceeds 15-bit row field");
  return h;
}

EventStream decode_stream(std::span<const std::uint8_t> bytes)
{
  const EventFileHeader h = decode_header(bytes);
  const std::size_t payload = bytes.size() - kHeaderSize;
  if (h.count > payload / kRecordSize || payload != h.count * kRecordSize)
    throw CodecError(Errc::Truncated, "header declares " + std::to_string(h.count) +
                                          " records, payload holds " + std::to_string(payload) +
                                          " bytes");

  std::vector<Event> events;
  events.reserve(h.count);
  std::uint64_t prev_us = h.t_start_us;
  for (std::size_t i = 0; i < h.count; ++i)
  {
    const std::size_t at = kHeaderSize + i * kRecordSize;
    const std::uint64_t t_us = h.t_start_us + get_le<std::uint32_t>(bytes, at);
    const auto x = get_le<std::uint16_t>(bytes, at + 4);
    const auto packed = get_le<std::uint16_t>(bytes, at + 6);
    const std::uint16_t y = packed & kRowMask;

    if (x >= h.width || y >= h.height)
      throw CodecError(Errc::CoordinateOutOfRange,
                       "record " + std::to_string(i) + " at (" + std::to_string(x) + ", " +
                           std::to_string(y) + ")");
    if (t_us < prev_us)
      throw CodecError(Errc::DecreasingTimestamp, "record " + std::to_string(i));
    if (t_us > h.t_end_us)
      throw CodecError(Errc::BadHeader, "record " + std::to_string(i) + " after t_end");
    prev_us = t_us;

    events.push_back(Event{x, y, from_microseconds(t_us),
                           (packed & kPolarityBit) ? Polarity::Positive : Polarity::Negative});
  }

  return EventStream(h.width, h.height, from_microseconds(h.t_start_us),
                     from_microseconds(h.t_end_us), std::move(events));
}

} // namespace evjscc::aer
