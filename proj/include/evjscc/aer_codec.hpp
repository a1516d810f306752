#pragma once

#include <evjscc/error.hpp>
#include <evjscc/events.hpp>

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace evjscc::aer {

// EVT8 container: a 36-byte little-endian header followed by one 8-byte
// record per event.
//
//   header: magic "EVT8" | version u16 | width u16 | height u16 | pad u16 (0)
//           | t_start_us u64 | t_end_us u64 | count u64
//   record: t_off_us u32 | x u16 | packed u16 (bit 15 = polarity, bits 0..14 = y)

inline constexpr std::array<char, 4> kMagic = {'E', 'V', 'T', '8'};
inline constexpr std::uint16_t kVersion = 1;
inline constexpr std::size_t kHeaderSize = 36;
inline constexpr std::size_t kRecordSize = 8;

struct EventFileHeader
{
  std::uint16_t version = kVersion;
  std::uint16_t width = 0;
  std::uint16_t height = 0;
  std::uint64_t t_start_us = 0;
  std::uint64_t t_end_us = 0;
  std::uint64_t count = 0;
};

enum class Errc
{
  GeometryOverflow,
  TimeSpanOverflow,
  BadMagic,
  UnsupportedVersion,
  Truncated,
  BadHeader,
  CoordinateOutOfRange,
  DecreasingTimestamp,
};

const char* to_string(Errc code);

class CodecError : public Error
{
public:
  CodecError(Errc code, const std::string& detail);
  Errc code() const { return code_; }

private:
  Errc code_;
};

/// Seconds to whole microseconds, rounding down. Values within 1e-6 us of the
/// next integer are treated as that integer so k / 1e6 maps back to k.
std::uint64_t to_microseconds(double seconds);
double from_microseconds(std::uint64_t us);

std::vector<std::uint8_t> encode_stream(const EventStream& stream);
EventStream decode_stream(std::span<const std::uint8_t> bytes);

/// Parses and validates only the header (magic, version, padding, time span).
EventFileHeader decode_header(std::span<const std::uint8_t> bytes);

} // namespace evjscc::aer
