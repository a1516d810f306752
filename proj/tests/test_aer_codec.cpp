#include "test_support.hpp"

#include <evjscc/aer_codec.hpp>
#include <evjscc/image_io.hpp>

#include <doctest.h>

#include <cmath>
#include <random>

using namespace evjscc;
using namespace evjscc::aer;

namespace {

using Bytes = std::vector<std::uint8_t>;

EventStream five_event_stream()
{
  FrameSequence seq{{Image(1, 1, 1, 0.1), Image(1, 1, 1, 0.1 * std::exp(0.25))}, {0.0, 1.0}};
  return simulate_events(seq, {0.05, 1e-3});
}

Errc decode_error(const Bytes& bytes)
{
  try
  {
    decode_stream(bytes);
  }
  catch (const CodecError& e)
  {
    return e.code();
  }
  FAIL("decode_stream accepted malformed input");
  return Errc::BadHeader;
}

void put_u64(Bytes& b, std::size_t at, std::uint64_t v)
{
  for (int i = 0; i < 8; ++i)
    b[at + static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v >> (8 * i));
}

} // namespace

TEST_CASE("empty stream encodes to a bare header")
{
  const Bytes out = encode_stream(EventStream(4, 4, 0.0, 1.0));
  const Bytes expected = {'E', 'V', 'T', '8', 1, 0, 4, 0, 4, 0, 0, 0,
                          0, 0, 0, 0, 0, 0, 0, 0,                 // t_start_us
                          0x40, 0x42, 0x0f, 0, 0, 0, 0, 0,        // t_end_us = 1e6
                          0, 0, 0, 0, 0, 0, 0, 0};                // count
  CHECK(out == expected);
  const EventStream back = decode_stream(out);
  CHECK(back.empty());
  CHECK(back.width() == 4);
  CHECK(back.t_end() == 1.0);
}

TEST_CASE("worked record matches hand-encoded bytes")
{
  const EventStream s(8, 8, 0.0, 1.0, {{3, 5, 100e-6, Polarity::Positive}});
  const Bytes out = encode_stream(s);
  REQUIRE(out.size() == kHeaderSize + kRecordSize);
  const Bytes record(out.begin() + kHeaderSize, out.end());
  CHECK(record == Bytes{0x64, 0x00, 0x00, 0x00, 0x03, 0x00, 0x05, 0x80});

  const EventStream neg(8, 8, 0.0, 1.0, {{3, 5, 100e-6, Polarity::Negative}});
  CHECK(encode_stream(neg)[kHeaderSize + 7] == 0x00);
}

TEST_CASE("offsets are relative to the header epoch and floor to microseconds")
{
  const EventStream s(2, 2, 5.0, 5.5, {{1, 1, 5.2500007, Polarity::Negative}});
  const Bytes out = encode_stream(s);
  const EventFileHeader h = decode_header(out);
  CHECK(h.t_start_us == 5'000'000);
  CHECK(h.t_end_us == 5'500'000);
  CHECK(out[kHeaderSize] == 0x90); // 250000 = 0x0003d090
  CHECK(out[kHeaderSize + 1] == 0xd0);
  CHECK(out[kHeaderSize + 2] == 0x03);
  CHECK(decode_stream(out).events()[0].t == 5.25);

  CHECK(to_microseconds(100e-6) == 100);
  CHECK(to_microseconds(0.9999999) == 999999);
  CHECK(to_microseconds(1.0) == 1'000'000);
}

TEST_CASE("golden file: five simulated events")
{
  const Bytes golden = read_bytes(EVJSCC_TEST_DATA_DIR "/five_events.evt8");
  const EventStream sim = five_event_stream();
  CHECK(encode_stream(sim) == golden);

  const EventStream back = decode_stream(golden);
  REQUIRE(back.size() == 5);
  for (std::size_t i = 0; i < 5; ++i)
  {
    CHECK(back.events()[i].x == sim.events()[i].x);
    CHECK(back.events()[i].y == sim.events()[i].y);
    CHECK(back.events()[i].p == sim.events()[i].p);
    CHECK(std::abs(back.events()[i].t - sim.events()[i].t) < 1e-6);
  }
}

TEST_CASE("payload size law")
{
  std::mt19937_64 rng(5);
  for (std::size_t n : {0u, 1u, 2u, 17u, 1000u})
  {
    const EventStream s = evjscc::testing::random_stream(rng, 50, 40, n, 0.0, 2.0);
    CHECK(encode_stream(s).size() == kHeaderSize + kRecordSize * n);
  }
}

TEST_CASE("round trip is exact on integer-microsecond streams")
{
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> count(0, 300);
  std::uniform_int_distribution<std::uint32_t> dim(1, 640);
  for (int trial = 0; trial < 200; ++trial)
  {
    const EventStream s = evjscc::testing::random_stream(rng, dim(rng), dim(rng), count(rng), 0.25,
                                                        3.75, true);
    const Bytes bytes = encode_stream(s);
    CHECK(decode_stream(bytes) == s);
    CHECK(encode_stream(decode_stream(bytes)) == bytes);
  }
}

TEST_CASE("geometry limits")
{
  CHECK_NOTHROW(encode_stream(EventStream(65535, 32768, 0.0, 1.0)));
  try
  {
    encode_stream(EventStream(65536, 4, 0.0, 1.0));
    FAIL("expected overflow");
  }
  catch (const CodecError& e)
  {
    CHECK(e.code() == Errc::GeometryOverflow);
  }
  CHECK_THROWS_AS(encode_stream(EventStream(4, 32769, 0.0, 1.0)), CodecError);
}

TEST_CASE("time span limit is 2^32 - 1 microseconds")
{
  CHECK_NOTHROW(encode_stream(EventStream(1, 1, 0.0, 4294.967295)));
  try
  {
    encode_stream(EventStream(1, 1, 0.0, 4294.967296));
    FAIL("expected overflow");
  }
  catch (const CodecError& e)
  {
    CHECK(e.code() == Errc::TimeSpanOverflow);
  }
}

TEST_CASE("decoder rejects malformed containers with typed errors")
{
  const Bytes good = encode_stream(five_event_stream());

  SUBCASE("bad magic")
  {
    Bytes b = good;
    b[0] = b[1] = b[2] = b[3] = 'X';
    CHECK(decode_error(b) == Errc::BadMagic);
  }
  SUBCASE("unsupported version")
  {
    Bytes b = good;
    b[4] = 2;
    CHECK(decode_error(b) == Errc::UnsupportedVersion);
  }
  SUBCASE("count larger than payload")
  {
    Bytes b = encode_stream(EventStream(8, 8, 0.0, 1.0, {{3, 5, 100e-6, Polarity::Positive}}));
    put_u64(b, 28, 2);
    CHECK(decode_error(b) == Errc::Truncated);
  }
  SUBCASE("trailing bytes")
  {
    Bytes b = good;
    b.push_back(0);
    CHECK(decode_error(b) == Errc::Truncated);
  }
  SUBCASE("short header")
  {
    CHECK(decode_error(Bytes(good.begin(), good.begin() + 20)) == Errc::Truncated);
  }
  SUBCASE("absurd count does not overflow the size check")
  {
    Bytes b = good;
    put_u64(b, 28, ~std::uint64_t{0} / 4);
    CHECK(decode_error(b) == Errc::Truncated);
  }
  SUBCASE("coordinate outside the declared geometry")
  {
    Bytes b = good;
    b[kHeaderSize + 4] = 1; // x = 1 on a 1x1 sensor
    CHECK(decode_error(b) == Errc::CoordinateOutOfRange);
  }
  SUBCASE("decreasing timestamps")
  {
    Bytes b = good;
    b[kHeaderSize + kRecordSize + 2] = 0; // second record drops to 400000 - 0x030000
    b[kHeaderSize + kRecordSize + 1] = 0;
    CHECK(decode_error(b) == Errc::DecreasingTimestamp);
  }
  SUBCASE("non-zero padding")
  {
    Bytes b = good;
    b[10] = 1;
    CHECK(decode_error(b) == Errc::BadHeader);
  }
  SUBCASE("record after t_end")
  {
    Bytes b = good;
    put_u64(b, 20, 900'000);
    CHECK(decode_error(b) == Errc::BadHeader);
  }
}

TEST_CASE("random corruption yields a typed error or a valid stream, never garbage")
{
  std::mt19937_64 rng(2024);
  const Bytes good = encode_stream(evjscc::testing::random_stream(rng, 16, 16, 40, 0.0, 1.0, true));
  std::uniform_int_distribution<std::size_t> pos(0, good.size() - 1);
  std::uniform_int_distribution<int> val(0, 255);
  for (int trial = 0; trial < 2000; ++trial)
  {
    Bytes b = good;
    if (trial % 2 == 0)
      b.resize(pos(rng));
    else
      b[pos(rng)] = static_cast<std::uint8_t>(val(rng));
    try
    {
      const EventStream s = decode_stream(b);
      CHECK(b.size() == kHeaderSize + kRecordSize * s.size());
    }
    catch (const CodecError&)
    {
    }
  }
}
