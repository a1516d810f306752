#include <evjscc/channel.hpp>
#include <evjscc/error.hpp>

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace evjscc;

namespace {

SymbolVector random_symbols(std::size_t n, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  SymbolVector z(n);
  for (Symbol& s : z)
    s = {u(rng), u(rng)};
  return z;
}

} // namespace

TEST_CASE("power normalisation")
{
  const SymbolVector twos(17, Symbol(2.0, 0.0));
  for (const Symbol& s : power_normalize(twos))
    CHECK(s == Symbol(1.0, 0.0));

  const SymbolVector z = random_symbols(1000, 1);
  const SymbolVector n = power_normalize(z);
  CHECK(mean_power(n) == doctest::Approx(1.0).epsilon(1e-12));

  const SymbolVector again = power_normalize(n);
  for (std::size_t i = 0; i < n.size(); ++i)
    CHECK(std::abs(again[i] - n[i]) < 1e-12);

  SymbolVector scaled = z;
  for (Symbol& s : scaled)
    s *= 7.5;
  const SymbolVector ns = power_normalize(scaled);
  for (std::size_t i = 0; i < n.size(); ++i)
    CHECK(std::abs(ns[i] - n[i]) < 1e-12);

  CHECK_THROWS_AS(power_normalize(SymbolVector{}), InvalidArgument);
  CHECK_THROWS_AS(power_normalize(SymbolVector(4)), InvalidArgument);
}

TEST_CASE("noise variance follows the unit-power SNR convention")
{
  CHECK(noise_variance(0.0) == 1.0);
  CHECK(noise_variance(10.0) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(noise_variance(-3.0) == doctest::Approx(std::pow(10.0, 0.3)));
}

TEST_CASE("gaussian source matches the reference deviates")
{
  GaussianSource g(42);
  const double expected[] = {1.2938204232729367, 0.7049882664208599, 0.3979773961837887,
                             -0.5740948067202614, 1.118555052457478, -1.9066853448304657};
  for (double e : expected)
    CHECK(g.next() == doctest::Approx(e).epsilon(1e-15));
}

TEST_CASE("noiseless channel is the identity")
{
  const SymbolVector z = random_symbols(100, 2);
  CHECK(awgn(z, ChannelConfig::noiseless()) == z);
}

TEST_CASE("awgn is deterministic per seed")
{
  const SymbolVector z = power_normalize(random_symbols(256, 3));
  const auto a = awgn(z, ChannelConfig::awgn(5.0, 11));
  CHECK(a == awgn(z, ChannelConfig::awgn(5.0, 11)));
  CHECK(a != awgn(z, ChannelConfig::awgn(5.0, 12)));
}

TEST_CASE("awgn noise statistics")
{
  const std::size_t n = 1'000'000;
  const SymbolVector z(n, Symbol(1.0, 0.0));
  for (double snr : {0.0, 10.0, 18.0})
  {
    const SymbolVector r = awgn(z, ChannelConfig::awgn(snr, 77));
    double p = 0.0, pr = 0.0, pi = 0.0, mr = 0.0, mi = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
      const Symbol d = r[i] - z[i];
      p += std::norm(d);
      pr += d.real() * d.real();
      pi += d.imag() * d.imag();
      mr += d.real();
      mi += d.imag();
    }
    const double var = noise_variance(snr);
    const double dn = static_cast<double>(n);
    CHECK(p / dn == doctest::Approx(var).epsilon(0.01));
    CHECK(pr / dn == doctest::Approx(var / 2).epsilon(0.02));
    CHECK(pi / dn == doctest::Approx(var / 2).epsilon(0.02));
    const double se = std::sqrt(var / 2 / dn);
    CHECK(std::abs(mr / dn) < 3 * se);
    CHECK(std::abs(mi / dn) < 3 * se);
  }
}

TEST_CASE("awgn validation")
{
  const SymbolVector weak(10, Symbol(0.5, 0.0));
  CHECK_THROWS_AS(awgn(weak, ChannelConfig::awgn(10.0, 1)), InvalidArgument);
  const SymbolVector unit(10, Symbol(1.0, 0.0));
  CHECK_THROWS_AS(awgn(unit, ChannelConfig::awgn(std::numeric_limits<double>::infinity(), 1)),
                  InvalidArgument);
  SymbolVector bad = unit;
  bad[3] = {std::nan(""), 0.0};
  CHECK_THROWS_AS(awgn(bad, ChannelConfig::noiseless()), InvalidArgument);
}

TEST_CASE("channel bandwidth ratio is exact")
{
  CHECK(cbr({65536, 0, 0, 196608}) == Rational{1, 3});
  CHECK(cbr({16384, 8192, 8192, 196608}) == Rational{1, 6});
  CHECK(cbr({5, 5, 5, 5}) == Rational{3, 1});
  CHECK(cbr({16384, 8192, 8192, 196608}).value() == 1.0 / 6.0);
  CHECK_THROWS_AS(cbr({1, 1, 1, 0}), InvalidArgument);
  CHECK_THROWS_AS(cbr({0, 0, 0, 10}), InvalidArgument);
}

TEST_CASE("split and merge")
{
  const Symbol a{1, 0}, b{2, 0}, c{3, 0}, d{4, 0};
  const SymbolVector z = {a, b, c, d};
  const auto [z0, z1] = split_and_merge(z, {2, 1, 1, 16});
  CHECK(z0 == SymbolVector{a, b, d});
  CHECK(z1 == SymbolVector{c, d});

  const auto [d0, d1] = split_and_merge(z, {1, 3, 0, 16});
  CHECK(d0 == SymbolVector{a});
  CHECK(d1 == SymbolVector{b, c, d});

  CHECK_THROWS_AS(split_and_merge(z, {2, 2, 1, 16}), InvalidArgument);
}

TEST_CASE("real packing round trip")
{
  const std::vector<double> reals = {0.5, -1.0, 2.0, 3.25, 7.0};
  const SymbolVector z = pack_reals(reals);
  REQUIRE(z.size() == 3);
  CHECK(z[0] == Symbol(0.5, -1.0));
  CHECK(z[2] == Symbol(7.0, 0.0));
  CHECK(unpack_reals(z, reals.size()) == reals);
  CHECK_THROWS_AS(unpack_reals(z, 7), InvalidArgument);
}
