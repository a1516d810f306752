#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace evjscc {

using Symbol = std::complex<double>;
using SymbolVector = std::vector<Symbol>;

/// Symbol counts of the image-specific, event-specific and shared streams and
/// the source image dimension n0 = H * W * channels.
struct TransmissionBudget
{
  std::uint64_t k0 = 0;
  std::uint64_t k1 = 0;
  std::uint64_t k2 = 0;
  std::uint64_t n0 = 0;

  std::uint64_t total() const { return k0 + k1 + k2; }
};

struct Rational
{
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Rational&) const = default;
};

struct ChannelConfig
{
  std::optional<double> snr_db; ///< empty means the noiseless channel
  std::uint64_t seed = 0;

  static ChannelConfig noiseless() { return {}; }
  static ChannelConfig awgn(double snr_db, std::uint64_t seed) { return {snr_db, seed}; }
};

/// Per-symbol noise variance for unit signal power, sigma^2 = 10^(-snr/10).
double noise_variance(double snr_db);

double mean_power(std::span<const Symbol> z);

/// Scales z to unit average power. Throws on an empty or all-zero vector.
SymbolVector power_normalize(std::span<const Symbol> z);

/// Standard normal deviates from a 64-bit Mersenne Twister via the Marsaglia
/// polar method. Both are fully specified, so a seed reproduces the same
/// sequence on every conforming platform (std::normal_distribution does not).
class GaussianSource
{
public:
  explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

  double next();

private:
  double uniform_pm1(); // (-1, 1) with 53-bit resolution

  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

/// z + n with n circularly-symmetric complex Gaussian of per-symbol variance
/// sigma^2 (each quadrature sigma^2 / 2). Requires unit mean power (within 1%)
/// unless noiseless; the noiseless channel returns z unchanged.
SymbolVector awgn(std::span<const Symbol> z, const ChannelConfig& cfg);

/// Channel bandwidth ratio (k0 + k1 + k2) / n0 in lowest terms.
Rational cbr(const TransmissionBudget& budget);

/// Splits a received [s0, s1, y] into [s0, y] and [s1, y].
std::pair<SymbolVector, SymbolVector> split_and_merge(std::span<const Symbol> received,
                                                      const TransmissionBudget& budget);

/// Packs reals pairwise into complex symbols, zero-padding an odd tail.
SymbolVector pack_reals(std::span<const double> reals);
/// Inverse of pack_reals; `count` trims the padding.
std::vector<double> unpack_reals(std::span<const Symbol> symbols, std::size_t count);

} // namespace evjscc
