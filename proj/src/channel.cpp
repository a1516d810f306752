#include <evjscc/channel.hpp>

#include <evjscc/error.hpp>

#include <cmath>
#include <numeric>
#include <string>

namespace evjscc {

double noise_variance(double snr_db)
{
  return std::pow(10.0, -snr_db / 10.0);
}

double mean_power(std::span<const Symbol> z)
{
  if (z.empty())
    return 0.0;
  double sum = 0.0;
  for (const Symbol& s : z)
    sum += std::norm(s);
  return sum / static_cast<double>(z.size());
}

SymbolVector power_normalize(std::span<const Symbol> z)
{
  if (z.empty())
    throw InvalidArgument("power_normalize: empty symbol vector");
  double energy = 0.0;
  for (const Symbol& s : z)
  {
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
      throw InvalidArgument("power_normalize: non-finite symbol");
    energy += std::norm(s);
  }
  if (energy == 0.0)
    throw InvalidArgument("power_normalize: all-zero vector has no defined scaling");

  const double scale = std::sqrt(static_cast<double>(z.size()) / energy);
  SymbolVector out(z.begin(), z.end());
  for (Symbol& s : out)
    s *= scale;
  return out;
}

double GaussianSource::uniform_pm1()
{
  const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53; // [0, 1)
  return 2.0 * u - 1.0;
}

double GaussianSource::next()
{
  if (spare_)
  {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  double u, v, s;
  do
  {
    u = uniform_pm1();
    v = uniform_pm1();
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  return u * f;
}

SymbolVector awgn(std::span<const Symbol> z, const ChannelConfig& cfg)
{
  for (const Symbol& s : z)
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
      throw InvalidArgument("awgn: non-finite input symbol");
  if (!cfg.snr_db)
    return SymbolVector(z.begin(), z.end());

  if (!std::isfinite(*cfg.snr_db))
    throw InvalidArgument("awgn: SNR must be finite");
  const double power = mean_power(z);
  if (z.empty() || std::abs(power - 1.0) > 0.01)
    throw InvalidArgument("awgn: input violates the unit average power constraint (mean power " +
                          std::to_string(power) + ")");

  const double sd = std::sqrt(noise_variance(*cfg.snr_db) / 2.0);
  GaussianSource noise(cfg.seed);
  SymbolVector out(z.begin(), z.end());
  for (Symbol& s : out)
  {
    const double re = noise.next();
    const double im = noise.next();
    s += Symbol(sd * re, sd * im);
  }
  return out;
}

Rational cbr(const TransmissionBudget& budget)
{
  if (budget.n0 == 0 || budget.total() == 0)
    throw InvalidArgument("cbr: budget needs n0 > 0 and at least one symbol");
  const std::uint64_t g = std::gcd(budget.total(), budget.n0);
  return Rational{budget.total() / g, budget.n0 / g};
}

std::pair<SymbolVector, SymbolVector> split_and_merge(std::span<const Symbol> received,
                                                      const TransmissionBudget& b)
{
  if (received.size() != b.total())
    throw InvalidArgument("split_and_merge: got " + std::to_string(received.size()) +
                          " symbols, budget expects " + std::to_string(b.total()));
  const auto s0 = received.subspan(0, b.k0);
  const auto s1 = received.subspan(b.k0, b.k1);
  const auto y = received.subspan(b.k0 + b.k1, b.k2);

  SymbolVector z0(s0.begin(), s0.end());
  z0.insert(z0.end(), y.begin(), y.end());
  SymbolVector z1(s1.begin(), s1.end());
  z1.insert(z1.end(), y.begin(), y.end());
  return {std::move(z0), std::move(z1)};
}

SymbolVector pack_reals(std::span<const double> reals)
{
  SymbolVector out((reals.size() + 1) / 2);
  for (std::size_t i = 0; i < out.size(); ++i)
  {
    const double im = 2 * i + 1 < reals.size() ? reals[2 * i + 1] : 0.0;
    out[i] = Symbol(reals[2 * i], im);
  }
  return out;
}

std::vector<double> unpack_reals(std::span<const Symbol> symbols, std::size_t count)
{
  if (count > 2 * symbols.size())
    throw InvalidArgument("unpack_reals: not enough symbols");
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = i % 2 == 0 ? symbols[i / 2].real() : symbols[i / 2].imag();
  return out;
}

} // namespace evjscc
