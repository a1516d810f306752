#include <evjscc/edi.hpp>

#include <evjscc/error.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace evjscc {

namespace {

void check_threshold(double c)
{
  if (!(c > 0.0) || !std::isfinite(c))
    throw InvalidArgument("contrast threshold must be positive, got " + std::to_string(c));
}

void check_config(const DeblurConfig& cfg)
{
  check_threshold(cfg.threshold);
  if (cfg.samples < 2)
    throw InvalidArgument("deblur: need at least 2 exposure samples");
}

void check_geometry(const Image& img, std::size_t width, std::size_t height)
{
  if (img.width != width || img.height != height)
    throw InvalidArgument("deblur: image is " + std::to_string(img.width) + "x" +
                          std::to_string(img.height) + " but events are " +
                          std::to_string(width) + "x" + std::to_string(height));
}

void check_coverage(const EventStream& events, const Exposure& exposure)
{
  if (!(exposure.duration > 0.0))
    throw InvalidArgument("deblur: exposure duration must be positive");
  const double tol = 1e-9 * std::max(1.0, exposure.duration);
  if (events.t_start() > exposure.begin() + tol || events.t_end() < exposure.end() - tol)
    throw InvalidArgument("deblur: event stream does not cover the exposure window");
}

SharpImage divide_by(const BlurryImage& blur, const Image& divisor, bool clamp)
{
  SharpImage out{blur.pixels, blur.exposure.mid};
  const std::size_t ch = out.pixels.channels;
  for (std::size_t i = 0; i < divisor.size(); ++i)
    for (std::size_t c = 0; c < ch; ++c)
      out.pixels.data[i * ch + c] /= divisor.data[i];
  if (clamp)
    clamp_inplace(out.pixels);
  return out;
}

} // namespace

std::vector<double> sample_times(const Exposure& exposure, int samples)
{
  if (samples < 1)
    throw InvalidArgument("sample_times: need at least one sample");
  std::vector<double> times(static_cast<std::size_t>(samples));
  const double step = exposure.duration / (2.0 * samples);
  for (int m = 0; m < samples; ++m)
    times[static_cast<std::size_t>(m)] = exposure.mid + (2 * m + 1 - samples) * step;
  return times;
}

EventIntegrals integrate_events(const EventIndex& index, double origin,
                                std::span<const double> times)
{
  EventIntegrals out;
  out.width = index.width();
  out.height = index.height();
  out.origin = origin;
  out.times.assign(times.begin(), times.end());
  out.counts.resize(times.size() * out.width * out.height);
  for (std::size_t m = 0; m < times.size(); ++m)
    for (std::uint32_t y = 0; y < out.height; ++y)
      for (std::uint32_t x = 0; x < out.width; ++x)
        out.counts[(m * out.height + y) * out.width + x] = index.accumulate(x, y, origin, times[m]);
  return out;
}

Image exposure_divisor(const EventIntegrals& integrals, double threshold)
{
  check_threshold(threshold);
  if (integrals.times.empty())
    throw InvalidArgument("exposure_divisor: no sample times");
  const std::size_t n_pixels = integrals.width * integrals.height;
  const std::size_t n_samples = integrals.times.size();

  Image d(integrals.width, integrals.height, 1);
  for (std::size_t m = 0; m < n_samples; ++m)
  {
    const double* row = &integrals.counts[m * n_pixels];
    for (std::size_t i = 0; i < n_pixels; ++i)
      d.data[i] += std::exp(threshold * row[i]);
  }
  for (double& v : d.data)
    v /= static_cast<double>(n_samples);
  return d;
}

SharpImage latent_at_midpoint(const BlurryImage& blur, const EventIntegrals& integrals,
                              const DeblurConfig& cfg)
{
  check_config(cfg);
  check_geometry(blur.pixels, integrals.width, integrals.height);
  if (integrals.origin != blur.exposure.mid)
    throw InvalidArgument("deblur: integrals must start at the exposure midpoint");
  return divide_by(blur, exposure_divisor(integrals, cfg.threshold), cfg.clamp_output);
}

SharpImage latent_at_midpoint(const BlurryImage& blur, const EventStream& events,
                              const DeblurConfig& cfg)
{
  check_config(cfg);
  check_geometry(blur.pixels, events.width(), events.height());
  check_coverage(events, blur.exposure);

  const EventIndex index(events);
  const auto times = sample_times(blur.exposure, cfg.samples);
  return latent_at_midpoint(blur, integrate_events(index, blur.exposure.mid, times), cfg);
}

Image latent_at_time(const SharpImage& sharp, const EventIndex& index, double t,
                     const DeblurConfig& cfg)
{
  check_threshold(cfg.threshold);
  check_geometry(sharp.pixels, index.width(), index.height());

  Image out = sharp.pixels;
  const std::size_t ch = out.channels;
  for (std::uint32_t y = 0; y < index.height(); ++y)
  {
    for (std::uint32_t x = 0; x < index.width(); ++x)
    {
      const int n = index.accumulate(x, y, sharp.time, t);
      if (n == 0)
        continue;
      const double gain = std::exp(cfg.threshold * n);
      for (std::size_t c = 0; c < ch; ++c)
        out.at(y, x, c) *= gain;
    }
  }
  if (cfg.clamp_output)
    clamp_inplace(out);
  return out;
}

Image latent_at_time(const SharpImage& sharp, const EventStream& events, double t,
                     const DeblurConfig& cfg)
{
  if (!(t >= events.t_start() && t <= events.t_end()))
    throw InvalidArgument("latent_at_time: t outside the event stream span");
  return latent_at_time(sharp, EventIndex(events), t, cfg);
}

namespace {

// Reblur residual from precomputed integrals so a grid search touches the
// events only once.
double residual_from_integrals(const BlurryImage& blur, const EventIntegrals& integrals, double c)
{
  DeblurConfig cfg;
  cfg.threshold = c;
  cfg.samples = static_cast<int>(integrals.times.size());
  const SharpImage mid = latent_at_midpoint(blur, integrals, cfg);

  const std::size_t ch = blur.pixels.channels;
  const std::size_t n_pixels = integrals.width * integrals.height;
  Image reblur(blur.pixels.width, blur.pixels.height, ch);
  for (std::size_t m = 0; m < integrals.times.size(); ++m)
  {
    const double* counts = &integrals.counts[m * n_pixels];
    for (std::size_t i = 0; i < n_pixels; ++i)
    {
      const double gain = std::exp(c * counts[i]);
      for (std::size_t k = 0; k < ch; ++k)
        reblur.data[i * ch + k] += std::clamp(mid.pixels.data[i * ch + k] * gain, 0.0, 1.0);
    }
  }

  const double inv_m = 1.0 / static_cast<double>(integrals.times.size());
  double sse = 0.0;
  for (std::size_t i = 0; i < reblur.size(); ++i)
  {
    const double d = reblur.data[i] * inv_m - blur.pixels.data[i];
    sse += d * d;
  }
  return sse / static_cast<double>(reblur.size());
}

EventIntegrals exposure_integrals(const BlurryImage& blur, const EventStream& events, int samples)
{
  if (samples < 2)
    throw InvalidArgument("deblur: need at least 2 exposure samples");
  check_geometry(blur.pixels, events.width(), events.height());
  check_coverage(events, blur.exposure);
  const EventIndex index(events);
  return integrate_events(index, blur.exposure.mid, sample_times(blur.exposure, samples));
}

} // namespace

double reblur_residual(const BlurryImage& blur, const EventStream& events, double threshold,
                       int samples)
{
  check_threshold(threshold);
  return residual_from_integrals(blur, exposure_integrals(blur, events, samples), threshold);
}

double estimate_threshold(const BlurryImage& blur, const EventStream& events,
                          std::span<const double> grid, int samples)
{
  if (grid.empty())
    throw InvalidArgument("estimate_threshold: empty candidate grid");
  for (double c : grid)
    check_threshold(c);

  // Residuals below this are roundoff of the exact reblur identity.
  constexpr double kTie = 1e-15;

  const EventIntegrals integrals = exposure_integrals(blur, events, samples);
  double best_c = 0.0;
  double best_r = 0.0;
  bool first = true;
  for (double c : grid)
  {
    const double r = residual_from_integrals(blur, integrals, c);
    if (first || r < best_r - kTie || (r <= best_r + kTie && c < best_c))
    {
      best_c = c;
      best_r = r;
      first = false;
    }
  }
  return best_c;
}

} // namespace evjscc
