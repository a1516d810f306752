#pragma once

#include <evjscc/blur.hpp>
#include <evjscc/events.hpp>
#include <evjscc/image.hpp>

#include <span>
#include <vector>

namespace evjscc {

struct DeblurConfig
{
  double threshold = 0.05; ///< contrast threshold c
  int samples = 64;        ///< M, uniform samples of the exposure
  bool clamp_output = true;
};

/// A latent sharp image together with the instant it depicts.
struct SharpImage
{
  Image pixels;
  double time = 0.0;
};

/// Midpoints of M equal sub-intervals of the exposure,
/// t_m = mid + (2m + 1 - M) * T / (2M). These coincide bit-for-bit with the odd
/// boundaries of a K = M voxelization of the same window.
std::vector<double> sample_times(const Exposure& exposure, int samples);

/// Signed event integrals from `origin` to each sample time, stored as
/// times.size() x height x width.
struct EventIntegrals
{
  std::size_t width = 0;
  std::size_t height = 0;
  double origin = 0.0;
  std::vector<double> times;
  std::vector<double> counts;

  double at(std::size_t m, std::size_t y, std::size_t x) const
  {
    return counts[(m * height + y) * width + x];
  }
};

EventIntegrals integrate_events(const EventIndex& index, double origin,
                                std::span<const double> times);

/// D(x, y) = mean_m exp(c * integral(origin -> t_m)); strictly positive.
Image exposure_divisor(const EventIntegrals& integrals, double threshold);

/// Latent image at the exposure midpoint, I(t_f) = B / D. The same divisor is
/// applied to every colour channel of the blur.
SharpImage latent_at_midpoint(const BlurryImage& blur, const EventStream& events,
                              const DeblurConfig& cfg);

/// Same, from integrals that were computed (or received) elsewhere. The
/// integrals must be anchored at the exposure midpoint.
SharpImage latent_at_midpoint(const BlurryImage& blur, const EventIntegrals& integrals,
                              const DeblurConfig& cfg);

/// I(t) = I(t_f) * exp(c * integral(t_f -> t)).
Image latent_at_time(const SharpImage& sharp, const EventStream& events, double t,
                     const DeblurConfig& cfg);
Image latent_at_time(const SharpImage& sharp, const EventIndex& index, double t,
                     const DeblurConfig& cfg);

/// Mean squared difference between the blur and the average of the clamped
/// latent frames at the M sample times.
double reblur_residual(const BlurryImage& blur, const EventStream& events, double threshold,
                       int samples);

/// Grid candidate with the smallest reblur residual; ties go to the smaller c.
double estimate_threshold(const BlurryImage& blur, const EventStream& events,
                          std::span<const double> grid, int samples);

} // namespace evjscc
