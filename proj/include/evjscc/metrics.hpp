#pragma once

#include <evjscc/image.hpp>

#include <string>

namespace evjscc {

struct MetricReport
{
  double psnr_db = 0.0; ///< +infinity for identical images
  double ssim = 0.0;
};

/// 10 log10(peak^2 / MSE) over all samples; +infinity when MSE is zero.
double psnr(const Image& ref, const Image& test, double peak = 1.0);

/// Mean SSIM over every full 11x11 Gaussian (sigma 1.5) window, with
/// C1 = (0.01 peak)^2 and C2 = (0.03 peak)^2. Colour images are compared on
/// Rec. 709 luma.
double ssim(const Image& ref, const Image& test, double peak = 1.0);

MetricReport evaluate(const Image& ref, const Image& test, double peak = 1.0);

/// "inf" for the identical-image marker, fixed six decimals otherwise.
std::string format_psnr(double psnr_db);

} // namespace evjscc
