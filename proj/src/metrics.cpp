#include <evjscc/metrics.hpp>

#include <evjscc/error.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

namespace evjscc {

namespace {

constexpr std::size_t kWindow = 11;
constexpr double kSigma = 1.5;

void check_pair(const Image& a, const Image& b, const char* who)
{
  if (!a.same_shape(b))
    throw InvalidArgument(std::string(who) + ": image shapes differ");
  if (a.size() == 0)
    throw InvalidArgument(std::string(who) + ": empty image");
}

std::array<double, kWindow> gaussian_taps()
{
  std::array<double, kWindow> g{};
  double sum = 0.0;
  for (std::size_t i = 0; i < kWindow; ++i)
  {
    const double d = static_cast<double>(i) - static_cast<double>(kWindow / 2);
    g[i] = std::exp(-d * d / (2.0 * kSigma * kSigma));
    sum += g[i];
  }
  for (double& v : g)
    v /= sum;
  return g;
}

// Separable "valid" Gaussian filter: output is (h - 10) x (w - 10).
std::vector<double> filter_valid(const std::vector<double>& src, std::size_t w, std::size_t h,
                                 const std::array<double, kWindow>& g)
{
  const std::size_t ow = w - kWindow + 1;
  const std::size_t oh = h - kWindow + 1;
  std::vector<double> rows(h * ow);
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < ow; ++x)
    {
      double acc = 0.0;
      for (std::size_t k = 0; k < kWindow; ++k)
        acc += g[k] * src[y * w + x + k];
      rows[y * ow + x] = acc;
    }
  std::vector<double> out(oh * ow);
  for (std::size_t y = 0; y < oh; ++y)
    for (std::size_t x = 0; x < ow; ++x)
    {
      double acc = 0.0;
      for (std::size_t k = 0; k < kWindow; ++k)
        acc += g[k] * rows[(y + k) * ow + x];
      out[y * ow + x] = acc;
    }
  return out;
}

} // namespace

double psnr(const Image& ref, const Image& test, double peak)
{
  check_pair(ref, test, "psnr");
  if (!(peak > 0.0))
    throw InvalidArgument("psnr: peak must be positive");
  double sse = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i)
  {
    const double d = ref.data[i] - test.data[i];
    sse += d * d;
  }
  if (sse == 0.0)
    return std::numeric_limits<double>::infinity();
  const double mse = sse / static_cast<double>(ref.size());
  return 10.0 * std::log10(peak * peak / mse);
}

double ssim(const Image& ref, const Image& test, double peak)
{
  check_pair(ref, test, "ssim");
  if (ref.width < kWindow || ref.height < kWindow)
    throw InvalidArgument("ssim: image smaller than the 11x11 window");

  const Image a = to_luma(ref);
  const Image b = to_luma(test);
  const std::size_t w = a.width;
  const std::size_t h = a.height;
  const std::size_t n = w * h;

  std::vector<double> aa(n), bb(n), ab(n);
  for (std::size_t i = 0; i < n; ++i)
  {
    aa[i] = a.data[i] * a.data[i];
    bb[i] = b.data[i] * b.data[i];
    ab[i] = a.data[i] * b.data[i];
  }

  const auto g = gaussian_taps();
  const auto mu_a = filter_valid(a.data, w, h, g);
  const auto mu_b = filter_valid(b.data, w, h, g);
  const auto e_aa = filter_valid(aa, w, h, g);
  const auto e_bb = filter_valid(bb, w, h, g);
  const auto e_ab = filter_valid(ab, w, h, g);

  const double c1 = (0.01 * peak) * (0.01 * peak);
  const double c2 = (0.03 * peak) * (0.03 * peak);
  double sum = 0.0;
  for (std::size_t i = 0; i < mu_a.size(); ++i)
  {
    const double ma = mu_a[i];
    const double mb = mu_b[i];
    const double var_a = e_aa[i] - ma * ma;
    const double var_b = e_bb[i] - mb * mb;
    const double cov = e_ab[i] - ma * mb;
    sum += ((2.0 * ma * mb + c1) * (2.0 * cov + c2)) /
           ((ma * ma + mb * mb + c1) * (var_a + var_b + c2));
  }
  return sum / static_cast<double>(mu_a.size());
}

MetricReport evaluate(const Image& ref, const Image& test, double peak)
{
  return MetricReport{psnr(ref, test, peak), ssim(ref, test, peak)};
}

std::string format_psnr(double psnr_db)
{
  if (std::isinf(psnr_db) && psnr_db > 0)
    return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", psnr_db);
  return buf;
}

} // namespace evjscc
