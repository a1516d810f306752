// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include "test_support.hpp"

#include <evjscc/aer_codec.hpp>
#include <evjscc/blur.hpp>
#include <evjscc/channel.hpp>
#include <evjscc/edi.hpp>
#include <evjscc/event_tensor.hpp>
#include <evjscc/events.hpp>
#include <evjscc/image_io.hpp>
#include <evjscc/metrics.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

using namespace evjscc;
namespace t = evjscc::testing;

namespace {

struct Outcome
{
  bool ok = true;
  std::ostringstream detail;

  void expect(bool cond, const std::string& what)
  {
    if (!cond && ok)
      detail << "first failure: " << what << "; ";
    ok = ok && cond;
  }
};

struct Criterion
{
  const char* name;
  double budget_s;
  std::function<void(Outcome&)> body;
};

// Two-frame sequence where each of `pixels` pixels rises by (per_pixel + 0.5) c
// in log intensity, so the simulator emits exactly per_pixel events at each.
EventStream exact_count_stream(std::size_t pixels, std::size_t per_pixel, double c)
{
  const double lo = 0.2;
  const double hi = lo * std::exp((static_cast<double>(per_pixel) + 0.5) * c);
  FrameSequence seq{{Image(pixels, 1, 1, lo), Image(pixels, 1, 1, hi)}, {0.0, 1.0}};
  return simulate_events(seq, {c, 1e-3});
}

void aer_size_law(Outcome& o)
{
  struct Case
  {
    std::size_t pixels, per_pixel;
  };
  for (const Case cs : {Case{1, 0}, Case{1, 1}, Case{1000, 1}, Case{1000, 1000}})
  {
    const EventStream s = exact_count_stream(cs.pixels, cs.per_pixel, 0.001);
    const std::size_t n = cs.pixels * cs.per_pixel;
    o.expect(s.size() == n, "simulated count " + std::to_string(s.size()) + " != " + std::to_string(n));
    const auto bytes = aer::encode_stream(s);
    o.expect(bytes.size() == 36 + 8 * n, "size for N=" + std::to_string(n));
    o.detail << "N=" << n << ":" << bytes.size() << "B ";
  }
}

void codec_round_trip(Outcome& o)
{
  const EventStream worked(8, 8, 0.0, 1.0, {{3, 5, 100e-6, Polarity::Positive}});
  const auto b = aer::encode_stream(worked);
  const std::vector<std::uint8_t> golden = {0x64, 0x00, 0x00, 0x00, 0x03, 0x00, 0x05, 0x80};
  o.expect(std::vector<std::uint8_t>(b.begin() + aer::kHeaderSize, b.end()) == golden,
           "worked record bytes");

  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<std::uint32_t> w(1, 1280), h(1, 720);
  std::uniform_int_distribution<std::size_t> n(0, 2000);
  std::size_t total = 0;
  for (int i = 0; i < 1000; ++i)
  {
    const EventStream s = t::random_stream(rng, w(rng), h(rng), n(rng), 0.0, 5.0, true);
    total += s.size();
    const auto bytes = aer::encode_stream(s);
    o.expect(aer::decode_stream(bytes) == s, "stream " + std::to_string(i) + " not identical");
    o.expect(aer::encode_stream(aer::decode_stream(bytes)) == bytes, "re-encode differs");
  }
  o.detail << "1000 streams, " << total << " events, golden record ok";
}

void simulator_bound(Outcome& o)
{
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> frames(2, 12);
  std::uniform_real_distribution<double> cs(0.02, 0.5);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial)
  {
    const FrameSequence seq = t::random_sequence(rng, 8, 8, static_cast<std::size_t>(frames(rng)));
    const double c = cs(rng);
    const EventStream s = simulate_events(seq, {c, 1e-3});
    const EventIndex index(s);
    for (std::size_t k = 1; k < seq.frames.size(); ++k)
      for (std::uint32_t y = 0; y < 8; ++y)
        for (std::uint32_t x = 0; x < 8; ++x)
        {
          const double dlog = std::log(std::max(seq.frames[k].at(y, x), 1e-3)) -
                              std::log(std::max(seq.frames[0].at(y, x), 1e-3));
          const double r = std::abs(dlog - c * index.accumulate(x, y, seq.timestamps[0], seq.timestamps[k]));
          worst = std::max(worst, r / c);
          o.expect(r < c, "residual " + std::to_string(r) + " >= c");
        }
  }
  o.detail << "worst residual " << worst << " c";
}

void reblur_identity(Outcome& o)
{
  std::mt19937_64 rng(5150);
  std::uniform_int_distribution<int> frames(2, 10), samples(2, 128), side(1, 16);
  std::uniform_real_distribution<double> cs(0.02, 0.4);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial)
  {
    const std::size_t w = static_cast<std::size_t>(side(rng)), h = static_cast<std::size_t>(side(rng));
    const FrameSequence seq = t::random_sequence(rng, w, h, static_cast<std::size_t>(frames(rng)));
    const BlurryImage blur = synthesize_blur(seq.frames, seq.timestamps);
    DeblurConfig cfg;
    cfg.threshold = cs(rng);
    cfg.samples = samples(rng);
    cfg.clamp_output = false;
    const EventStream events = simulate_events(seq, {cfg.threshold, 1e-3});
    const SharpImage sharp = latent_at_midpoint(blur, events, cfg);

    Image mean(w, h, 1);
    const EventIndex index(events);
    for (double tm : sample_times(blur.exposure, cfg.samples))
    {
      const Image lt = latent_at_time(sharp, index, tm, cfg);
      for (std::size_t i = 0; i < mean.size(); ++i)
        mean.data[i] += lt.data[i] / cfg.samples;
    }
    for (std::size_t i = 0; i < mean.size(); ++i)
      worst = std::max(worst, std::abs(mean.data[i] - blur.pixels.data[i]));
  }
  o.expect(worst < 1e-6, "max deviation " + std::to_string(worst));
  o.detail << "max |reblur - blur| = " << worst;
}

void deblur_gain(Outcome& o)
{
  const LoadedFrames frames = t::moving_edge(64, 64, 33);
  const BlurryImage blur = synthesize_blur(frames.frames, frames.timestamps);
  const EventStream events = simulate_events(luminance_sequence(frames), {0.05, 1e-3});
  const Image& truth = frames.frames[middle_index(frames.frames.size())];
  DeblurConfig cfg;
  cfg.threshold = 0.05;
  cfg.samples = 64;
  const SharpImage sharp = latent_at_midpoint(blur, events, cfg);
  const double before = psnr(truth, blur.pixels);
  const double after = psnr(truth, sharp.pixels);
  const double gain = after - before;
  // Brute-force oracle: 18.626541 dB -> 46.988439 dB.
  o.expect(gain > 6.0, "gain below 6 dB");
  o.expect(std::abs(gain - 28.361897) < 1e-4, "gain differs from the oracle's 28.361897 dB");
  char buf[128];
  std::snprintf(buf, sizeof buf, "blur %.6f dB, restored %.6f dB, gain %.6f dB", before, after, gain);
  o.detail << buf;
}

void voxel_oracle(Outcome& o)
{
  const EventStream single(4, 4, 0.0, 1.0, {{1, 2, 0.9, Polarity::Positive}});
  const EventTensor st = voxelize(single, {0.5, 1.0}, 3);
  const float expected[6] = {0, 0, 0, 0, 0, 1};
  for (std::size_t ch = 0; ch < 6; ++ch)
    o.expect(st.at(ch, 2, 1) == expected[ch], "single-event channel " + std::to_string(ch));

  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::size_t> n(0, 3000);
  std::uniform_int_distribution<std::uint32_t> side(1, 24);
  constexpr int k = 3;
  for (int trial = 0; trial < 100; ++trial)
  {
    const std::uint32_t w = side(rng), h = side(rng);
    const EventStream s = t::random_stream(rng, w, h, n(rng), 0.0, 2.0);
    const Exposure ex{1.0, 1.5};
    const EventTensor tensor = voxelize(s, ex, k);
    o.expect(tensor.channels() == 6, "channel count");

    // Per-interval histograms over (b_i, b_{i+1}], then cumulative sums out
    // from the midpoint.
    const double step = ex.duration / (2 * k);
    const double lo = ex.mid - ex.duration / 2;
    std::vector<int> bins(2 * k * w * h, 0);
    for (const Event& e : s.events())
    {
      if (e.t <= lo || e.t > lo + ex.duration)
        continue;
      int i = 0;
      while (i < 2 * k - 1 && e.t > lo + (i + 1) * step)
        ++i;
      bins[(static_cast<std::size_t>(i) * h + e.y) * w + e.x] += sign(e.p);
    }
    for (std::uint32_t y = 0; y < h; ++y)
      for (std::uint32_t x = 0; x < w; ++x)
      {
        auto bin = [&](int i) { return bins[(static_cast<std::size_t>(i) * h + y) * w + x]; };
        for (int j = 0; j <= 2 * k; ++j)
        {
          if (j == k)
            continue;
          int v = 0;
          for (int i = std::min(j, k); i < std::max(j, k); ++i)
            v += bin(i);
          if (j < k)
            v = -v;
          const std::size_t ch = static_cast<std::size_t>(j < k ? j : j - 1);
          o.expect(tensor.at(ch, y, x) == static_cast<float>(v), "tensor mismatch");
        }
      }
  }
  o.detail << "100 streams, 6 channels, single event (0,0,0,0,0,+1)";
}

void channel_stats(Outcome& o)
{
  const std::size_t n = 1'000'000;
  const SymbolVector z(n, Symbol(1.0, 0.0));
  for (double snr : {0.0, 10.0, 18.0})
  {
    const SymbolVector r = awgn(z, ChannelConfig::awgn(snr, 1234));
    double p = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      p += std::norm(r[i] - z[i]);
    p /= static_cast<double>(n);
    const double target = std::pow(10.0, -snr / 10.0);
    const double rel = std::abs(p - target) / target;
    o.expect(rel < 0.01, "noise power off at " + std::to_string(snr) + " dB");
    o.detail << snr << "dB: " << rel * 100 << "% ";
  }
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  SymbolVector rnd(1000);
  for (Symbol& s : rnd)
    s = {g(rng), g(rng)};
  o.expect(awgn(rnd, ChannelConfig::noiseless()) == rnd, "noiseless channel altered symbols");
  o.detail << "noiseless identity ok";
}

void cbr_points(Outcome& o)
{
  const Rational third = cbr({65536, 0, 0, 196608});
  const Rational sixth = cbr({16384, 8192, 8192, 196608});
  o.expect(third == Rational{1, 3}, "1/3");
  o.expect(sixth == Rational{1, 6}, "1/6");
  o.detail << "65536/196608 = " << third.num << "/" << third.den << ", 32768/196608 = " << sixth.num
           << "/" << sixth.den;
}

void metric_oracles(Outcome& o)
{
  const Image zeros(16, 16, 1, 0.0), ones(16, 16, 1, 1.0), half(16, 16, 1, 0.5);
  o.expect(std::abs(psnr(zeros, ones) - 0.0) < 1e-9, "0 dB case");
  o.expect(std::abs(psnr(zeros, half) - 6.020599913279624) < 1e-9, "6.0206 dB case");
  o.expect(std::isinf(psnr(half, half)) && psnr(half, half) > 0, "identical images not +inf");

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> side(11, 48);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial)
  {
    Image a(side(rng), side(rng));
    Image b = a;
    const double noise = u(rng);
    for (std::size_t i = 0; i < a.size(); ++i)
    {
      a.data[i] = u(rng);
      b.data[i] = std::clamp(a.data[i] + noise * (u(rng) - 0.5), 0.0, 1.0);
    }
    worst = std::max(worst, std::abs(ssim(a, b) - t::brute_ssim(a, b)));
    o.expect(ssim(a, a) == 1.0, "ssim(a, a) != 1");
  }
  o.expect(worst < 1e-6, "ssim deviates from the windowed oracle");
  o.detail << "psnr cases exact, max |ssim - oracle| = " << worst;
}

} // namespace

int main()
{
  const Criterion criteria[] = {
      {"aer_size_law", 1.0, aer_size_law},
      {"codec_round_trip", 5.0, codec_round_trip},
      {"simulator_quantization_bound", 10.0, simulator_bound},
      {"edi_reblur_identity", 30.0, reblur_identity},
      {"edi_deblurring_gain", 60.0, deblur_gain},
      {"voxelization_oracle", 10.0, voxel_oracle},
      {"channel_statistics", 10.0, channel_stats},
      {"cbr_operating_points", 1.0, cbr_points},
      {"metric_oracles", 10.0, metric_oracles},
  };

  int failures = 0;
  for (const Criterion& c : criteria)
  {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try
    {
      c.body(o);
    }
    catch (const std::exception& e)
    {
      o.ok = false;
      o.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_s)
    {
      o.ok = false;
      o.detail << " over time budget";
    }
    failures += o.ok ? 0 : 1;
    std::printf("%s %-30s %7.3f s (limit %4.0f s)  %s\n", o.ok ? "PASS" : "FAIL", c.name, secs,
                c.budget_s, o.detail.str().c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures,
              std::size(criteria));
  return failures == 0 ? 0 : 1;
}
