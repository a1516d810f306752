// evjscc: event simulation, EVT8/ETNS conversion, AWGN transmission, analytic
// event-based deblurring and image quality evaluation from the command line.

#include <evjscc/aer_codec.hpp>
#include <evjscc/blur.hpp>
#include <evjscc/channel.hpp>
#include <evjscc/edi.hpp>
#include <evjscc/event_tensor.hpp>
#include <evjscc/image_io.hpp>
#include <evjscc/metrics.hpp>
#include <evjscc/pipeline.hpp>
#include <evjscc/tensor_io.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace evjscc;

namespace {

struct Options
{
  std::string input;
  std::string second;
  std::string out;
  double threshold = 0.05;
  double eps = 1e-3;
  int K = 3;
  int samples = 64;
  double snr_db = 10.0;
  bool noiseless = false;
  std::uint64_t seed = 0;
  std::optional<double> fps;
  int bit_depth = 16;
  double t_mid = 0.0;
  double exposure = 0.0;
  std::vector<double> threshold_grid;
  bool kv = false;
  double peak = 1.0;
  std::uint64_t k0 = 0, k1 = 0, k2 = 0, n0 = 0;
};

ChannelConfig channel_config(const Options& o)
{
  if (o.noiseless)
    return ChannelConfig::noiseless();
  return ChannelConfig::awgn(o.snr_db, o.seed);
}

Exposure exposure_for(const EventStream& events, const Options& o)
{
  if (o.exposure > 0.0)
    return Exposure{o.t_mid, o.exposure};
  return Exposure{0.5 * (events.t_start() + events.t_end()), events.t_end() - events.t_start()};
}

void add_exposure_flags(CLI::App* cmd, Options& o)
{
  cmd->add_option("--t-mid", o.t_mid, "Exposure midpoint in seconds (default: event span centre)");
  cmd->add_option("--exposure", o.exposure, "Exposure duration in seconds (default: event span)");
}

void add_channel_flags(CLI::App* cmd, Options& o)
{
  auto* snr = cmd->add_option("--snr-db", o.snr_db, "Channel SNR in dB");
  auto* quiet = cmd->add_flag("--noiseless", o.noiseless, "Bypass the noise (identity channel)");
  snr->excludes(quiet);
  cmd->add_option("--seed", o.seed, "Noise generator seed");
}

int cmd_simulate(const Options& o)
{
  const LoadedFrames frames = load_frames(o.input, o.fps);
  const EventStream events = simulate_events(luminance_sequence(frames), {o.threshold, o.eps});
  write_bytes(o.out, aer::encode_stream(events));
  std::cout << "events=" << events.size() << '\n';
  return 0;
}

int cmd_blur(const Options& o)
{
  const LoadedFrames frames = load_frames(o.input, o.fps);
  const BlurryImage blur = synthesize_blur(frames.frames, frames.timestamps);
  write_png(o.out, blur.pixels, o.bit_depth);
  std::cout << "t_mid=" << blur.exposure.mid << "\nexposure=" << blur.exposure.duration << '\n';
  return 0;
}

int cmd_voxelize(const Options& o)
{
  const EventStream events = aer::decode_stream(read_bytes(o.input));
  const EventTensor tensor = voxelize(events, exposure_for(events, o), o.K);
  write_bytes(o.out, etns::encode(etns::from_event_tensor(tensor)));
  std::cout << "channels=" << tensor.channels() << '\n';
  return 0;
}

int cmd_channel(const Options& o)
{
  const etns::TensorFile in = etns::decode(read_bytes(o.input));
  SymbolVector z;
  if (in.dtype == etns::DType::Complex64)
    z = etns::to_symbols(in);
  else
    z = pack_reals(std::vector<double>(in.values.begin(), in.values.end()));

  const SymbolVector rx = awgn(power_normalize(z), channel_config(o));
  write_bytes(o.out, etns::encode(etns::from_symbols(rx)));
  std::cout << "symbols=" << rx.size() << '\n';
  if (o.n0 > 0)
  {
    const Rational r = cbr(TransmissionBudget{o.k0, o.k1, o.k2, o.n0});
    std::cout << "cbr=" << r.num << '/' << r.den << '\n';
  }
  return 0;
}

int cmd_deblur(const Options& o)
{
  const EventStream events = aer::decode_stream(read_bytes(o.second));
  BlurryImage blur{read_png(o.input), exposure_for(events, o)};

  DeblurConfig cfg;
  cfg.threshold = o.threshold;
  cfg.samples = o.samples;
  if (!o.threshold_grid.empty())
  {
    cfg.threshold = estimate_threshold(blur, events, o.threshold_grid, o.samples);
    std::cout << "estimated_threshold=" << cfg.threshold << '\n';
  }
  const SharpImage sharp = latent_at_midpoint(blur, events, cfg);
  write_png(o.out, sharp.pixels, o.bit_depth);
  return 0;
}

int cmd_eval(const Options& o)
{
  const Image ref = read_png(o.input);
  const Image test = read_png(o.second);
  const MetricReport r = evaluate(ref, test, o.peak);
  char ssim_buf[32];
  std::snprintf(ssim_buf, sizeof ssim_buf, "%.6f", r.ssim);
  if (o.kv)
    std::cout << "psnr_db=" << format_psnr(r.psnr_db) << "\nssim=" << ssim_buf << '\n';
  else
    std::cout << "PSNR: " << format_psnr(r.psnr_db) << " dB\nSSIM: " << ssim_buf << '\n';
  return 0;
}

PipelineConfig pipeline_config(const Options& o)
{
  PipelineConfig cfg;
  cfg.threshold = o.threshold;
  cfg.eps = o.eps;
  cfg.half_intervals = o.K;
  cfg.samples = o.samples;
  cfg.channel = channel_config(o);
  return cfg;
}

int cmd_pipeline(const Options& o)
{
  const PipelineConfig cfg = pipeline_config(o);
  const LoadedFrames frames = [&] {
    try
    {
      return load_frames(o.input, o.fps);
    }
    catch (const std::exception& e)
    {
      throw StageError("load", e.what());
    }
  }();
  const PipelineResult result = run_pipeline(frames, cfg);
  write_outputs(result, cfg, o.out);
  std::cout << format_report(result, cfg);
  return 0;
}

int cmd_export(const Options& o)
{
  const ExportSummary s = export_dataset(o.input, o.out, pipeline_config(o), o.fps);
  std::cout << "exported=" << s.exported << "\nskipped=" << s.skipped << '\n';
  return 0;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Event camera simulation, AWGN transmission and event-based deblurring"};
  app.require_subcommand(1);
  Options o;

  auto* sim = app.add_subcommand("simulate", "Simulate events from a frame directory (writes EVT8)");
  sim->add_option("frames_dir", o.input)->required();
  sim->add_option("--threshold", o.threshold, "Contrast threshold c")->capture_default_str();
  sim->add_option("--eps", o.eps, "Intensity floor before log")->capture_default_str();
  sim->add_option("--fps", o.fps, "Uniform frame rate (otherwise timestamps.txt)");
  sim->add_option("--out", o.out)->required();

  auto* blur = app.add_subcommand("blur", "Average a frame directory into a blurry PNG");
  blur->add_option("frames_dir", o.input)->required();
  blur->add_option("--fps", o.fps);
  blur->add_option("--bit-depth", o.bit_depth)->check(CLI::IsMember({8, 16}))->capture_default_str();
  blur->add_option("--out", o.out)->required();

  auto* vox = app.add_subcommand("voxelize", "Convert EVT8 events into a 2K x H x W ETNS tensor");
  vox->add_option("events", o.input)->required();
  vox->add_option("--K", o.K, "Half-interval count")->capture_default_str();
  add_exposure_flags(vox, o);
  vox->add_option("--out", o.out)->required();

  auto* chan = app.add_subcommand("channel", "Power-normalise an ETNS payload and pass it through AWGN");
  chan->add_option("input", o.input)->required();
  add_channel_flags(chan, o);
  chan->add_option("--k0", o.k0, "Image-specific symbols (CBR report)");
  chan->add_option("--k1", o.k1, "Event-specific symbols (CBR report)");
  chan->add_option("--k2", o.k2, "Shared symbols (CBR report)");
  chan->add_option("--n0", o.n0, "Source image dimension (CBR report)");
  chan->add_option("--out", o.out)->required();

  auto* deb = app.add_subcommand("deblur", "Recover the sharp midpoint image from blur + events");
  deb->add_option("--blur", o.input)->required();
  deb->add_option("--events", o.second)->required();
  deb->add_option("--threshold", o.threshold)->capture_default_str();
  deb->add_option("--threshold-grid", o.threshold_grid, "Estimate c from these candidates")
      ->delimiter(',');
  deb->add_option("--samples", o.samples, "Exposure samples M")->capture_default_str();
  deb->add_option("--bit-depth", o.bit_depth)->check(CLI::IsMember({8, 16}))->capture_default_str();
  add_exposure_flags(deb, o);
  deb->add_option("--out", o.out)->required();

  auto* ev = app.add_subcommand("eval", "PSNR and SSIM of a test image against a reference");
  ev->add_option("reference", o.input)->required();
  ev->add_option("test", o.second)->required();
  ev->add_option("--peak", o.peak)->capture_default_str();
  ev->add_flag("--kv", o.kv, "Machine-readable key=value output");

  auto* pipe = app.add_subcommand("pipeline", "blur -> simulate -> voxelize -> channel -> deblur -> eval");
  pipe->add_option("frames_dir", o.input)->required();
  pipe->add_option("--threshold", o.threshold)->capture_default_str();
  pipe->add_option("--eps", o.eps)->capture_default_str();
  pipe->add_option("--K", o.K)->capture_default_str();
  pipe->add_option("--samples", o.samples)->capture_default_str();
  pipe->add_option("--fps", o.fps);
  add_channel_flags(pipe, o);
  pipe->add_option("--out", o.out)->required();

  auto* exp = app.add_subcommand("export-dataset", "Export (blur, gt, events, tensor) samples per sequence");
  exp->add_option("frames_root", o.input)->required();
  exp->add_option("--threshold", o.threshold)->capture_default_str();
  exp->add_option("--eps", o.eps)->capture_default_str();
  exp->add_option("--K", o.K)->capture_default_str();
  exp->add_option("--fps", o.fps);
  exp->add_option("--out", o.out)->required();

  CLI11_PARSE(app, argc, argv);

  const std::pair<CLI::App*, int (*)(const Options&)> handlers[] = {
      {sim, cmd_simulate}, {blur, cmd_blur},     {vox, cmd_voxelize}, {chan, cmd_channel},
      {deb, cmd_deblur},   {ev, cmd_eval},       {pipe, cmd_pipeline}, {exp, cmd_export},
  };
  for (const auto& [cmd, handler] : handlers)
  {
    if (!cmd->parsed())
      continue;
    try
    {
      return handler(o);
    }
    catch (const StageError& e)
    {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    }
    catch (const std::exception& e)
    {
      std::cerr << "error: " << cmd->get_name() << ": " << e.what() << '\n';
      return 1;
    }
  }
  return 1;
}
