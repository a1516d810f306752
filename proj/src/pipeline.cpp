#include <evjscc/pipeline.hpp>

#include <evjscc/aer_codec.hpp>
#include <evjscc/image_io.hpp>
#include <evjscc/tensor_io.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

namespace evjscc {

namespace fs = std::filesystem;

namespace {

template <typename F>
auto in_stage(const char* stage, F&& fn) -> decltype(fn())
{
  try
  {
    return fn();
  }
  catch (const StageError&)
  {
    throw;
  }
  catch (const std::exception& e)
  {
    throw StageError(stage, e.what());
  }
}

std::string fmt_double(double v)
{
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

void write_text(const fs::path& path, const std::string& text)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw Error("cannot open " + path.string() + " for writing");
  out << text;
}

MetricReport evaluate_any_size(const Image& ref, const Image& test)
{
  MetricReport r;
  r.psnr_db = psnr(ref, test);
  r.ssim = ref.width >= 11 && ref.height >= 11 ? ssim(ref, test)
                                               : std::numeric_limits<double>::quiet_NaN();
  return r;
}

std::string fmt_ssim(double v)
{
  return std::isnan(v) ? "n/a" : fmt_double(v);
}

} // namespace

LoadedFrames load_frames(const fs::path& dir, std::optional<double> fps)
{
  if (!fs::is_directory(dir))
    throw Error("frames directory not found: " + dir.string());

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".png")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty())
    throw Error("no .png frames in " + dir.string());

  LoadedFrames out;
  for (const auto& f : files)
    out.frames.push_back(read_png(f));

  if (fps)
  {
    if (!(*fps > 0.0))
      throw InvalidArgument("fps must be positive");
    for (std::size_t k = 0; k < files.size(); ++k)
      out.timestamps.push_back(static_cast<double>(k) / *fps);
  }
  else
  {
    const fs::path sidecar = dir / kTimestampSidecar;
    std::ifstream in(sidecar);
    if (!in)
      throw Error("no " + std::string(kTimestampSidecar) + " in " + dir.string() +
                  " and no --fps given");
    std::string line;
    while (std::getline(in, line))
    {
      if (line.find_first_not_of(" \t\r") == std::string::npos)
        continue;
      out.timestamps.push_back(std::stod(line));
    }
    if (out.timestamps.size() != files.size())
      throw Error(sidecar.string() + " lists " + std::to_string(out.timestamps.size()) +
                  " timestamps for " + std::to_string(files.size()) + " frames");
  }
  return out;
}

FrameSequence luminance_sequence(const LoadedFrames& frames)
{
  FrameSequence seq;
  seq.timestamps = frames.timestamps;
  seq.frames.reserve(frames.frames.size());
  for (const Image& f : frames.frames)
    seq.frames.push_back(to_luma(f));
  return seq;
}

std::size_t middle_index(std::size_t frame_count)
{
  return frame_count == 0 ? 0 : (frame_count - 1) / 2;
}

EventIntegrals integrals_from_tensor(const EventTensor& tensor, int samples)
{
  if (tensor.half_intervals != samples)
    throw InvalidArgument("integrals_from_tensor: tensor K must equal the sample count");

  EventIntegrals out;
  out.width = tensor.width;
  out.height = tensor.height;
  out.origin = tensor.exposure.mid;
  out.times = sample_times(tensor.exposure, samples);
  const std::size_t plane = tensor.width * tensor.height;
  out.counts.assign(out.times.size() * plane, 0.0);
  for (int m = 0; m < samples; ++m)
  {
    // t_m is boundary j = 2m + 1 of the K = M grid.
    const int j = 2 * m + 1;
    if (j == samples)
      continue;
    const std::size_t ch = static_cast<std::size_t>(j < samples ? j : j - 1);
    std::copy_n(tensor.data.begin() + static_cast<std::ptrdiff_t>(ch * plane), plane,
                out.counts.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(m) * plane));
  }
  return out;
}

TransmissionLink transmit(const BlurryImage& blur, const EventTensor& fine,
                          const ChannelConfig& channel)
{
  const std::vector<double>& pixels = blur.pixels.data;
  const std::vector<double> counts(fine.data.begin(), fine.data.end());

  SymbolVector z = pack_reals(pixels);
  const SymbolVector s1 = pack_reals(counts);
  TransmissionLink link;
  link.budget = TransmissionBudget{z.size(), s1.size(), 0, pixels.size()};
  z.insert(z.end(), s1.begin(), s1.end());

  double energy = 0.0;
  for (const Symbol& s : z)
    energy += std::norm(s);
  link.transmitted = power_normalize(z);
  link.scale = std::sqrt(static_cast<double>(z.size()) / energy);
  link.received = awgn(link.transmitted, channel);

  SymbolVector rescaled = link.received;
  for (Symbol& s : rescaled)
    s /= link.scale;
  const auto [z0, z1] = split_and_merge(rescaled, link.budget);

  link.blur.exposure = blur.exposure;
  link.blur.pixels = blur.pixels;
  link.blur.pixels.data = unpack_reals(z0, pixels.size());
  link.blur.pixels = quantize(link.blur.pixels, 16);

  link.tensor = fine;
  const std::vector<double> rx_counts = unpack_reals(z1, counts.size());
  for (std::size_t i = 0; i < rx_counts.size(); ++i)
    link.tensor.data[i] = static_cast<float>(std::round(rx_counts[i]));
  return link;
}

PipelineResult run_pipeline(const LoadedFrames& frames, const PipelineConfig& cfg)
{
  PipelineResult r;
  in_stage("blur", [&] {
    r.blur = synthesize_blur(frames.frames, frames.timestamps);
    r.blur.pixels = quantize(r.blur.pixels, 16);
    r.ground_truth = frames.frames.at(middle_index(frames.frames.size()));
  });
  in_stage("simulate", [&] {
    r.events = simulate_events(luminance_sequence(frames), SimulatorConfig{cfg.threshold, cfg.eps});
  });
  const EventTensor fine = in_stage("voxelize", [&] {
    r.tensor = voxelize(r.events, r.blur.exposure, cfg.half_intervals);
    return voxelize(r.events, r.blur.exposure, cfg.samples);
  });
  in_stage("channel", [&] { r.link = transmit(r.blur, fine, cfg.channel); });
  in_stage("deblur", [&] {
    DeblurConfig dc;
    dc.threshold = cfg.threshold;
    dc.samples = cfg.samples;
    r.restored = latent_at_midpoint(r.link.blur, integrals_from_tensor(r.link.tensor, cfg.samples), dc);
  });
  in_stage("eval", [&] {
    r.blur_vs_truth = evaluate_any_size(r.ground_truth, r.blur.pixels);
    r.restored_vs_truth = evaluate_any_size(r.ground_truth, r.restored.pixels);
    r.restored_vs_blur = evaluate_any_size(r.blur.pixels, r.restored.pixels);
  });
  return r;
}

std::string format_report(const PipelineResult& r, const PipelineConfig& cfg)
{
  const Rational ratio = cbr(r.link.budget);
  std::ostringstream os;
  os << "threshold=" << fmt_double(cfg.threshold) << '\n'
     << "K=" << cfg.half_intervals << '\n'
     << "samples=" << cfg.samples << '\n'
     << "snr_db=" << (cfg.channel.snr_db ? fmt_double(*cfg.channel.snr_db) : "noiseless") << '\n'
     << "seed=" << cfg.channel.seed << '\n'
     << "events=" << r.events.size() << '\n'
     << "k0=" << r.link.budget.k0 << '\n'
     << "k1=" << r.link.budget.k1 << '\n'
     << "k2=" << r.link.budget.k2 << '\n'
     << "n0=" << r.link.budget.n0 << '\n'
     << "cbr=" << ratio.num << '/' << ratio.den << '\n'
     << "psnr_blur_db=" << format_psnr(r.blur_vs_truth.psnr_db) << '\n'
     << "ssim_blur=" << fmt_ssim(r.blur_vs_truth.ssim) << '\n'
     << "psnr_restored_db=" << format_psnr(r.restored_vs_truth.psnr_db) << '\n'
     << "ssim_restored=" << fmt_ssim(r.restored_vs_truth.ssim) << '\n'
     << "psnr_restored_vs_blur_db=" << format_psnr(r.restored_vs_blur.psnr_db) << '\n';
  return os.str();
}

void write_outputs(const PipelineResult& r, const PipelineConfig& cfg, const fs::path& dir)
{
  in_stage("write", [&] {
    fs::create_directories(dir);
    write_png(dir / "blur.png", r.blur.pixels, 16);
    write_png(dir / "gt.png", r.ground_truth, 16);
    write_png(dir / "restored.png", r.restored.pixels, 16);
    write_bytes(dir / "events.evt8", aer::encode_stream(r.events));
    write_bytes(dir / "tensor.etns", etns::encode(etns::from_event_tensor(r.tensor)));
    write_bytes(dir / "tx.etns", etns::encode(etns::from_symbols(r.link.transmitted)));
    write_bytes(dir / "rx.etns", etns::encode(etns::from_symbols(r.link.received)));
    write_text(dir / "report.txt", format_report(r, cfg));
  });
}

ExportSummary export_dataset(const fs::path& root, const fs::path& out, const PipelineConfig& cfg,
                             std::optional<double> fps)
{
  if (!fs::is_directory(root))
    throw StageError("export", "frames root not found: " + root.string());

  std::vector<fs::path> sequences;
  for (const auto& entry : fs::directory_iterator(root))
    if (entry.is_directory())
      sequences.push_back(entry.path());
  std::sort(sequences.begin(), sequences.end());

  fs::create_directories(out);
  ExportSummary summary;
  for (const fs::path& seq : sequences)
  {
    const std::string name = seq.filename().string();
    try
    {
      const LoadedFrames frames = load_frames(seq, fps);
      BlurryImage blur = synthesize_blur(frames.frames, frames.timestamps);
      const EventStream events =
          simulate_events(luminance_sequence(frames), SimulatorConfig{cfg.threshold, cfg.eps});
      const EventTensor tensor = voxelize(events, blur.exposure, cfg.half_intervals);

      const fs::path dir = out / name;
      fs::create_directories(dir);
      write_png(dir / "blur.png", blur.pixels, 16);
      write_png(dir / "gt.png", frames.frames[middle_index(frames.frames.size())], 16);
      write_bytes(dir / "events.evt8", aer::encode_stream(events));
      write_bytes(dir / "tensor.etns", etns::encode(etns::from_event_tensor(tensor)));

      summary.manifest.push_back(name + "/blur.png " + name + "/gt.png " + name + "/events.evt8 " +
                                 name + "/tensor.etns");
      ++summary.exported;
    }
    catch (const std::exception& e)
    {
      std::cerr << "warning: skipping sequence " << name << ": " << e.what() << '\n';
      summary.manifest.push_back("# skipped " + name + ": " + e.what());
      ++summary.skipped;
    }
  }

  std::string text;
  for (const auto& line : summary.manifest)
    text += line + '\n';
  in_stage("export", [&] { write_text(out / kManifestName, text); });
  return summary;
}

} // namespace evjscc
