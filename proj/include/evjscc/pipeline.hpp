#pragma once

#include <evjscc/blur.hpp>
#include <evjscc/channel.hpp>
#include <evjscc/edi.hpp>
#include <evjscc/error.hpp>
#include <evjscc/event_tensor.hpp>
#include <evjscc/events.hpp>
#include <evjscc/metrics.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace evjscc {

/// Error tagged with the pipeline stage that raised it.
class StageError : public Error
{
public:
  StageError(std::string stage, const std::string& message)
    : Error(stage + ": " + message), stage_(std::move(stage))
  {}
  const std::string& stage() const { return stage_; }

private:
  std::string stage_;
};

/// Frames as read from disk, possibly RGB.
struct LoadedFrames
{
  std::vector<Image> frames;
  std::vector<double> timestamps;
};

inline constexpr const char* kTimestampSidecar = "timestamps.txt";

/// Reads every *.png in `dir` in lexicographic order. Timestamps come from
/// uniform spacing at `fps` when given, otherwise from timestamps.txt (one
/// value in seconds per line).
LoadedFrames load_frames(const std::filesystem::path& dir, std::optional<double> fps);

/// Luminance frames for the event simulator.
FrameSequence luminance_sequence(const LoadedFrames& frames);

/// Index of the frame used as the sharp reference, (n - 1) / 2.
std::size_t middle_index(std::size_t frame_count);

struct PipelineConfig
{
  double threshold = 0.05;
  double eps = 1e-3;
  int half_intervals = 3; ///< K of the exported event tensor
  int samples = 64;       ///< M
  ChannelConfig channel;  ///< noiseless by default
};

/// Signed integrals at the M midpoint sample times, read from a K = M tensor.
EventIntegrals integrals_from_tensor(const EventTensor& tensor, int samples);

/// Analytic stand-in for the learned transmitter: the blur (quantised to 16-bit
/// codes) and a K = M event tensor are packed pairwise into complex symbols as
/// the s0 and s1 streams (no shared stream), jointly power normalised, sent
/// through the channel and rescaled at the receiver. The receiver snaps the
/// blur to the 16-bit grid within [0, 1] and the event counts to integers.
struct TransmissionLink
{
  TransmissionBudget budget;
  double scale = 1.0; ///< normalisation gain, assumed known at the receiver
  SymbolVector transmitted;
  SymbolVector received;
  BlurryImage blur;
  EventTensor tensor;
};

TransmissionLink transmit(const BlurryImage& blur, const EventTensor& fine,
                          const ChannelConfig& channel);

struct PipelineResult
{
  BlurryImage blur;        ///< source blur, 16-bit quantised
  Image ground_truth;      ///< middle frame
  EventStream events;
  EventTensor tensor;      ///< K = cfg.half_intervals
  TransmissionLink link;
  SharpImage restored;
  MetricReport blur_vs_truth;
  MetricReport restored_vs_truth;
  MetricReport restored_vs_blur;
};

PipelineResult run_pipeline(const LoadedFrames& frames, const PipelineConfig& cfg);

/// Writes blur.png, gt.png, restored.png, events.evt8, tensor.etns, tx.etns,
/// rx.etns and report.txt into `dir`.
void write_outputs(const PipelineResult& result, const PipelineConfig& cfg,
                   const std::filesystem::path& dir);

/// key=value report lines.
std::string format_report(const PipelineResult& result, const PipelineConfig& cfg);

struct ExportSummary
{
  std::vector<std::string> manifest;   ///< lines as written to manifest.txt
  std::size_t exported = 0;
  std::size_t skipped = 0;
};

inline constexpr const char* kManifestName = "manifest.txt";

/// One sample directory (blur.png, gt.png, events.evt8, tensor.etns) per
/// sequence folder under `root`; unreadable sequences are skipped and noted in
/// the manifest as "# skipped <name>: <reason>".
ExportSummary export_dataset(const std::filesystem::path& root, const std::filesystem::path& out,
                             const PipelineConfig& cfg, std::optional<double> fps);

} // namespace evjscc
