#pragma once

#include <evjscc/channel.hpp>
#include <evjscc/error.hpp>
#include <evjscc/event_tensor.hpp>

#include <cstdint>
#include <span>
#include <vector>

namespace evjscc::etns {

// ETNS container: magic "ETNS" | version u16 (1) | dtype u8 | rank u8
// | rank x u32 dims | row-major little-endian payload.

enum class DType : std::uint8_t
{
  Float32 = 0,
  Complex64 = 1, ///< interleaved (re, im) float32 pairs
};

inline constexpr std::uint16_t kVersion = 1;

struct TensorFile
{
  DType dtype = DType::Float32;
  std::vector<std::uint32_t> dims;
  std::vector<float> values; ///< complex data stored as re, im pairs

  std::size_t element_count() const;
};

class FormatError : public Error
{
public:
  using Error::Error;
};

std::vector<std::uint8_t> encode(const TensorFile& tensor);
TensorFile decode(std::span<const std::uint8_t> bytes);

/// Rank-3 float32 tensor (2K, H, W).
TensorFile from_event_tensor(const EventTensor& tensor);

/// Rebuilds an EventTensor; K is taken from the channel count. The exposure is
/// not stored in the file and must be supplied.
EventTensor to_event_tensor(const TensorFile& file, const Exposure& exposure);

/// Rank-1 complex64 vector.
TensorFile from_symbols(const SymbolVector& symbols);
SymbolVector to_symbols(const TensorFile& file);

} // namespace evjscc::etns
