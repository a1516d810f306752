#include <evjscc/tensor_io.hpp>

#include <bit>
#include <cstring>
#include <string>

namespace evjscc::etns {

namespace {

static_assert(std::endian::native == std::endian::little, "ETNS I/O assumes a little-endian host");

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v)
{
  for (int i = 0; i < 4; ++i)
    out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t at)
{
  return std::uint32_t{in[at]} | std::uint32_t{in[at + 1]} << 8 | std::uint32_t{in[at + 2]} << 16 |
         std::uint32_t{in[at + 3]} << 24;
}

std::size_t scalars_per_element(DType d)
{
  return d == DType::Complex64 ? 2 : 1;
}

} // namespace

std::size_t TensorFile::element_count() const
{
  std::size_t n = 1;
  for (std::uint32_t d : dims)
    n *= d;
  return n;
}

std::vector<std::uint8_t> encode(const TensorFile& t)
{
  if (t.dims.size() > 255)
    throw FormatError("ETNS: rank exceeds 255");
  if (t.values.size() != t.element_count() * scalars_per_element(t.dtype))
    throw FormatError("ETNS: payload size does not match dims");

  std::vector<std::uint8_t> out{'E', 'T', 'N', 'S'};
  out.push_back(static_cast<std::uint8_t>(kVersion & 0xff));
  out.push_back(static_cast<std::uint8_t>(kVersion >> 8));
  out.push_back(static_cast<std::uint8_t>(t.dtype));
  out.push_back(static_cast<std::uint8_t>(t.dims.size()));
  for (std::uint32_t d : t.dims)
    put_u32(out, d);
  const std::size_t header = out.size();
  out.resize(header + t.values.size() * sizeof(float));
  std::memcpy(out.data() + header, t.values.data(), t.values.size() * sizeof(float));
  return out;
}

TensorFile decode(std::span<const std::uint8_t> bytes)
{
  if (bytes.size() < 8)
    throw FormatError("ETNS: truncated header");
  if (std::memcmp(bytes.data(), "ETNS", 4) != 0)
    throw FormatError("ETNS: bad magic");
  const std::uint16_t version = static_cast<std::uint16_t>(bytes[4] | bytes[5] << 8);
  if (version != kVersion)
    throw FormatError("ETNS: unsupported version " + std::to_string(version));
  if (bytes[6] > static_cast<std::uint8_t>(DType::Complex64))
    throw FormatError("ETNS: unknown dtype " + std::to_string(bytes[6]));

  TensorFile t;
  t.dtype = static_cast<DType>(bytes[6]);
  const std::size_t rank = bytes[7];
  const std::size_t header = 8 + 4 * rank;
  if (bytes.size() < header)
    throw FormatError("ETNS: truncated dims");
  for (std::size_t i = 0; i < rank; ++i)
    t.dims.push_back(get_u32(bytes, 8 + 4 * i));

  const std::size_t scalars = t.element_count() * scalars_per_element(t.dtype);
  if (bytes.size() - header != scalars * sizeof(float))
    throw FormatError("ETNS: payload length " + std::to_string(bytes.size() - header) +
                      " does not match dims (" + std::to_string(scalars * sizeof(float)) + ")");
  t.values.resize(scalars);
  std::memcpy(t.values.data(), bytes.data() + header, scalars * sizeof(float));
  return t;
}

TensorFile from_event_tensor(const EventTensor& tensor)
{
  return TensorFile{DType::Float32,
                    {static_cast<std::uint32_t>(tensor.channels()),
                     static_cast<std::uint32_t>(tensor.height),
                     static_cast<std::uint32_t>(tensor.width)},
                    tensor.data};
}

EventTensor to_event_tensor(const TensorFile& file, const Exposure& exposure)
{
  if (file.dtype != DType::Float32 || file.dims.size() != 3)
    throw FormatError("ETNS: event tensor must be rank-3 float32");
  if (file.dims[0] == 0 || file.dims[0] % 2 != 0)
    throw FormatError("ETNS: event tensor channel count must be a positive even number");
  EventTensor t;
  t.half_intervals = static_cast<int>(file.dims[0] / 2);
  t.height = file.dims[1];
  t.width = file.dims[2];
  t.exposure = exposure;
  t.data = file.values;
  return t;
}

TensorFile from_symbols(const SymbolVector& symbols)
{
  TensorFile t;
  t.dtype = DType::Complex64;
  t.dims = {static_cast<std::uint32_t>(symbols.size())};
  t.values.reserve(2 * symbols.size());
  for (const Symbol& s : symbols)
  {
    t.values.push_back(static_cast<float>(s.real()));
    t.values.push_back(static_cast<float>(s.imag()));
  }
  return t;
}

SymbolVector to_symbols(const TensorFile& file)
{
  if (file.dtype != DType::Complex64)
    throw FormatError("ETNS: symbol vectors must be complex64");
  SymbolVector out(file.element_count());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = Symbol(file.values[2 * i], file.values[2 * i + 1]);
  return out;
}

} // namespace evjscc::etns
