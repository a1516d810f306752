#include <evjscc/image_io.hpp>

#include <evjscc/error.hpp>

#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <memory>

namespace evjscc {

namespace {

struct FileCloser
{
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode)
{
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f)
    throw Error("cannot open " + path.string());
  return f;
}

struct PngLayout
{
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int bit_depth = 0;
  int channels = 0;
};

// libpng reports errors by longjmp; everything that outlives a failure is
// owned by the caller so no destructor is skipped.
bool read_png_rows(std::FILE* fp, PngLayout& layout, std::vector<png_byte>& pixels)
{
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png)
    return false;
  png_infop info = png_create_info_struct(png);
  if (!info)
  {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png)))
  {
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }

  png_init_io(png, fp);
  png_read_info(png, info);

  const int color_type = png_get_color_type(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE)
    png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8)
    png_set_expand_gray_1_2_4_to_8(png);
  if (color_type & PNG_COLOR_MASK_ALPHA)
    png_set_strip_alpha(png);
  png_read_update_info(png, info);

  layout.width = png_get_image_width(png, info);
  layout.height = png_get_image_height(png, info);
  layout.bit_depth = png_get_bit_depth(png, info);
  layout.channels = png_get_channels(png, info);

  const std::size_t stride = png_get_rowbytes(png, info);
  pixels.resize(stride * layout.height);
  std::vector<png_bytep> rows(layout.height);
  for (png_uint_32 r = 0; r < layout.height; ++r)
    rows[r] = pixels.data() + r * stride;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

bool write_png_rows(std::FILE* fp, const PngLayout& layout, std::vector<png_byte>& pixels)
{
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png)
    return false;
  png_infop info = png_create_info_struct(png);
  if (!info)
  {
    png_destroy_write_struct(&png, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png)))
  {
    png_destroy_write_struct(&png, &info);
    return false;
  }

  png_init_io(png, fp);
  png_set_compression_level(png, 6);
  png_set_IHDR(png, info, layout.width, layout.height, layout.bit_depth,
               layout.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  const std::size_t stride =
      std::size_t{layout.width} * static_cast<std::size_t>(layout.channels) * (layout.bit_depth / 8);
  for (png_uint_32 r = 0; r < layout.height; ++r)
    png_write_row(png, pixels.data() + r * stride);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

double max_code(int bit_depth)
{
  if (bit_depth != 8 && bit_depth != 16)
    throw InvalidArgument("PNG bit depth must be 8 or 16");
  return bit_depth == 8 ? 255.0 : 65535.0;
}

} // namespace

Image read_png(const std::filesystem::path& path)
{
  FilePtr fp = open_file(path, "rb");
  PngLayout layout;
  std::vector<png_byte> pixels;
  if (!read_png_rows(fp.get(), layout, pixels))
    throw Error("failed to decode PNG " + path.string());

  Image img(layout.width, layout.height, static_cast<std::size_t>(layout.channels));
  const double top = max_code(layout.bit_depth);
  if (layout.bit_depth == 8)
  {
    for (std::size_t i = 0; i < img.size(); ++i)
      img.data[i] = pixels[i] / top;
  }
  else
  {
    for (std::size_t i = 0; i < img.size(); ++i)
      img.data[i] = ((unsigned{pixels[2 * i]} << 8) | pixels[2 * i + 1]) / top;
  }
  return img;
}

Image quantize(const Image& img, int bit_depth)
{
  const double top = max_code(bit_depth);
  Image out = img;
  for (double& v : out.data)
    v = std::round(std::clamp(v, 0.0, 1.0) * top) / top;
  return out;
}

void write_png(const std::filesystem::path& path, const Image& img, int bit_depth)
{
  if (img.channels != 1 && img.channels != 3)
    throw InvalidArgument("write_png: only 1 or 3 channel images are supported");
  if (img.width == 0 || img.height == 0)
    throw InvalidArgument("write_png: empty image");
  const double top = max_code(bit_depth);

  std::vector<png_byte> pixels;
  pixels.reserve(img.size() * static_cast<std::size_t>(bit_depth / 8));
  for (double v : img.data)
  {
    const auto code = static_cast<unsigned>(std::lround(std::clamp(v, 0.0, 1.0) * top));
    if (bit_depth == 16)
      pixels.push_back(static_cast<png_byte>(code >> 8));
    pixels.push_back(static_cast<png_byte>(code & 0xff));
  }

  PngLayout layout{static_cast<png_uint_32>(img.width), static_cast<png_uint_32>(img.height),
                   bit_depth, static_cast<int>(img.channels)};
  FilePtr fp = open_file(path, "wb");
  if (!write_png_rows(fp.get(), layout, pixels))
    throw Error("failed to encode PNG " + path.string());
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw Error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out)
    throw Error("write failed for " + path.string());
}

} // namespace evjscc
