#include <png.h>

#include <cstring>
#include <fstream>
#include <sstream>

#include "t2ploc/bev.hpp"
#include "t2ploc/error.hpp"

namespace t2p {

namespace {

void on_png_error(png_structp png, png_const_charp msg) {
  auto* sink = static_cast<std::string*>(png_get_error_ptr(png));
  *sink = msg;
  png_longjmp(png, 1);
}

void on_png_warning(png_structp, png_const_charp) {}

struct ReadCursor {
  std::string_view bytes;
  std::size_t offset = 0;
};

void read_bytes(png_structp png, png_bytep out, png_size_t len) {
  auto* cur = static_cast<ReadCursor*>(png_get_io_ptr(png));
  if (cur->offset + len > cur->bytes.size()) png_error(png, "unexpected end of PNG data");
  std::memcpy(out, cur->bytes.data() + cur->offset, len);
  cur->offset += len;
}

void write_bytes(png_structp png, png_bytep data, png_size_t len) {
  static_cast<std::string*>(png_get_io_ptr(png))->append(reinterpret_cast<const char*>(data), len);
}

void flush_noop(png_structp) {}

std::vector<png_byte> to_rows(const BevImage& image) {
  std::vector<png_byte> buf;
  buf.reserve(image.pixels().size() * 3);
  for (const auto& c : image.pixels()) {
    buf.push_back(c.r);
    buf.push_back(c.g);
    buf.push_back(c.b);
  }
  return buf;
}

}  // namespace

std::string encode_png(const BevImage& image) {
  std::string err;
  std::string out;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &err, on_png_error, on_png_warning);
  if (!png) throw Error(ErrorCode::Io, "png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  auto rows = to_rows(image);
  std::vector<png_bytep> row_ptrs(static_cast<std::size_t>(image.height()));
  for (int v = 0; v < image.height(); ++v) {
    row_ptrs[static_cast<std::size_t>(v)] = rows.data() + static_cast<std::size_t>(v) * image.width() * 3;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::Io, "PNG encode: " + err);
  }
  png_set_write_fn(png, &out, write_bytes, flush_noop);
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width()), static_cast<png_uint_32>(image.height()),
               8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_set_compression_level(png, 6);
  png_write_info(png, info);
  png_write_image(png, row_ptrs.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

BevImage decode_png(std::string_view bytes, const GeoReference& georef) {
  if (bytes.size() < 8 || png_sig_cmp(reinterpret_cast<png_const_bytep>(bytes.data()), 0, 8) != 0) {
    throw Error(ErrorCode::Parse, "not a PNG stream");
  }
  std::string err;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &err, on_png_error, on_png_warning);
  if (!png) throw Error(ErrorCode::Io, "png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  ReadCursor cursor{bytes, 0};
  BevImage image(georef);
  std::vector<png_byte> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::Parse, "PNG decode: " + err);
  }
  png_set_read_fn(png, &cursor, read_bytes);
  png_read_info(png, info);
  const auto w = png_get_image_width(png, info);
  const auto h = png_get_image_height(png, info);
  if (png_get_bit_depth(png, info) != 8 || png_get_color_type(png, info) != PNG_COLOR_TYPE_RGB) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::Parse, "PNG must be 8-bit RGB");
  }
  if (static_cast<int>(w) != georef.width_px() || static_cast<int>(h) != georef.height_px()) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::Integrity, "PNG size does not match the georeference");
  }
  rows.resize(static_cast<std::size_t>(w) * h * 3);
  std::vector<png_bytep> row_ptrs(h);
  for (png_uint_32 v = 0; v < h; ++v) row_ptrs[v] = rows.data() + static_cast<std::size_t>(v) * w * 3;
  png_read_image(png, row_ptrs.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  for (int v = 0; v < static_cast<int>(h); ++v) {
    for (int u = 0; u < static_cast<int>(w); ++u) {
      const png_byte* p = row_ptrs[static_cast<std::size_t>(v)] + u * 3;
      image.set({u, v}, {p[0], p[1], p[2]});
    }
  }
  return image;
}

void write_png(const std::filesystem::path& path, const BevImage& image) {
  const std::string bytes = encode_png(image);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

BevImage read_png(const std::filesystem::path& path, const GeoReference& georef) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Integrity, "missing " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return decode_png(ss.str(), georef);
}

}  // namespace t2p
