#include "pathlight/image_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstring>

#include "pathlight/errors.hpp"

namespace pathlight {

namespace {

void append_u32_be(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void append_chunk(std::vector<std::uint8_t>& out, const char type[4],
                  const std::uint8_t* data, std::size_t len) {
  append_u32_be(out, static_cast<std::uint32_t>(len));
  const std::size_t crc_start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data, data + len);
  const uLong crc = crc32(crc32(0L, Z_NULL, 0), out.data() + crc_start,
                          static_cast<uInt>(4 + len));
  append_u32_be(out, static_cast<std::uint32_t>(crc));
}

}  // namespace

std::vector<std::uint8_t> encode_ppm(const Framebuffer& fb) {
  if (fb.width <= 0 || fb.height <= 0)
    throw ParamError("cannot encode an empty framebuffer");
  char header[64];
  const int header_len =
      std::snprintf(header, sizeof header, "P6\n%d %d\n255\n", fb.width,
                    fb.height);
  std::vector<std::uint8_t> out;
  out.reserve(static_cast<std::size_t>(header_len) + fb.pixels.size());
  out.insert(out.end(), header, header + header_len);
  out.insert(out.end(), fb.pixels.begin(), fb.pixels.end());
  return out;
}

std::vector<std::uint8_t> encode_png(const Framebuffer& fb) {
  if (fb.width <= 0 || fb.height <= 0)
    throw ParamError("cannot encode an empty framebuffer");

  // Raw image stream: each scanline prefixed with filter type 0 (None).
  const std::size_t row_bytes = static_cast<std::size_t>(fb.width) * 3;
  std::vector<std::uint8_t> raw;
  raw.reserve((row_bytes + 1) * static_cast<std::size_t>(fb.height));
  for (int y = 0; y < fb.height; ++y) {
    raw.push_back(0);
    const std::uint8_t* row = fb.pixels.data() + row_bytes * y;
    raw.insert(raw.end(), row, row + row_bytes);
  }

  uLongf compressed_len = compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> compressed(compressed_len);
  const int rc = compress2(compressed.data(), &compressed_len, raw.data(),
                           static_cast<uLong>(raw.size()), Z_BEST_SPEED);
  if (rc != Z_OK) throw Error("png encode: zlib compress failed");
  compressed.resize(compressed_len);

  std::vector<std::uint8_t> out;
  static const std::uint8_t signature[8] = {0x89, 'P', 'N', 'G',
                                            '\r', '\n', 0x1a, '\n'};
  out.insert(out.end(), signature, signature + 8);

  std::uint8_t ihdr[13];
  ihdr[0] = static_cast<std::uint8_t>(fb.width >> 24);
  ihdr[1] = static_cast<std::uint8_t>(fb.width >> 16);
  ihdr[2] = static_cast<std::uint8_t>(fb.width >> 8);
  ihdr[3] = static_cast<std::uint8_t>(fb.width);
  ihdr[4] = static_cast<std::uint8_t>(fb.height >> 24);
  ihdr[5] = static_cast<std::uint8_t>(fb.height >> 16);
  ihdr[6] = static_cast<std::uint8_t>(fb.height >> 8);
  ihdr[7] = static_cast<std::uint8_t>(fb.height);
  ihdr[8] = 8;   // bit depth
  ihdr[9] = 2;   // color type: truecolor RGB
  ihdr[10] = 0;  // compression
  ihdr[11] = 0;  // filter method
  ihdr[12] = 0;  // no interlace
  append_chunk(out, "IHDR", ihdr, sizeof ihdr);
  append_chunk(out, "IDAT", compressed.data(), compressed.size());
  append_chunk(out, "IEND", nullptr, 0);
  return out;
}

std::vector<std::uint8_t> encode_image(const Framebuffer& fb,
                                       ImageFormat format) {
  return format == ImageFormat::Ppm ? encode_ppm(fb) : encode_png(fb);
}

ImageFormat image_format_from_name(const std::string& name) {
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "png") return ImageFormat::Png;
  if (lower == "ppm") return ImageFormat::Ppm;
  throw ParamError("unknown image format '" + name + "' (expected png or ppm)");
}

namespace {

ImageFormat format_from_path(const std::string& path) {
  const std::size_t dot = path.rfind('.');
  if (dot == std::string::npos) return ImageFormat::Png;
  std::string ext = path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext == "ppm" ? ImageFormat::Ppm : ImageFormat::Png;
}

}  // namespace

void write_image(const std::string& path, const Framebuffer& fb) {
  write_image(path, fb, format_from_path(path));
}

void write_image(const std::string& path, const Framebuffer& fb,
                 ImageFormat format) {
  const std::vector<std::uint8_t> bytes = encode_image(fb, format);
  const std::string tmp = path + ".tmp";
  std::FILE* f = std::fopen(tmp.c_str(), "wb");
  if (!f)
    throw Error("cannot open '" + tmp + "' for writing: " +
                std::strerror(errno));
  const std::size_t written = std::fwrite(bytes.data(), 1, bytes.size(), f);
  const bool flushed = std::fclose(f) == 0;
  if (written != bytes.size() || !flushed) {
    std::remove(tmp.c_str());
    throw Error("short write to '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw Error("cannot rename '" + tmp + "' to '" + path + "': " +
                std::strerror(errno));
  }
}

}  // namespace pathlight
