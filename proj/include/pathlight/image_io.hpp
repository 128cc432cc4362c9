#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pathlight/renderer.hpp"

namespace pathlight {

enum class ImageFormat { Png, Ppm };

/// Binary PPM (P6, maxval 255). Header is exactly "P6\n{w} {h}\n255\n"
/// followed by the raw RGB rows, so identical frames encode byte-identically.
std::vector<std::uint8_t> encode_ppm(const Framebuffer& fb);

/// 8-bit RGB PNG (color type 2), one IDAT chunk, every scanline using filter
/// type 0. Throws ParamError for an empty framebuffer.
std::vector<std::uint8_t> encode_png(const Framebuffer& fb);

std::vector<std::uint8_t> encode_image(const Framebuffer& fb,
                                       ImageFormat format);

/// "png" or "ppm" (case-insensitive); throws ParamError otherwise.
ImageFormat image_format_from_name(const std::string& name);

/// Infer the format from the path's extension; unknown extensions default to
/// PNG. Writes to a sibling temp file and renames so readers never observe a
/// partial frame. Throws Error on I/O failure.
void write_image(const std::string& path, const Framebuffer& fb);
void write_image(const std::string& path, const Framebuffer& fb,
                 ImageFormat format);

}  // namespace pathlight
