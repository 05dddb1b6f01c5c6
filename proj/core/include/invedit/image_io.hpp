#pragma once

// Codec-free image files:
//   .ppm / .pgm: binary portable pixmap P6 (3 channels) or P5 (1 channel),
//                  maxval 255; pixel = round(v * 255) on write, v = byte/255
//                  on read.
//   .f32: raw float planar, magic "IMF1", u16 version=1, u8 channels,
//                  u8 reserved=0, u32 height, u32 width, then one f32 LE
//                  row-major plane per channel. Lossless for f32 data.
// read_image / write_image dispatch on the file extension.

#include <string>

#include "invedit/image.hpp"

namespace invedit {

void write_ppm(const std::string& path, const ImageBuf& img);
ImageBuf read_ppm(const std::string& path);

void write_f32_image(const std::string& path, const ImageBuf& img);
ImageBuf read_f32_image(const std::string& path);

void write_image(const std::string& path, const ImageBuf& img);
ImageBuf read_image(const std::string& path);

}  // namespace invedit
