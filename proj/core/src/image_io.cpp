#include "invedit/image_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>

#include "invedit/error.hpp"
#include "invedit/wire.hpp"

namespace invedit {

namespace {

std::string lower_ext(const std::string& path) {
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos) return "";
  std::string ext = path.substr(dot + 1);
  for (char& ch : ext) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return ext;
}

// Skips whitespace and '#' comment lines between PNM header tokens.
std::size_t next_token(const std::string& s, std::size_t pos, long& value) {
  while (pos < s.size()) {
    if (std::isspace(static_cast<unsigned char>(s[pos]))) {
      ++pos;
    } else if (s[pos] == '#') {
      while (pos < s.size() && s[pos] != '\n') ++pos;
    } else {
      break;
    }
  }
  if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
    raise(ErrorCode::BadFormat, "malformed PNM header");
  value = 0;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
    value = value * 10 + (s[pos] - '0');
    ++pos;
  }
  return pos;
}

}  // namespace

void write_ppm(const std::string& path, const ImageBuf& img) {
  if (img.empty()) raise(ErrorCode::EmptyInput, "empty image");
  std::string out;
  char header[64];
  std::snprintf(header, sizeof(header), "P%c\n%d %d\n255\n",
                img.channels() == 3 ? '6' : '5', img.width(), img.height());
  out = header;
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      for (int ch = 0; ch < img.channels(); ++ch)
        out.push_back(static_cast<char>(
            static_cast<unsigned char>(std::lround(img.at(y, x, ch) * 255.0))));
  wire::write_file(path, out);
}

ImageBuf read_ppm(const std::string& path) {
  const std::string s = wire::read_file(path);
  if (s.size() < 2 || s[0] != 'P' || (s[1] != '5' && s[1] != '6'))
    raise(ErrorCode::BadFormat, path + ": not a binary PGM/PPM");
  const int channels = s[1] == '6' ? 3 : 1;
  long w = 0, h = 0, maxval = 0;
  std::size_t pos = 2;
  pos = next_token(s, pos, w);
  pos = next_token(s, pos, h);
  pos = next_token(s, pos, maxval);
  if (maxval != 255) raise(ErrorCode::BadFormat, path + ": only maxval 255 supported");
  if (w <= 0 || h <= 0) raise(ErrorCode::BadFormat, path + ": bad dimensions");
  ++pos;  // single whitespace byte after maxval
  const std::size_t need = static_cast<std::size_t>(w) * h * channels;
  if (s.size() - pos < need) raise(ErrorCode::BadFormat, path + ": truncated pixel data");
  Array3 a(static_cast<int>(h), static_cast<int>(w), channels);
  for (std::size_t i = 0; i < need; ++i)
    a.v[i] = static_cast<unsigned char>(s[pos + i]) / 255.0;
  return ImageBuf(std::move(a));
}

void write_f32_image(const std::string& path, const ImageBuf& img) {
  if (img.empty()) raise(ErrorCode::EmptyInput, "empty image");
  std::string out;
  out += "IMF1";
  wire::put_u16(out, 1);
  out.push_back(static_cast<char>(img.channels()));
  out.push_back(0);
  wire::put_u32(out, static_cast<std::uint32_t>(img.height()));
  wire::put_u32(out, static_cast<std::uint32_t>(img.width()));
  for (int ch = 0; ch < img.channels(); ++ch)
    for (int y = 0; y < img.height(); ++y)
      for (int x = 0; x < img.width(); ++x)
        wire::put_f32(out, static_cast<float>(img.at(y, x, ch)));
  wire::write_file(path, out);
}

ImageBuf read_f32_image(const std::string& path) {
  const std::string bytes = wire::read_file(path);
  wire::Reader r(bytes, path);
  r.expect_magic("IMF1");
  const std::uint16_t version = r.get_u16();
  if (version != 1) raise(ErrorCode::BadFormat, path + ": unsupported IMF1 version");
  const int channels = r.get_u8();
  r.get_u8();
  const int h = static_cast<int>(r.get_u32());
  const int w = static_cast<int>(r.get_u32());
  if (h <= 0 || w <= 0 || (channels != 1 && channels != 3))
    raise(ErrorCode::BadFormat, path + ": bad IMF1 dimensions");
  Array3 a(h, w, channels);
  for (int ch = 0; ch < channels; ++ch)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) a.at(y, x, ch) = r.get_f32();
  r.require_end();
  return ImageBuf(std::move(a));
}

void write_image(const std::string& path, const ImageBuf& img) {
  const std::string ext = lower_ext(path);
  if (ext == "ppm" || ext == "pgm")
    write_ppm(path, img);
  else if (ext == "f32")
    write_f32_image(path, img);
  else
    raise(ErrorCode::Unsupported, path + ": unknown image extension (use .ppm/.pgm/.f32)");
}

ImageBuf read_image(const std::string& path) {
  const std::string ext = lower_ext(path);
  if (ext == "ppm" || ext == "pgm") return read_ppm(path);
  if (ext == "f32") return read_f32_image(path);
  raise(ErrorCode::Unsupported, path + ": unknown image extension (use .ppm/.pgm/.f32)");
}

}  // namespace invedit
