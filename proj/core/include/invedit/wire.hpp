#pragma once

// Little-endian primitives for the LAT1 / DIR1 / GEN1 / IMF1 binary formats.
// Byte order is explicit so the files are identical across hosts.

#include <cstdint>
#include <cstring>
#include <string>

#include "invedit/error.hpp"

namespace invedit::wire {

inline void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_f32(std::string& out, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_u32(out, bits);
}

class Reader {
public:
  Reader(const std::string& data, std::string context)
      : data_(data), context_(std::move(context)) {}

  std::uint8_t get_u8() { return static_cast<std::uint8_t>(take(1)[0]); }

  std::uint16_t get_u16() {
    const unsigned char* p = take(2);
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
  }

  std::uint32_t get_u32() {
    const unsigned char* p = take(4);
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
  }

  std::uint64_t get_u64() {
    std::uint64_t lo = get_u32();
    std::uint64_t hi = get_u32();
    return lo | (hi << 32);
  }

  float get_f32() {
    std::uint32_t bits = get_u32();
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
  }

  void expect_magic(const char (&magic)[5]) {
    const unsigned char* p = take(4);
    if (std::memcmp(p, magic, 4) != 0)
      raise(ErrorCode::BadFormat, context_ + ": bad magic, expected " + magic);
  }

  bool at_end() const { return pos_ == data_.size(); }

  void require_end() {
    if (!at_end()) raise(ErrorCode::BadFormat, context_ + ": trailing bytes");
  }

  std::string get_bytes(std::size_t n) {
    const unsigned char* p = take(n);
    return std::string(reinterpret_cast<const char*>(p), n);
  }

private:
  const unsigned char* take(std::size_t n) {
    if (data_.size() - pos_ < n)
      raise(ErrorCode::BadFormat, context_ + ": truncated file");
    const unsigned char* p = reinterpret_cast<const unsigned char*>(data_.data()) + pos_;
    pos_ += n;
    return p;
  }

  const std::string& data_;
  std::string context_;
  std::size_t pos_ = 0;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& bytes);

}  // namespace invedit::wire
