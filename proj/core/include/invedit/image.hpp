#pragma once

#include <cstddef>
#include <vector>

namespace invedit {

// Dense H x W x C grid of doubles, interleaved (y, x, channel). Used for
// pixel data, gradients, and any image-shaped intermediate.
struct Array3 {
  int h = 0;
  int w = 0;
  int c = 0;
  std::vector<double> v;

  Array3() = default;
  Array3(int height, int width, int channels)
      : h(height), w(width), c(channels),
        v(static_cast<std::size_t>(height) * width * channels, 0.0) {}

  double& at(int y, int x, int ch) {
    return v[(static_cast<std::size_t>(y) * w + x) * c + ch];
  }
  double at(int y, int x, int ch) const {
    return v[(static_cast<std::size_t>(y) * w + x) * c + ch];
  }

  bool same_shape(const Array3& o) const { return h == o.h && w == o.w && c == o.c; }
  std::size_t size() const { return v.size(); }
};

// Image with entries finite and clamped to [0,1] at construction; 1 or 3
// channels. Construction rejects NaN rather than silently mapping it.
class ImageBuf {
public:
  ImageBuf() = default;
  explicit ImageBuf(Array3 pixels);

  const Array3& data() const { return a_; }
  int height() const { return a_.h; }
  int width() const { return a_.w; }
  int channels() const { return a_.c; }
  double at(int y, int x, int ch) const { return a_.at(y, x, ch); }
  bool empty() const { return a_.v.empty(); }
  bool same_shape(const ImageBuf& o) const { return a_.same_shape(o.a_); }

  // True when the clamp at construction was a no-op for every pixel.
  bool clamp_was_noop() const { return clamp_noop_; }

private:
  Array3 a_;
  bool clamp_noop_ = true;
};

// Block-mean downsample to out_size x out_size; the source side must be an
// integer multiple of out_size. Equal sizes return the input unchanged.
ImageBuf area_downsample(const ImageBuf& img, int out_size);

// Adjoint of area_downsample: spreads each coarse-cell value uniformly over
// its k x k source block, divided by k^2. Maps loss gradients taken at the
// downsampled resolution back to source resolution.
Array3 area_upsample_grad(const Array3& grad, int factor);

double mean_central_quarter(const ImageBuf& img);

}  // namespace invedit
