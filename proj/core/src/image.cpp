#include "invedit/image.hpp"

#include <cmath>

#include "invedit/error.hpp"

namespace invedit {

ImageBuf::ImageBuf(Array3 pixels) : a_(std::move(pixels)) {
  if (a_.c != 1 && a_.c != 3)
    raise(ErrorCode::ShapeMismatch, "image channels must be 1 or 3");
  for (double& p : a_.v) {
    if (!std::isfinite(p)) raise(ErrorCode::NonFiniteValue, "non-finite pixel");
    if (p < 0.0) {
      p = 0.0;
      clamp_noop_ = false;
    } else if (p > 1.0) {
      p = 1.0;
      clamp_noop_ = false;
    }
  }
}

ImageBuf area_downsample(const ImageBuf& img, int out_size) {
  const int n = img.height();
  if (img.width() != n)
    raise(ErrorCode::ShapeMismatch, "area_downsample expects a square image");
  if (out_size < 1 || n % out_size != 0)
    raise(ErrorCode::ShapeMismatch, "output size must evenly divide source size");
  if (out_size == n) return img;

  const int k = n / out_size;
  const double inv = 1.0 / (static_cast<double>(k) * k);
  Array3 out(out_size, out_size, img.channels());
  for (int y = 0; y < out_size; ++y)
    for (int x = 0; x < out_size; ++x)
      for (int ch = 0; ch < img.channels(); ++ch) {
        double s = 0.0;
        for (int dy = 0; dy < k; ++dy)
          for (int dx = 0; dx < k; ++dx) s += img.at(y * k + dy, x * k + dx, ch);
        out.at(y, x, ch) = s * inv;
      }
  return ImageBuf(std::move(out));
}

Array3 area_upsample_grad(const Array3& grad, int factor) {
  if (factor == 1) return grad;
  const double inv = 1.0 / (static_cast<double>(factor) * factor);
  Array3 out(grad.h * factor, grad.w * factor, grad.c);
  for (int y = 0; y < grad.h; ++y)
    for (int x = 0; x < grad.w; ++x)
      for (int ch = 0; ch < grad.c; ++ch) {
        const double g = grad.at(y, x, ch) * inv;
        for (int dy = 0; dy < factor; ++dy)
          for (int dx = 0; dx < factor; ++dx) out.at(y * factor + dy, x * factor + dx, ch) = g;
      }
  return out;
}

double mean_central_quarter(const ImageBuf& img) {
  const int h = img.height(), w = img.width();
  const int y0 = h / 4, y1 = y0 + h / 2;
  const int x0 = w / 4, x1 = x0 + w / 2;
  double s = 0.0;
  std::size_t count = 0;
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x < x1; ++x)
      for (int ch = 0; ch < img.channels(); ++ch) {
        s += img.at(y, x, ch);
        ++count;
      }
  if (count == 0) raise(ErrorCode::TooSmall, "image too small for central region");
  return s / static_cast<double>(count);
}

}  // namespace invedit
