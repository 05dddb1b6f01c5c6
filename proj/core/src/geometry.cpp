#include "invedit/geometry.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

#include "invedit/error.hpp"

namespace invedit {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Reflect without repeating the border sample (-1 -> 1, n -> n-2).
int reflect_index(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

double fetch(const ImageBuf& img, int y, int x, int ch, const AlignConfig& cfg) {
  const int h = img.height(), w = img.width();
  if (y >= 0 && y < h && x >= 0 && x < w) return img.at(y, x, ch);
  switch (cfg.pad_mode) {
    case PadMode::reflect:
      return img.at(reflect_index(y, h), reflect_index(x, w), ch);
    case PadMode::replicate:
      return img.at(std::clamp(y, 0, h - 1), std::clamp(x, 0, w - 1), ch);
    case PadMode::constant:
      return cfg.pad_value;
  }
  return cfg.pad_value;
}

}  // namespace

AffineTransform AffineTransform::identity() {
  AffineTransform t;
  t.m << 1, 0, 0, 0, 1, 0;
  return t;
}

void validate_box(const BoundingBox& b) {
  if (!(std::isfinite(b.x0) && std::isfinite(b.y0) && std::isfinite(b.x1) &&
        std::isfinite(b.y1)))
    raise(ErrorCode::NonFiniteValue, "bounding box has non-finite coordinate");
  if (!(b.x0 < b.x1 && b.y0 < b.y1))
    raise(ErrorCode::ShapeMismatch, "bounding box needs x0<x1 and y0<y1");
}

BoundingBox select_primary_face(std::span<const BoundingBox> boxes) {
  if (boxes.empty()) raise(ErrorCode::EmptyInput, "no faces detected");
  const BoundingBox* best = &boxes[0];
  for (const BoundingBox& b : boxes.subspan(1)) {
    const double a = b.area(), ba = best->area();
    if (a > ba || (a == ba && (b.x0 < best->x0 ||
                               (b.x0 == best->x0 && b.y0 < best->y0))))
      best = &b;
  }
  return *best;
}

std::pair<Point2, Point2> eye_centers(const LandmarkSet& lm) {
  const int n = static_cast<int>(lm.points.size());
  auto check_range = [&](int begin, int end) {
    if (begin < 0 || end > n || begin >= end)
      raise(ErrorCode::BadIndexRange, "invalid eye landmark range");
  };
  check_range(lm.eye_left_begin, lm.eye_left_end);
  check_range(lm.eye_right_begin, lm.eye_right_end);
  if (lm.eye_left_begin < lm.eye_right_end && lm.eye_right_begin < lm.eye_left_end)
    raise(ErrorCode::BadIndexRange, "eye landmark ranges overlap");

  auto centroid = [&](int begin, int end) {
    Point2 c = Point2::Zero();
    for (int i = begin; i < end; ++i) c += lm.points[i];
    return Point2(c / double(end - begin));
  };
  Point2 left = centroid(lm.eye_left_begin, lm.eye_left_end);
  Point2 right = centroid(lm.eye_right_begin, lm.eye_right_end);
  if (left.x() > right.x()) std::swap(left, right);
  return {left, right};
}

double rotation_angle(const Point2& left, const Point2& right) {
  if (left.x() == right.x() && left.y() == right.y())
    raise(ErrorCode::DegenerateEyes, "eye centers coincide");
  double deg = std::atan2(right.y() - left.y(), right.x() - left.x()) * 180.0 / M_PI;
  if (deg <= -180.0) deg += 360.0;
  return deg;
}

AffineTransform derotation_transform(const Point2& center, double angle_deg, double scale) {
  if (!(scale > 0.0)) raise(ErrorCode::ShapeMismatch, "scale must be positive");
  const double rad = -angle_deg * M_PI / 180.0;
  const double c = std::cos(rad), s = std::sin(rad);
  AffineTransform t;
  t.m(0, 0) = scale * c;
  t.m(0, 1) = -scale * s;
  t.m(1, 0) = scale * s;
  t.m(1, 1) = scale * c;
  t.m.col(2) = center - t.m.leftCols<2>() * center;
  return t;
}

ImageBuf apply_affine(const ImageBuf& img, const AffineTransform& t, int out_w,
                      int out_h, const AlignConfig& cfg) {
  if (img.empty()) raise(ErrorCode::EmptyInput, "empty image");
  if (out_w < 1 || out_h < 1) raise(ErrorCode::ShapeMismatch, "bad output size");

  const Eigen::Matrix2d lin = t.m.leftCols<2>();
  const double det = lin.determinant();
  if (std::abs(det) < 1e-12)
    raise(ErrorCode::SingularTransform, "affine linear part is singular");
  Eigen::Matrix2d inv;
  inv << lin(1, 1), -lin(0, 1), -lin(1, 0), lin(0, 0);
  inv /= det;
  const Point2 shift = t.m.col(2);

  const int channels = img.channels();
  Array3 out(out_h, out_w, channels);
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      const Point2 src = inv * (Point2(x, y) - shift);
      const double fx = std::floor(src.x()), fy = std::floor(src.y());
      const int x0 = static_cast<int>(fx), y0 = static_cast<int>(fy);
      const double ax = src.x() - fx, ay = src.y() - fy;
      for (int ch = 0; ch < channels; ++ch) {
        const double v00 = fetch(img, y0, x0, ch, cfg);
        const double v01 = fetch(img, y0, x0 + 1, ch, cfg);
        const double v10 = fetch(img, y0 + 1, x0, ch, cfg);
        const double v11 = fetch(img, y0 + 1, x0 + 1, ch, cfg);
        out.at(y, x, ch) = v00 * (1 - ay) * (1 - ax) + v01 * (1 - ay) * ax +
                           v10 * ay * (1 - ax) + v11 * ay * ax;
      }
    }
  }
  return ImageBuf(std::move(out));
}

AffineTransform align_transform(const LandmarkSet& lm, const AlignConfig& cfg) {
  const auto [left, right] = eye_centers(lm);
  const double angle = rotation_angle(left, right);
  const double dist = (right - left).norm();
  const double size = static_cast<double>(cfg.out_size);
  const double scale = cfg.eye_frac * size / dist;

  AffineTransform t = derotation_transform(Point2::Zero(), angle, scale);
  const Point2 mid = 0.5 * (left + right);
  const Point2 anchor(cfg.anchor_x * size, cfg.anchor_y * size);
  t.m.col(2) = anchor - t.m.leftCols<2>() * mid;
  return t;
}

ImageBuf align_face(const ImageBuf& img, const BoundingBox& box,
                    const LandmarkSet& lm, const AlignConfig& cfg) {
  if (!power_of_two(cfg.out_size) || cfg.out_size < 8)
    raise(ErrorCode::ShapeMismatch, "out_size must be a power of two >= 8");
  validate_box(box);
  const AffineTransform t = align_transform(lm, cfg);
  return apply_affine(img, t, cfg.out_size, cfg.out_size, cfg);
}

}  // namespace invedit
