#pragma once

#include <Eigen/Core>
#include <span>
#include <utility>
#include <vector>

#include "invedit/image.hpp"

namespace invedit {

using Point2 = Eigen::Vector2d;

struct BoundingBox {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  double area() const { return (x1 - x0) * (y1 - y0); }
};

void validate_box(const BoundingBox& b);

// Ordered landmark points plus half-open index ranges naming the left and
// right eye groups. Defaults are the 6-point eye groups of the standard
// 68-landmark layout.
struct LandmarkSet {
  std::vector<Point2> points;
  int eye_left_begin = 36;
  int eye_left_end = 42;
  int eye_right_begin = 42;
  int eye_right_end = 48;
};

// 2x3 row-major affine map, applied as p' = M * [x y 1]^T. Maps source
// coordinates to output coordinates; apply_affine inverts it per pixel.
struct AffineTransform {
  Eigen::Matrix<double, 2, 3> m = Eigen::Matrix<double, 2, 3>::Zero();

  static AffineTransform identity();
  Point2 apply(const Point2& p) const {
    return m.leftCols<2>() * p + m.col(2);
  }
};

enum class PadMode { reflect, replicate, constant };

struct AlignConfig {
  int out_size = 1024;           // >= 8 and a power of two
  PadMode pad_mode = PadMode::reflect;
  double pad_value = 0.0;        // constant mode only
  double eye_frac = 0.28;        // eye-to-eye distance as a fraction of out_size
  double anchor_x = 0.5;         // eye midpoint target, fraction of out_size
  double anchor_y = 0.42;
};

// Largest-area box; ties broken by smallest x0, then smallest y0.
BoundingBox select_primary_face(std::span<const BoundingBox> boxes);

// Mean of each eye group, returned (left, right) by ascending center x.
std::pair<Point2, Point2> eye_centers(const LandmarkSet& lm);

// Eye-line angle in degrees, atan2(right.y-left.y, right.x-left.x),
// normalized to (-180, 180].
double rotation_angle(const Point2& left, const Point2& right);

// Rotation by -angle about `center` composed with uniform scale; applying it
// to the eye-line endpoints yields a horizontal segment.
AffineTransform derotation_transform(const Point2& center, double angle_deg, double scale);

// Inverse-maps each output pixel through t and bilinear-samples the source,
// padding out-of-bounds reads per cfg.pad_mode.
ImageBuf apply_affine(const ImageBuf& img, const AffineTransform& t, int out_w,
                      int out_h, const AlignConfig& cfg);

// Canonical alignment: eyes horizontal, eye distance eye_frac*out_size, eye
// midpoint at (anchor_x, anchor_y)*out_size, output out_size x out_size.
ImageBuf align_face(const ImageBuf& img, const BoundingBox& box,
                    const LandmarkSet& lm, const AlignConfig& cfg);

// The similarity transform align_face warps with; exposed so callers can map
// landmarks into the aligned frame.
AffineTransform align_transform(const LandmarkSet& lm, const AlignConfig& cfg);

}  // namespace invedit
