#pragma once

#include <array>

#include "poreimg/error.hpp"

namespace poreimg {

/// 2D point in pixel units (x along columns, y along rows).
struct Pt {
  double x = 0.0;
  double y = 0.0;
};

inline Pt operator+(Pt a, Pt b) { return {a.x + b.x, a.y + b.y}; }
inline Pt operator-(Pt a, Pt b) { return {a.x - b.x, a.y - b.y}; }
inline Pt operator*(double s, Pt a) { return {s * a.x, s * a.y}; }

/// Row-major 3x3 projective transform.
struct Mat3 {
  std::array<double, 9> a{1, 0, 0, 0, 1, 0, 0, 0, 1};

  static Mat3 identity() { return {}; }

  Pt apply(Pt p) const {
    double w = a[6] * p.x + a[7] * p.y + a[8];
    require(w != 0.0, "Mat3::apply: point at infinity");
    return {(a[0] * p.x + a[1] * p.y + a[2]) / w, (a[3] * p.x + a[4] * p.y + a[5]) / w};
  }

  Mat3 operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0;
        for (int k = 0; k < 3; ++k) s += a[i * 3 + k] * o.a[k * 3 + j];
        r.a[i * 3 + j] = s;
      }
    return r;
  }

  Mat3 inverse() const;
};

/// Homography mapping the four `src` points onto the four `dst` points
/// (exact 8-DOF solve from the correspondences).
Mat3 homography_from_corners(const std::array<Pt, 4>& src, const std::array<Pt, 4>& dst);

}  // namespace poreimg
