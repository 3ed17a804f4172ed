#include "poreimg/geom.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace poreimg {

Mat3 Mat3::inverse() const {
  const auto& m = a;
  double det = m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
               m[2] * (m[3] * m[7] - m[4] * m[6]);
  require(std::abs(det) > 1e-300, "Mat3::inverse: singular matrix");
  Mat3 r;
  r.a[0] = (m[4] * m[8] - m[5] * m[7]) / det;
  r.a[1] = (m[2] * m[7] - m[1] * m[8]) / det;
  r.a[2] = (m[1] * m[5] - m[2] * m[4]) / det;
  r.a[3] = (m[5] * m[6] - m[3] * m[8]) / det;
  r.a[4] = (m[0] * m[8] - m[2] * m[6]) / det;
  r.a[5] = (m[2] * m[3] - m[0] * m[5]) / det;
  r.a[6] = (m[3] * m[7] - m[4] * m[6]) / det;
  r.a[7] = (m[1] * m[6] - m[0] * m[7]) / det;
  r.a[8] = (m[0] * m[4] - m[1] * m[3]) / det;
  return r;
}

Mat3 homography_from_corners(const std::array<Pt, 4>& src, const std::array<Pt, 4>& dst) {
  // Standard 8x8 direct linear solve with h22 pinned to 1.
  Eigen::Matrix<double, 8, 8> A = Eigen::Matrix<double, 8, 8>::Zero();
  Eigen::Matrix<double, 8, 1> b;
  for (int i = 0; i < 4; ++i) {
    double x = src[i].x, y = src[i].y, u = dst[i].x, v = dst[i].y;
    A.row(2 * i) << x, y, 1, 0, 0, 0, -x * u, -y * u;
    A.row(2 * i + 1) << 0, 0, 0, x, y, 1, -x * v, -y * v;
    b(2 * i) = u;
    b(2 * i + 1) = v;
  }
  Eigen::FullPivLU<Eigen::Matrix<double, 8, 8>> lu(A);
  require(lu.isInvertible(), "homography_from_corners: degenerate correspondences");
  Eigen::Matrix<double, 8, 1> h = lu.solve(b);
  Mat3 m;
  for (int i = 0; i < 8; ++i) m.a[i] = h(i);
  m.a[8] = 1.0;
  return m;
}

}  // namespace poreimg
