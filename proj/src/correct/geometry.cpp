#include "poreimg/correct/geometry.hpp"

#include <cmath>

namespace poreimg::correct {

namespace {

double stretch1(double u, double s, double c) { return c + (1.0 + s) * (u - c); }
double unstretch1(double u, double s, double c) { return c + (u - c) / (1.0 + s); }

double bulge1(double u, double b) { return u + b * u * (1.0 - u); }

// Inverse of u -> (1+b)u - b u^2 on [0,1], written against cancellation.
double unbulge1(double u, double b) {
  if (b == 0.0) return u;
  double disc = (1.0 + b) * (1.0 + b) - 4.0 * b * u;
  return 2.0 * u / ((1.0 + b) + std::sqrt(disc));
}

double edge_len(Pt a, Pt b) { return std::hypot(b.x - a.x, b.y - a.y); }

bool convex_quad(const std::array<Pt, 4>& q) {
  double sign = 0.0;
  for (int i = 0; i < 4; ++i) {
    Pt a = q[i], b = q[(i + 1) % 4], c = q[(i + 2) % 4];
    double cross = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
    if (cross == 0.0) return false;  // collinear corners
    if (sign == 0.0)
      sign = cross;
    else if (sign * cross < 0.0)
      return false;
  }
  return true;
}

}  // namespace

Pt BulgeStretch::apply(Pt uv) const {
  Pt s{stretch1(uv.x, stretch_x, center_x), stretch1(uv.y, stretch_y, center_y)};
  return {bulge1(s.x, bulge_x), bulge1(s.y, bulge_y)};
}

Pt BulgeStretch::invert(Pt uv) const {
  Pt s{unbulge1(uv.x, bulge_x), unbulge1(uv.y, bulge_y)};
  return {unstretch1(s.x, stretch_x, center_x), unstretch1(s.y, stretch_y, center_y)};
}

GeometricCorrection::GeometricCorrection(const std::array<Pt, 4>& corners, double target_width_m,
                                         double target_height_m, const BulgeStretch& warp,
                                         int out_rows, int out_cols)
    : corners_(corners),
      target_width_(target_width_m),
      target_height_(target_height_m),
      warp_(warp) {
  require(target_width_m > 0.0 && target_height_m > 0.0,
          "GeometricCorrection: target dimensions must be positive");
  require(convex_quad(corners), "GeometricCorrection: corners must form a convex quadrilateral");
  require(std::abs(warp.bulge_x) < 1.0 && std::abs(warp.bulge_y) < 1.0 &&
              warp.stretch_x > -1.0 && warp.stretch_y > -1.0,
          "GeometricCorrection: bulge/stretch coefficients out of the invertible range");

  out_cols_ = out_cols > 0
                  ? out_cols
                  : static_cast<int>(std::lround(
                        0.5 * (edge_len(corners[0], corners[1]) + edge_len(corners[3], corners[2])))) +
                        1;
  out_rows_ = out_rows > 0
                  ? out_rows
                  : static_cast<int>(std::lround(
                        0.5 * (edge_len(corners[0], corners[3]) + edge_len(corners[1], corners[2])))) +
                        1;
  require(out_rows_ >= 2 && out_cols_ >= 2, "GeometricCorrection: degenerate output size");

  double w = out_cols_ - 1.0, h = out_rows_ - 1.0;
  std::array<Pt, 4> target{{{0, 0}, {w, 0}, {w, h}, {0, h}}};
  homography_ = homography_from_corners(target, corners);
  homography_inverse_ = homography_.inverse();
}

Pt GeometricCorrection::target_to_source(Pt t) const {
  double w = out_cols_ - 1.0, h = out_rows_ - 1.0;
  Pt uv = warp_.apply({t.x / w, t.y / h});
  return homography_.apply({uv.x * w, uv.y * h});
}

Pt GeometricCorrection::source_to_target(Pt s) const {
  double w = out_cols_ - 1.0, h = out_rows_ - 1.0;
  Pt t = homography_inverse_.apply(s);
  Pt uv = warp_.invert({t.x / w, t.y / h});
  return {uv.x * w, uv.y * h};
}

void GeometricCorrection::verify_bijective(double tol_px) const {
  const int n = 25;
  double w = out_cols_ - 1.0, h = out_rows_ - 1.0;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      Pt t{w * j / n, h * i / n};
      Pt back = source_to_target(target_to_source(t));
      double err = std::hypot(back.x - t.x, back.y - t.y);
      require(err <= tol_px, "GeometricCorrection: inverse round trip exceeds tolerance");
    }
  }
}

GeometricCorrection build_geometric_correction(const std::array<Pt, 4>& corners,
                                               double target_width_m, double target_height_m,
                                               const BulgeStretch& warp, int out_rows,
                                               int out_cols) {
  GeometricCorrection c(corners, target_width_m, target_height_m, warp, out_rows, out_cols);
  c.verify_bijective();
  return c;
}

PhysicalImage apply_geometric_correction(const GeometricCorrection& correction,
                                         const PhysicalImage& image) {
  const Tensor& src = image.data();
  Tensor out(correction.out_rows(), correction.out_cols(), src.channels());
  for (int r = 0; r < out.rows(); ++r) {
    for (int c = 0; c < out.cols(); ++c) {
      Pt s = correction.target_to_source({static_cast<double>(c), static_cast<double>(r)});
      for (int ch = 0; ch < src.channels(); ++ch) {
        double v = bilinear_sample(src, s.y, s.x, ch, Border::Clamp);
        out(r, c, ch) = image.colorspace() == Colorspace::BINARY ? (v >= 0.5 ? 1.0 : 0.0) : v;
      }
    }
  }
  out.clamp(0.0, 1.0);
  return PhysicalImage(std::move(out), correction.target_width(), correction.target_height(),
                       image.origin(), image.timestamp(), image.colorspace());
}

}  // namespace poreimg::correct
