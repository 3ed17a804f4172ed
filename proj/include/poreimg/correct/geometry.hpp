#pragma once

#include <array>

#include "poreimg/geom.hpp"
#include "poreimg/image.hpp"

namespace poreimg::correct {

/// Separable in-plane distortion in normalized [0,1]^2 coordinates.
/// stretch: linear scale about a center; bulge: quadratic displacement
/// u -> u + b*u*(1-u) that vanishes at the domain edges (|b| < 1 keeps the
/// map monotone, hence invertible).
struct BulgeStretch {
  double bulge_x = 0.0, bulge_y = 0.0;
  double stretch_x = 0.0, stretch_y = 0.0;
  double center_x = 0.5, center_y = 0.5;

  bool is_identity() const {
    return bulge_x == 0.0 && bulge_y == 0.0 && stretch_x == 0.0 && stretch_y == 0.0;
  }
  Pt apply(Pt uv) const;
  Pt invert(Pt uv) const;
};

/// Rectification map: perspective homography composed with bulge and
/// stretch, sending an output rectangle of known physical size onto the
/// source quadrilateral spanned by four pixel corners.
class GeometricCorrection {
 public:
  /// corners: source pixel positions of (top-left, top-right, bottom-right,
  /// bottom-left) of the region that becomes the target rectangle. Output
  /// pixel counts default to the mean source edge lengths.
  GeometricCorrection(const std::array<Pt, 4>& corners, double target_width_m,
                      double target_height_m, const BulgeStretch& warp = {}, int out_rows = 0,
                      int out_cols = 0);

  /// Composed map from output (target) pixel coords to source pixel coords.
  Pt target_to_source(Pt target_px) const;
  Pt source_to_target(Pt source_px) const;

  /// Round-trips a test grid through the map and its inverse; throws when
  /// the deviation exceeds tol_px.
  void verify_bijective(double tol_px = 0.1) const;

  const Mat3& homography() const { return homography_; }
  int out_rows() const { return out_rows_; }
  int out_cols() const { return out_cols_; }
  double target_width() const { return target_width_; }
  double target_height() const { return target_height_; }
  const std::array<Pt, 4>& corners() const { return corners_; }
  const BulgeStretch& warp() const { return warp_; }

 private:
  std::array<Pt, 4> corners_;
  double target_width_, target_height_;
  BulgeStretch warp_;
  int out_rows_, out_cols_;
  Mat3 homography_;          // target px -> source px
  Mat3 homography_inverse_;
};

GeometricCorrection build_geometric_correction(const std::array<Pt, 4>& corners,
                                               double target_width_m, double target_height_m,
                                               const BulgeStretch& warp = {}, int out_rows = 0,
                                               int out_cols = 0);

/// Resample the image onto the target rectangle; the result carries the
/// target physical dimensions (origin kept from the input image).
PhysicalImage apply_geometric_correction(const GeometricCorrection& correction,
                                         const PhysicalImage& image);

}  // namespace poreimg::correct
