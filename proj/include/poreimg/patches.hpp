#pragma once

#include <vector>

#include "poreimg/image.hpp"

namespace poreimg {

/// Overlapping patch decomposition of a PhysicalImage. Patches tile the
/// parent domain; overlap bands are blended back with per-axis linear
/// ramps that sum to one at every pixel.
class PatchSet {
 public:
  PatchSet(const PhysicalImage& parent, int num_v, int num_h, double overlap);

  int num_v() const { return num_v_; }
  int num_h() const { return num_h_; }

  const PhysicalImage& patch(int i, int j) const { return patches_[index(i, j)]; }
  /// Replace patch (i, j); the new image must keep the patch shape.
  void set_patch(int i, int j, PhysicalImage image);

  /// Pixel range of patch (i, j) in the parent image, inclusive.
  struct Range {
    int r0, r1, c0, c1;
  };
  Range range(int i, int j) const { return ranges_[index(i, j)]; }

  /// Blending weight of patch (i, j) at parent pixel (r, c).
  double weight(int i, int j, int r, int c) const;

  /// Convex recombination of the patches into a full image.
  PhysicalImage assemble() const;

  const CoordinateSystem& parent_coords() const { return parent_coords_; }
  Colorspace parent_colorspace() const { return parent_colorspace_; }

 private:
  int index(int i, int j) const { return i * num_h_ + j; }
  double axis_weight(int band_lo, int ext, bool has_lo, int band_hi, bool has_hi,
                     int p) const;

  int num_v_ = 1, num_h_ = 1;
  int ext_r_ = 0, ext_c_ = 0;
  std::vector<int> row_bounds_, col_bounds_;  // base tile boundaries, size n+1
  std::vector<PhysicalImage> patches_;
  std::vector<Range> ranges_;
  CoordinateSystem parent_coords_;
  Colorspace parent_colorspace_ = Colorspace::GRAY;
  std::optional<double> parent_timestamp_;
};

PatchSet make_patches(const PhysicalImage& image, int num_v, int num_h, double overlap = 0.0);

}  // namespace poreimg
